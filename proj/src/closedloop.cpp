#include "desync/closedloop.hpp"

#include <algorithm>

#include "desync/buffers.hpp"
#include "desync/semantics.hpp"

namespace desync {

std::string to_string(Method m) {
  switch (m) {
    case Method::sync: return "sync";
    case Method::m1: return "m1";
    case Method::m2: return "m2";
    case Method::m3: return "m3";
    case Method::m4: return "m4";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view text) {
  if (text == "sync") return Method::sync;
  if (text == "m1" || text == "M1") return Method::m1;
  if (text == "m2" || text == "M2") return Method::m2;
  if (text == "m3" || text == "M3") return Method::m3;
  if (text == "m4" || text == "M4") return Method::m4;
  return std::nullopt;
}

namespace {

std::set<std::string> comm_labels(const Signature& sig, const std::set<ChannelId>& channels) {
  std::set<std::string> out;
  for (ChannelId c : channels)
    for (DatumId d : sig.channel_data(c)) out.insert(to_string(Action::comm(c, d), sig));
  return out;
}

void append_actions(std::vector<Action>& out, const Signature& sig, ChannelId c, Polarity p) {
  for (DatumId d : sig.channel_data(c)) out.push_back({p, c, d});
}

void require_valid(const RecursiveSpec& spec, const Term& t, const char* role, std::size_t cap) {
  auto v = check_plant_validity(spec, t, cap);
  if (!v.valid()) throw Error(std::string(role) + " is not valid: " + v.explain(spec.signature()));
}

}  // namespace

std::set<std::string> ChannelPartition::input_labels(const Signature& sig) const {
  return comm_labels(sig, plant_inputs);
}

std::set<std::string> ChannelPartition::output_labels(const Signature& sig) const {
  return comm_labels(sig, plant_outputs);
}

ChannelPartition channel_partition(const RecursiveSpec& spec, const Term& plant, const Term& supervisor) {
  const Signature& sig = spec.signature();
  auto dp = channel_direction(spec, plant);
  auto ds = channel_direction(spec, supervisor);
  ChannelPartition out;
  for (const auto& [ch, dir] : dp) {
    auto it = ds.find(ch);
    if (it != ds.end() && it->second == dir)
      throw Error("channel '" + sig.channel_name(ch) + "' has the same direction in plant and supervisor");
    (dir == Direction::input ? out.plant_inputs : out.plant_outputs).insert(ch);
    if (it == ds.end()) {
      out.one_sided.insert(ch);
      out.warnings.push_back("channel '" + sig.channel_name(ch) + "' is used by the plant only");
    }
  }
  for (const auto& [ch, dir] : ds) {
    if (dp.count(ch) != 0) continue;
    (dir == Direction::output ? out.plant_inputs : out.plant_outputs).insert(ch);
    out.one_sided.insert(ch);
    out.warnings.push_back("channel '" + sig.channel_name(ch) + "' is used by the supervisor only");
  }
  if (out.plant_inputs.empty() && out.plant_outputs.empty())
    out.warnings.push_back("plant and supervisor share no channels");
  else if (out.one_sided.size() == out.plant_inputs.size() + out.plant_outputs.size())
    out.warnings.push_back("plant and supervisor have disjoint alphabets");
  return out;
}

Term sync_closed_loop(const RecursiveSpec& spec, const Term& plant, const Term& supervisor, std::size_t cap) {
  require_valid(spec, plant, "plant", cap);
  require_valid(spec, supervisor, "supervisor", cap);
  auto part = channel_partition(spec, plant, supervisor);
  std::vector<Action> blocked;
  for (const auto* set : {&part.plant_inputs, &part.plant_outputs}) {
    for (ChannelId c : *set) {
      append_actions(blocked, spec.signature(), c, Polarity::send);
      append_actions(blocked, spec.signature(), c, Polarity::receive);
    }
  }
  return Term::encap(make_action_set(std::move(blocked)), Term::par(plant, supervisor));
}

AsyncLoop async_closed_loop(const RecursiveSpec& spec, const Term& plant, const Term& supervisor,
                            const LoopConfig& cfg) {
  if (cfg.method == Method::sync) throw Error("async_closed_loop needs one of the methods m1..m4");
  require_valid(spec, plant, "plant", cfg.state_cap);
  require_valid(spec, supervisor, "supervisor", cfg.state_cap);
  const Signature& sig = spec.signature();

  AsyncLoop loop;
  loop.partition = channel_partition(spec, plant, supervisor);
  const auto& inputs = loop.partition.plant_inputs;
  const auto& outputs = loop.partition.plant_outputs;
  std::vector<ChannelId> channels(inputs.begin(), inputs.end());
  channels.insert(channels.end(), outputs.begin(), outputs.end());
  std::sort(channels.begin(), channels.end());
  for (ChannelId c : channels)
    if (Signature::is_hatted(c))
      throw Error("plant and supervisor must only use base channels, found '" + sig.channel_name(c) + "'");

  Term renamed_plant = rename_input_channels(spec, plant, hat_channel);
  Term renamed_supervisor = rename_input_channels(spec, supervisor, hat_channel);
  Term bank = buffer_bank(sig, channels, cfg.buffer);

  std::vector<Action> blocked;
  for (ChannelId c : channels) {
    for (ChannelId x : {c, hat_channel(c)}) {
      append_actions(blocked, sig, x, Polarity::send);
      append_actions(blocked, sig, x, Polarity::receive);
    }
  }
  loop.wired = Term::encap(make_action_set(std::move(blocked)),
                           Term::par(Term::par(renamed_plant, bank), renamed_supervisor));

  std::vector<ChannelId> hidden_channels;
  auto hide_base = [&](const std::set<ChannelId>& set) { hidden_channels.insert(hidden_channels.end(), set.begin(), set.end()); };
  auto hide_hatted = [&](const std::set<ChannelId>& set) {
    for (ChannelId c : set) hidden_channels.push_back(hat_channel(c));
  };
  switch (cfg.method) {
    case Method::m1: hide_hatted(inputs); hide_base(outputs); break;
    case Method::m2: hide_hatted(outputs); hide_base(inputs); break;
    case Method::m3: hide_base(inputs); hide_base(outputs); break;
    case Method::m4: hide_hatted(inputs); hide_hatted(outputs); break;
    case Method::sync: break;
  }
  std::vector<Action> hidden;
  for (ChannelId c : hidden_channels) append_actions(hidden, sig, c, Polarity::comm);
  loop.hidden = make_action_set(std::move(hidden));

  ChannelMap relabel;
  for (ChannelId c : channels) relabel.emplace_back(hat_channel(c), c);
  loop.relabel = make_channel_map(std::move(relabel));
  loop.term = Term::rename(loop.relabel, Term::hide(loop.hidden, loop.wired));
  return loop;
}

EquivVerdict verify_supervisor(const RecursiveSpec& spec, const Term& plant, const Term& supervisor,
                               const Term& requirement, std::size_t cap) {
  auto rv = check_requirement_validity(spec, requirement, cap);
  if (!rv.valid()) throw Error("requirement is not valid: " + rv.explain(spec.signature()));
  Lts loop = generate_lts(spec, sync_closed_loop(spec, plant, supervisor, cap), cap);
  Lts req = generate_lts(spec, requirement, cap);
  loop.require_complete("synchronous loop");
  req.require_complete("requirement");
  return strong_bisim(loop, req);
}

}  // namespace desync
