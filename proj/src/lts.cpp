#include "desync/lts.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "desync/term.hpp"

namespace desync {

namespace {

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_ident(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_ident_char);
}

}  // namespace

Label parse_label(std::string_view text) {
  if (text == "tau" || text == "i") return Label{};
  Label opaque{LabelKind::opaque, "", "", std::string(text)};

  std::size_t op = text.find_first_of("?!");
  if (op == std::string_view::npos || op == 0) return opaque;
  std::string_view channel = text.substr(0, op);
  std::string_view base = channel;
  if (base.back() == '\'') base.remove_suffix(1);
  if (!is_ident(base)) return opaque;

  LabelKind kind;
  std::size_t rest = op + 1;
  if (text[op] == '!') {
    kind = LabelKind::send;
  } else if (op + 1 < text.size() && text[op + 1] == '!') {
    kind = LabelKind::comm;
    rest = op + 2;
  } else {
    kind = LabelKind::receive;
  }
  std::string_view datum = text.substr(rest);
  if (datum.empty()) datum = "unit";
  if (!is_ident(datum)) return opaque;

  static constexpr const char* kOps[] = {"", "!", "?", "?!", ""};
  Label out{kind, std::string(channel), std::string(datum), {}};
  out.text = out.channel + kOps[static_cast<int>(kind)] + out.datum;
  return out;
}

Lts::Lts() {
  labels.push_back(Label{});
  label_index_.emplace("tau", 0);
}

StateId Lts::add_state(bool is_terminating) {
  terminating.push_back(is_terminating);
  return static_cast<StateId>(num_states++);
}

LabelId Lts::intern_label(const Label& label) {
  if (label.is_tau()) return 0;
  auto it = label_index_.find(label.text);
  if (it != label_index_.end()) return it->second;
  auto id = static_cast<LabelId>(labels.size());
  labels.push_back(label);
  label_index_.emplace(label.text, id);
  return id;
}

std::optional<LabelId> Lts::find_label(std::string_view text) const {
  auto it = label_index_.find(text);
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

void Lts::add_transition(StateId src, LabelId label, StateId dst) {
  transitions.push_back({src, label, dst});
}

std::vector<std::string> Lts::alphabet() const {
  std::vector<bool> used(labels.size(), false);
  for (const auto& t : transitions) used[t.label] = true;
  std::vector<std::string> out;
  for (std::size_t i = 1; i < labels.size(); ++i)
    if (used[i]) out.push_back(labels[i].text);
  std::sort(out.begin(), out.end());
  return out;
}

void Lts::require_complete(std::string_view what) const {
  if (truncated)
    throw TruncationError(std::string(what) + ": state space truncated at cap " + std::to_string(cap));
}

std::vector<std::uint32_t> label_ranks(const Lts& lts) {
  std::vector<std::uint32_t> order(lts.labels.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return lts.labels[a].text < lts.labels[b].text; });
  std::vector<std::uint32_t> rank(lts.labels.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  return rank;
}

Adjacency::Adjacency(const Lts& lts) : offsets(lts.num_states + 1, 0), edges(lts.transitions) {
  auto rank = label_ranks(lts);
  std::sort(edges.begin(), edges.end(), [&](const Transition& a, const Transition& b) {
    if (a.source != b.source) return a.source < b.source;
    if (a.label != b.label) return rank[a.label] < rank[b.label];
    return a.target < b.target;
  });
  for (const auto& t : edges) ++offsets[t.source + 1];
  for (std::size_t i = 0; i < lts.num_states; ++i) offsets[i + 1] += offsets[i];
}

Lts to_communication_labels(const Lts& lts) {
  Lts out;
  out.num_states = lts.num_states;
  out.initial = lts.initial;
  out.terminating = lts.terminating;
  out.truncated = lts.truncated;
  out.cap = lts.cap;
  out.unexplored = lts.unexplored;
  std::vector<LabelId> map(lts.labels.size());
  for (std::size_t i = 0; i < lts.labels.size(); ++i) {
    Label l = lts.labels[i];
    if (l.kind == LabelKind::send || l.kind == LabelKind::receive) {
      l.kind = LabelKind::comm;
      l.text = l.channel + "?!" + l.datum;
    }
    map[i] = out.intern_label(l);
  }
  for (const auto& t : lts.transitions) out.add_transition(t.source, map[t.label], t.target);
  std::sort(out.transitions.begin(), out.transitions.end());
  out.transitions.erase(std::unique(out.transitions.begin(), out.transitions.end()), out.transitions.end());
  return out;
}

Lts canonical_form(const Lts& lts) {
  Adjacency adj(lts);
  constexpr StateId kNone = ~StateId{0};
  std::vector<StateId> number(lts.num_states, kNone);
  std::vector<StateId> order;
  Lts out;
  if (lts.num_states == 0) return out;
  std::deque<StateId> queue{lts.initial};
  number[lts.initial] = 0;
  order.push_back(lts.initial);
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (std::size_t e = adj.begin(s); e < adj.end(s); ++e) {
      StateId t = adj.edges[e].target;
      if (number[t] != kNone) continue;
      number[t] = static_cast<StateId>(order.size());
      order.push_back(t);
      queue.push_back(t);
    }
  }
  for (StateId s : order) out.add_state(lts.terminating[s]);
  out.initial = 0;
  std::vector<LabelId> label_map(lts.labels.size());
  for (std::size_t i = 0; i < lts.labels.size(); ++i) label_map[i] = out.intern_label(lts.labels[i]);
  for (StateId s : order)
    for (std::size_t e = adj.begin(s); e < adj.end(s); ++e)
      out.add_transition(number[s], label_map[adj.edges[e].label], number[adj.edges[e].target]);
  out.truncated = lts.truncated;
  out.cap = lts.cap;
  for (StateId s : lts.unexplored)
    if (number[s] != kNone) out.unexplored.push_back(number[s]);
  std::sort(out.unexplored.begin(), out.unexplored.end());
  return out;
}

bool identical(const Lts& a, const Lts& b) {
  if (a.num_states != b.num_states || a.initial != b.initial || a.terminating != b.terminating ||
      a.transitions.size() != b.transitions.size() || a.truncated != b.truncated)
    return false;
  auto key = [](const Lts& l) {
    std::vector<std::tuple<StateId, std::string, StateId>> out;
    for (const auto& t : l.transitions) out.emplace_back(t.source, l.labels[t.label].text, t.target);
    std::sort(out.begin(), out.end());
    return out;
  };
  return key(a) == key(b);
}

}  // namespace desync
