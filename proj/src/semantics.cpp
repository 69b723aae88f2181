#include "desync/semantics.hpp"

#include <algorithm>
#include <unordered_map>

#include "term_store.hpp"

namespace desync {

using detail::NodeId;
using detail::PackedAction;
using detail::Step;

Lts generate_lts(const RecursiveSpec& spec, const Term& root, std::size_t cap) {
  if (cap == 0) throw Error("state cap must be positive");
  if (auto missing = unbound_variables(spec, root); !missing.empty())
    throw Error("unbound recursion variable '" + missing.front() + "'");
  if (auto x = find_unguarded_variable(spec)) throw Error("unguarded recursion through '" + *x + "'");

  detail::TermStore store(spec);
  std::vector<detail::Wrapper> wrappers;
  NodeId inner_root = store.peel(store.intern(root), wrappers);

  Lts lts;
  lts.cap = cap;
  constexpr StateId kNone = ~StateId{0};
  std::vector<StateId> state_of;  // indexed by node id
  std::vector<NodeId> node_of;
  auto lookup = [&](NodeId n) -> StateId& {
    if (n >= state_of.size()) state_of.resize(std::max<std::size_t>(n + 1, state_of.size() * 2), kNone);
    return state_of[n];
  };

  std::unordered_map<PackedAction, LabelId> label_of;
  auto label_for = [&](PackedAction a) {
    auto it = label_of.find(a);
    if (it != label_of.end()) return it->second;
    LabelId id = lts.intern_label(to_string(detail::unpack(a), spec.signature()));
    label_of.emplace(a, id);
    return id;
  };

  lookup(inner_root) = lts.add_state(store.terminating(inner_root));
  node_of.push_back(inner_root);

  std::vector<Step> steps;
  std::vector<std::pair<LabelId, StateId>> edges;
  for (StateId current = 0; current < node_of.size(); ++current) {
    steps.clear();
    store.steps(node_of[current], steps);
    edges.clear();
    bool stop = false;
    for (auto s : steps) {
      if (!store.apply_wrappers(wrappers, s.action)) continue;
      StateId& slot = lookup(s.target);
      if (slot == kNone) {
        if (lts.num_states >= cap) {
          stop = true;
          continue;
        }
        slot = lts.add_state(store.terminating(s.target));
        node_of.push_back(s.target);
      }
      edges.emplace_back(label_for(s.action), slot);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (auto [l, t] : edges) lts.add_transition(current, l, t);
    if (stop) {
      lts.truncated = true;
      for (StateId s = current; s < node_of.size(); ++s) lts.unexplored.push_back(s);
      break;
    }
  }
  return lts;
}

DeterminismVerdict is_deterministic(const Lts& lts) {
  lts.require_complete("determinism check");
  Adjacency adj(lts);
  for (StateId s = 0; s < lts.num_states; ++s) {
    for (std::size_t e = adj.begin(s) + 1; e < adj.end(s); ++e) {
      const auto& prev = adj.edges[e - 1];
      const auto& cur = adj.edges[e];
      if (prev.label == cur.label && prev.target != cur.target)
        return {false, s, lts.labels[cur.label].text, prev.target, cur.target};
    }
  }
  return {};
}

std::string ValidityVerdict::explain(const Signature& sig) const {
  std::string out;
  if (!simple.simple)
    out += "not simple: channel " + sig.channel_name(*simple.channel) + " has " + to_string(*simple.send, sig) +
           " and " + to_string(*simple.receive, sig) + "; ";
  if (!determinism.deterministic)
    out += "nondeterministic at state " + std::to_string(determinism.state) + " on " + determinism.label + "; ";
  if (forbidden_label) out += "forbidden label " + *forbidden_label + "; ";
  if (out.empty()) return "valid";
  out.resize(out.size() - 2);
  return out;
}

namespace {

ValidityVerdict check_component(const RecursiveSpec& spec, const Term& root, std::size_t cap, bool requirement) {
  ValidityVerdict v;
  if (!requirement) v.simple = is_simple(spec, root);
  Lts lts = generate_lts(spec, root, cap);
  lts.require_complete("validity check");
  v.states = lts.num_states;
  v.determinism = is_deterministic(lts);
  std::vector<bool> used(lts.labels.size(), false);
  for (const auto& t : lts.transitions) used[t.label] = true;
  for (std::size_t i = 0; i < lts.labels.size(); ++i) {
    if (!used[i]) continue;
    const Label& l = lts.labels[i];
    bool ok = requirement ? l.kind == LabelKind::comm : l.kind != LabelKind::comm;
    if (!ok) {
      v.forbidden_label = l.text;
      break;
    }
  }
  return v;
}

}  // namespace

ValidityVerdict check_plant_validity(const RecursiveSpec& spec, const Term& root, std::size_t cap) {
  return check_component(spec, root, cap, false);
}

ValidityVerdict check_supervisor_validity(const RecursiveSpec& spec, const Term& root, std::size_t cap) {
  return check_component(spec, root, cap, false);
}

ValidityVerdict check_requirement_validity(const RecursiveSpec& spec, const Term& root, std::size_t cap) {
  return check_component(spec, root, cap, true);
}

}  // namespace desync
