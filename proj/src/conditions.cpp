#include "desync/conditions.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace desync {

std::string to_string(Role r) { return r == Role::plant ? "plant" : "supervisor"; }

std::string to_string(CycleSide s) { return s == CycleSide::inputs ? "inputs" : "outputs"; }

namespace {

constexpr StateId kNone = ~StateId{0};

// Breadth-first parents from the initial state over edges accepted by `keep`.
struct BfsTree {
  std::vector<StateId> order;
  std::vector<StateId> parent;
  std::vector<LabelId> via;

  std::vector<std::string> trace_to(const Lts& lts, StateId s) const {
    std::vector<std::string> out;
    for (StateId u = s; parent[u] != kNone; u = parent[u]) out.push_back(lts.labels[via[u]].text);
    std::reverse(out.begin(), out.end());
    return out;
  }
};

template <typename Keep>
BfsTree bfs(const Lts& lts, const Adjacency& adj, StateId from, Keep keep) {
  BfsTree tree;
  tree.parent.assign(lts.num_states, kNone);
  tree.via.assign(lts.num_states, 0);
  if (lts.num_states == 0) return tree;
  std::vector<bool> seen(lts.num_states, false);
  seen[from] = true;
  tree.order.push_back(from);
  for (std::size_t i = 0; i < tree.order.size(); ++i) {
    StateId s = tree.order[i];
    for (std::size_t e = adj.begin(s); e < adj.end(s); ++e) {
      const auto& t = adj.edges[e];
      if (!keep(t.label) || seen[t.target]) continue;
      seen[t.target] = true;
      tree.parent[t.target] = s;
      tree.via[t.target] = t.label;
      tree.order.push_back(t.target);
    }
  }
  return tree;
}

std::string mirror_text(const Label& l) {
  return l.channel + (l.kind == LabelKind::send ? "?" : "!") + l.datum;
}

std::string comm_text(const Label& l) { return l.channel + "?!" + l.datum; }

}  // namespace

WellPosedResult check_well_posed(const Lts& plant, const Lts& supervisor) {
  plant.require_complete("well-posedness (plant)");
  supervisor.require_complete("well-posedness (supervisor)");
  WellPosedResult result;
  if (plant.num_states == 0 || supervisor.num_states == 0) return result;
  Adjacency ap(plant), as(supervisor);

  // Label of the partner matching each label, or none.
  auto partner = [](const Lts& mine, const Lts& other) {
    std::vector<std::optional<LabelId>> out(mine.labels.size());
    for (std::size_t i = 0; i < mine.labels.size(); ++i) {
      const Label& l = mine.labels[i];
      if (l.kind == LabelKind::send || l.kind == LabelKind::receive) out[i] = other.find_label(mirror_text(l));
    }
    return out;
  };
  auto p_to_s = partner(plant, supervisor);
  auto s_to_p = partner(supervisor, plant);

  struct Node {
    StateId p, s;
    std::size_t parent;
    std::string via;
  };
  std::vector<Node> nodes;
  std::map<std::pair<StateId, StateId>, std::size_t> index;
  auto add = [&](StateId p, StateId s, std::size_t parent, std::string via) {
    if (index.emplace(std::pair{p, s}, nodes.size()).second) nodes.push_back({p, s, parent, std::move(via)});
  };
  auto has = [](const Adjacency& adj, StateId s, LabelId l) {
    for (std::size_t e = adj.begin(s); e < adj.end(s); ++e)
      if (adj.edges[e].label == l) return true;
    return false;
  };
  auto path_to = [&](std::size_t i) {
    std::vector<std::string> out;
    for (; i != 0; i = nodes[i].parent)
      if (!nodes[i].via.empty()) out.push_back(nodes[i].via);
    std::reverse(out.begin(), out.end());
    return out;
  };

  add(plant.initial, supervisor.initial, 0, "");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const StateId p = nodes[i].p, s = nodes[i].s;
    for (auto [lts, adj, other_adj, other_state, map, role] :
         {std::tuple{&plant, &ap, &as, s, &p_to_s, Role::plant},
          std::tuple{&supervisor, &as, &ap, p, &s_to_p, Role::supervisor}}) {
      StateId here = role == Role::plant ? p : s;
      for (std::size_t e = adj->begin(here); e < adj->end(here); ++e) {
        const Label& l = lts->labels[adj->edges[e].label];
        if (l.kind != LabelKind::send) continue;
        auto m = (*map)[adj->edges[e].label];
        if (m && has(*other_adj, other_state, *m)) continue;
        WellPosedWitness w;
        w.path = path_to(i);
        w.unmatched = l.text;
        w.role = role;
        w.plant_state = p;
        w.supervisor_state = s;
        result.holds = false;
        result.witness = std::move(w);
        result.pairs = nodes.size();
        return result;
      }
    }
    for (std::size_t e = ap.begin(p); e < ap.end(p); ++e) {
      const auto& t = ap.edges[e];
      const Label& l = plant.labels[t.label];
      if (l.kind == LabelKind::tau || l.kind == LabelKind::comm || l.kind == LabelKind::opaque) {
        add(t.target, s, i, l.kind == LabelKind::tau ? "" : l.text);
        continue;
      }
      auto m = p_to_s[t.label];
      if (!m) continue;
      for (std::size_t f = as.begin(s); f < as.end(s); ++f)
        if (as.edges[f].label == *m) add(t.target, as.edges[f].target, i, comm_text(l));
    }
    for (std::size_t f = as.begin(s); f < as.end(s); ++f) {
      const auto& t = as.edges[f];
      const Label& l = supervisor.labels[t.label];
      if (l.kind == LabelKind::tau || l.kind == LabelKind::comm || l.kind == LabelKind::opaque)
        add(p, t.target, i, l.kind == LabelKind::tau ? "" : l.text);
    }
  }
  result.pairs = nodes.size();
  return result;
}

WellPosedResult check_well_posed(const RecursiveSpec& spec, const Term& plant, const Term& supervisor,
                                 std::size_t cap) {
  return check_well_posed(generate_lts(spec, plant, cap), generate_lts(spec, supervisor, cap));
}

std::vector<SelfLoop> self_loops(const Lts& lts, Role role, const std::string& process) {
  Adjacency adj(lts);
  std::vector<SelfLoop> out;
  for (StateId s = 0; s < lts.num_states; ++s)
    for (std::size_t e = adj.begin(s); e < adj.end(s); ++e)
      if (adj.edges[e].target == s) out.push_back({role, process, s, lts.labels[adj.edges[e].label].text});
  return out;
}

SelfLoopResult check_no_self_loops(const RecursiveSpec& spec, const std::vector<NamedProcess>& plants,
                                   const NamedProcess& supervisor, std::size_t cap) {
  SelfLoopResult result;
  auto scan = [&](const NamedProcess& proc, Role role) {
    Lts lts = generate_lts(spec, proc.term, cap);
    lts.require_complete("self-loop scan");
    for (auto& loop : self_loops(lts, role, proc.name)) result.offenders.push_back(std::move(loop));
  };
  for (const auto& p : plants) scan(p, Role::plant);
  scan(supervisor, Role::supervisor);
  result.holds = result.offenders.empty();
  return result;
}

DiamondResult check_diamond(const Lts& loop) {
  auto det = is_deterministic(loop);
  if (!det.deterministic)
    throw Error("diamond check needs a deterministic loop; state " + std::to_string(det.state) + " has two " +
                det.label + " successors");
  DiamondResult result;
  Adjacency adj(loop);
  auto succ = [&](StateId s, LabelId l) -> StateId {
    for (std::size_t e = adj.begin(s); e < adj.end(s); ++e)
      if (adj.edges[e].label == l) return adj.edges[e].target;
    return kNone;
  };
  auto tree = bfs(loop, adj, loop.initial, [](LabelId) { return true; });
  for (StateId q : tree.order) {
    for (std::size_t i = adj.begin(q); i < adj.end(q); ++i) {
      for (std::size_t j = i + 1; j < adj.end(q); ++j) {
        LabelId a = adj.edges[i].label, b = adj.edges[j].label;
        if (a == b) continue;
        StateId q1 = adj.edges[i].target, q2 = adj.edges[j].target;
        StateId via1 = succ(q1, b), via2 = succ(q2, a);
        if (via1 != kNone && via1 == via2) continue;
        result.holds = false;
        result.witness = DiamondWitness{q, tree.trace_to(loop, q), loop.labels[a].text, loop.labels[b].text, q1, q2};
        return result;
      }
    }
  }
  return result;
}

namespace {

// Shortest non-empty cycle through `start` using only kept labels.
template <typename Keep>
std::optional<CycleWitness> cycle_through(const Lts& lts, const Adjacency& adj, StateId start, Keep keep) {
  auto tree = bfs(lts, adj, start, keep);
  for (StateId s : tree.order) {
    for (std::size_t e = adj.begin(s); e < adj.end(s); ++e) {
      const auto& t = adj.edges[e];
      if (t.target != start || !keep(t.label)) continue;
      CycleWitness w;
      std::vector<StateId> states;
      for (StateId u = s; u != kNone; u = tree.parent[u]) states.push_back(u);
      std::reverse(states.begin(), states.end());
      states.push_back(start);
      w.states = std::move(states);
      w.labels = tree.trace_to(lts, s);
      w.labels.push_back(lts.labels[t.label].text);
      return w;
    }
  }
  return std::nullopt;
}

// Tarjan over the kept edges; returns a representative of the first
// component (in discovery order from the initial state) that contains a cycle.
template <typename Keep>
std::optional<StateId> cyclic_component(const Lts& lts, const Adjacency& adj, const std::vector<StateId>& order,
                                        Keep keep) {
  const std::size_t n = lts.num_states;
  std::vector<std::uint32_t> index(n, kNone), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<StateId> stack;
  std::uint32_t next = 0;
  std::optional<StateId> best;
  std::uint32_t best_rank = kNone;
  std::vector<std::uint32_t> rank(n, kNone);
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<std::uint32_t>(i);
  struct Frame {
    StateId s;
    std::size_t e;
  };
  for (StateId root : order) {
    if (index[root] != kNone) continue;
    std::vector<Frame> call{{root, adj.begin(root)}};
    index[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      StateId s = f.s;
      bool down = false;
      while (f.e < adj.end(s)) {
        const auto& t = adj.edges[f.e++];
        if (!keep(t.label)) continue;
        if (index[t.target] == kNone) {
          index[t.target] = low[t.target] = next++;
          stack.push_back(t.target);
          on_stack[t.target] = true;
          call.push_back({t.target, adj.begin(t.target)});
          down = true;
          break;
        }
        if (on_stack[t.target]) low[s] = std::min(low[s], index[t.target]);
      }
      if (down) continue;
      if (low[s] == index[s]) {
        std::vector<StateId> members;
        while (true) {
          StateId u = stack.back();
          stack.pop_back();
          on_stack[u] = false;
          members.push_back(u);
          if (u == s) break;
        }
        bool cyclic = members.size() > 1;
        if (!cyclic)
          for (std::size_t e = adj.begin(s); e < adj.end(s); ++e)
            if (adj.edges[e].target == s && keep(adj.edges[e].label)) cyclic = true;
        if (cyclic) {
          StateId rep = *std::min_element(members.begin(), members.end(),
                                          [&](StateId a, StateId b) { return rank[a] < rank[b]; });
          if (rank[rep] < best_rank) {
            best_rank = rank[rep];
            best = rep;
          }
        }
      }
      call.pop_back();
      if (!call.empty()) low[call.back().s] = std::min(low[call.back().s], low[s]);
    }
  }
  return best;
}

}  // namespace

CycleResult check_cycle_condition(const Lts& loop, const std::set<std::string>& input_labels,
                                  const std::set<std::string>& output_labels, bool strict) {
  CycleResult result;
  result.strict = strict;
  if (loop.num_states == 0) return result;
  Adjacency adj(loop);
  auto reach = bfs(loop, adj, loop.initial, [](LabelId) { return true; });
  for (auto [side, avoid] : {std::pair{CycleSide::inputs, &input_labels}, std::pair{CycleSide::outputs, &output_labels}}) {
    std::vector<bool> banned(loop.labels.size(), false);
    for (std::size_t i = 0; i < loop.labels.size(); ++i) banned[i] = avoid->count(loop.labels[i].text) != 0;
    auto keep = [&](LabelId l) { return !banned[l]; };
    std::optional<CycleWitness> w;
    if (!strict) {
      w = cycle_through(loop, adj, loop.initial, keep);
    } else if (auto rep = cyclic_component(loop, adj, reach.order, keep)) {
      w = cycle_through(loop, adj, *rep, keep);
      if (w) w->access = reach.trace_to(loop, *rep);
    }
    if (w) {
      w->empty_side = side;
      result.holds = false;
      result.witness = std::move(w);
      return result;
    }
  }
  return result;
}

CycleResult check_cycle_condition(const Lts& loop, const ChannelPartition& partition, const Signature& sig,
                                  bool strict) {
  return check_cycle_condition(loop, partition.input_labels(sig), partition.output_labels(sig), strict);
}

std::vector<std::set<std::string>> enabled_map(const Lts& lts) {
  std::vector<std::set<std::string>> out(lts.num_states);
  for (const auto& t : lts.transitions) out[t.source].insert(lts.labels[t.label].text);
  return out;
}

std::vector<std::size_t> branching_degree(const Lts& lts) {
  auto eta = enabled_map(lts);
  std::vector<std::size_t> out(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) out[i] = eta[i].size();
  return out;
}

bool ConditionReport::all_hold() const {
  return well_posed.holds && self_loops.holds && diamond && diamond->holds && cycle && cycle->holds;
}

ConditionReport desynchronisability_report(const RecursiveSpec& spec, const std::vector<NamedProcess>& plants,
                                           const NamedProcess& supervisor, const ReportOptions& options) {
  ConditionReport report;
  std::vector<Term> plant_terms;
  for (const auto& p : plants) plant_terms.push_back(p.term);
  Term plant = Term::par(plant_terms);
  const Signature& sig = spec.signature();

  report.plant_validity = check_plant_validity(spec, plant, options.cap);
  report.supervisor_validity = check_supervisor_validity(spec, supervisor.term, options.cap);
  if (!report.plant_validity.valid()) report.notes.push_back("plant: " + report.plant_validity.explain(sig));
  if (!report.supervisor_validity.valid())
    report.notes.push_back("supervisor: " + report.supervisor_validity.explain(sig));

  report.well_posed = check_well_posed(spec, plant, supervisor.term, options.cap);
  report.notes.push_back("well-posedness checked on the matched-pair product (jointly realisable traces only)");
  report.self_loops = check_no_self_loops(spec, plants, supervisor, options.cap);

  if (!report.valid()) {
    report.notes.push_back("closed-loop conditions skipped: invalid plant or supervisor");
    return report;
  }
  ChannelPartition partition = channel_partition(spec, plant, supervisor.term);
  for (const auto& w : partition.warnings) report.notes.push_back(w);
  Lts loop = generate_lts(spec, sync_closed_loop(spec, plant, supervisor.term, options.cap), options.cap);
  loop.require_complete("synchronous loop");
  report.loop_states = loop.num_states;
  report.loop_transitions = loop.transitions.size();
  report.enabled = enabled_map(loop);
  report.branching = branching_degree(loop);
  try {
    report.diamond = check_diamond(loop);
  } catch (const TruncationError&) {
    throw;
  } catch (const Error& e) {
    report.notes.push_back(e.what());
  }
  report.cycle = check_cycle_condition(loop, partition, sig, options.strict_cycles);
  if (options.strict_cycles) report.notes.push_back("cycle condition checked on every reachable cycle");

  if (options.direct_check) {
    DirectCheck direct;
    direct.config = options.direct_config;
    AsyncLoop async = async_closed_loop(spec, plant, supervisor.term, options.direct_config);
    Lts a = generate_lts(spec, async.term, options.direct_config.state_cap);
    direct.truncated = a.truncated;
    direct.states = a.num_states;
    direct.deadlocks = find_deadlocks(a);
    if (!a.truncated) direct.branching = branching_bisim(loop, a);
    if (!report.self_loops.holds && !direct.deadlocks.deadlocks.empty())
      report.notes.push_back("self-loop condition fails and the " + to_string(direct.config.method) +
                             " buffered loop deadlocks");
    report.direct = std::move(direct);
  }
  return report;
}

}  // namespace desync
