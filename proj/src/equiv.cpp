#include "desync/equiv.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "desync/term.hpp"
#include "partition.hpp"

namespace desync {

std::string to_string(Relation r) {
  switch (r) {
    case Relation::strong: return "strong";
    case Relation::branching: return "branching";
    case Relation::weak_trace: return "weak-trace";
  }
  return "?";
}

std::optional<Relation> parse_relation(std::string_view text) {
  if (text == "strong") return Relation::strong;
  if (text == "branching") return Relation::branching;
  if (text == "weak-trace" || text == "weak_trace" || text == "trace") return Relation::weak_trace;
  return std::nullopt;
}

Lts disjoint_union(const Lts& lhs, const Lts& rhs) {
  Lts out;
  for (std::size_t i = 0; i < lhs.num_states; ++i) out.add_state(lhs.terminating[i]);
  for (std::size_t i = 0; i < rhs.num_states; ++i) out.add_state(rhs.terminating[i]);
  out.initial = lhs.initial;
  const auto offset = static_cast<StateId>(lhs.num_states);
  for (int side = 0; side < 2; ++side) {
    const Lts* part = side == 0 ? &lhs : &rhs;
    std::vector<LabelId> map(part->labels.size());
    for (std::size_t i = 0; i < part->labels.size(); ++i) map[i] = out.intern_label(part->labels[i]);
    StateId shift = side == 0 ? 0 : offset;
    for (const auto& t : part->transitions) out.add_transition(t.source + shift, map[t.label], t.target + shift);
    for (StateId s : part->unexplored) out.unexplored.push_back(s + shift);
  }
  out.truncated = lhs.truncated || rhs.truncated;
  out.cap = std::max(lhs.cap, rhs.cap);
  return out;
}

namespace {

EquivStats base_stats(const Lts& lhs, const Lts& rhs) {
  EquivStats st;
  st.lhs_states = lhs.num_states;
  st.lhs_transitions = lhs.transitions.size();
  st.rhs_states = rhs.num_states;
  st.rhs_transitions = rhs.transitions.size();
  return st;
}

std::size_t count_blocks(const std::vector<std::uint32_t>& block) {
  std::uint32_t m = 0;
  for (auto b : block) m = std::max(m, b + 1);
  return m;
}

template <typename SigFn>
EquivVerdict bisim(Relation r, const Lts& lhs, const Lts& rhs,
                   std::vector<std::uint32_t> (*partition)(const Lts&), SigFn signature) {
  const char* what = r == Relation::strong ? "strong bisimulation" : "branching bisimulation";
  lhs.require_complete(what);
  rhs.require_complete(what);
  EquivVerdict v;
  v.relation = r;
  v.stats = base_stats(lhs, rhs);
  Lts u = disjoint_union(lhs, rhs);
  auto block = partition(u);
  v.stats.reduced = count_blocks(block);
  const StateId a = lhs.initial;
  const StateId b = static_cast<StateId>(lhs.num_states) + rhs.initial;
  if (lhs.num_states == 0 || rhs.num_states == 0) {
    v.holds = lhs.num_states == rhs.num_states;
    return v;
  }
  v.holds = block[a] == block[b];
  if (v.holds) return v;

  Adjacency adj(u);
  auto sa = signature(adj, u, block, a);
  auto sb = signature(adj, u, block, b);
  auto ranks = label_ranks(u);
  // Order entries by label text, termination first.
  auto key = [&](std::uint64_t e) {
    if (e == detail::kTerminationEntry) return std::pair<std::int64_t, std::uint32_t>{-1, 0};
    return std::pair<std::int64_t, std::uint32_t>{ranks[e >> 32], static_cast<std::uint32_t>(e)};
  };
  std::optional<std::pair<std::uint64_t, Side>> best;
  auto consider = [&](const std::vector<std::uint64_t>& mine, const std::vector<std::uint64_t>& other, Side side) {
    for (auto e : mine) {
      if (std::binary_search(other.begin(), other.end(), e)) continue;
      if (!best || key(e) < key(best->first)) best = {e, side};
    }
  };
  consider(sa, sb, Side::lhs);
  consider(sb, sa, Side::rhs);
  EquivWitness w;
  w.lhs_state = lhs.initial;
  w.rhs_state = rhs.initial;
  if (best) {
    w.side = best->second;
    w.label = best->first == detail::kTerminationEntry ? std::string(kTerminationLabel)
                                                       : u.labels[best->first >> 32].text;
    w.trace = {w.label};
  }
  v.witness = w;
  return v;
}

Lts quotient(const Lts& lts, const std::vector<std::uint32_t>& block, bool drop_inert) {
  Lts q;
  std::size_t k = count_blocks(block);
  for (std::size_t i = 0; i < k; ++i) q.add_state(false);
  for (StateId s = 0; s < lts.num_states; ++s)
    if (lts.terminating[s]) q.terminating[block[s]] = true;
  q.initial = lts.num_states == 0 ? 0 : block[lts.initial];
  std::vector<LabelId> map(lts.labels.size());
  for (std::size_t i = 0; i < lts.labels.size(); ++i) map[i] = q.intern_label(lts.labels[i]);
  for (const auto& t : lts.transitions) {
    if (drop_inert && t.label == 0 && block[t.source] == block[t.target]) continue;
    q.add_transition(block[t.source], map[t.label], block[t.target]);
  }
  std::sort(q.transitions.begin(), q.transitions.end());
  q.transitions.erase(std::unique(q.transitions.begin(), q.transitions.end()), q.transitions.end());
  return q;
}

// Subset construction over silent closures, with labels keyed by text so that
// two automata can share a label numbering.
class TraceAutomaton {
 public:
  TraceAutomaton(const Lts& lts, const std::map<std::string, std::uint32_t>& global)
      : lts_(lts), adj_(lts), stamp_(lts.num_states, 0) {
    local_to_global_.resize(lts.labels.size());
    for (std::size_t i = 0; i < lts.labels.size(); ++i)
      local_to_global_[i] = i == 0 ? 0 : global.at(lts.labels[i].text);
  }

  using Subset = std::vector<StateId>;

  Subset initial() {
    if (lts_.num_states == 0) return {};
    return close({lts_.initial});
  }

  Subset close(Subset seed) {
    ++epoch_;
    Subset out;
    std::vector<StateId> work;
    for (StateId s : seed)
      if (stamp_[s] != epoch_) {
        stamp_[s] = epoch_;
        work.push_back(s);
      }
    while (!work.empty()) {
      StateId s = work.back();
      work.pop_back();
      out.push_back(s);
      for (std::size_t e = adj_.begin(s); e < adj_.end(s); ++e) {
        const auto& t = adj_.edges[e];
        if (t.label != 0 || stamp_[t.target] == epoch_) continue;
        stamp_[t.target] = epoch_;
        work.push_back(t.target);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool terminating(const Subset& set) const {
    return std::any_of(set.begin(), set.end(), [&](StateId s) { return lts_.terminating[s]; });
  }

  /// Visible successors per global label.
  std::map<std::uint32_t, Subset> successors(const Subset& set) {
    std::map<std::uint32_t, Subset> raw;
    for (StateId s : set)
      for (std::size_t e = adj_.begin(s); e < adj_.end(s); ++e) {
        const auto& t = adj_.edges[e];
        if (t.label != 0) raw[local_to_global_[t.label]].push_back(t.target);
      }
    for (auto& [label, seed] : raw) seed = close(std::move(seed));
    return raw;
  }

 private:
  const Lts& lts_;
  Adjacency adj_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<std::uint32_t> local_to_global_;
};

struct SubsetHash {
  std::size_t operator()(const std::vector<StateId>& v) const noexcept {
    std::size_t h = v.size();
    for (auto x : v) h ^= std::hash<StateId>{}(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

std::map<std::string, std::uint32_t> global_labels(const Lts& a, const Lts* b) {
  std::map<std::string, std::uint32_t> out;
  for (const Lts* l : {&a, b}) {
    if (l == nullptr) continue;
    for (std::size_t i = 1; i < l->labels.size(); ++i) out.emplace(l->labels[i].text, 0);
  }
  std::uint32_t next = 1;
  for (auto& [text, id] : out) id = next++;
  return out;
}

}  // namespace

EquivVerdict strong_bisim(const Lts& lhs, const Lts& rhs) {
  return bisim(Relation::strong, lhs, rhs, &strong_partition, &detail::strong_signature);
}

EquivVerdict branching_bisim(const Lts& lhs, const Lts& rhs) {
  return bisim(Relation::branching, lhs, rhs, &branching_partition, &detail::branching_signature);
}

EquivVerdict weak_trace_equiv(const Lts& lhs, const Lts& rhs, std::size_t cap) {
  lhs.require_complete("weak trace equivalence");
  rhs.require_complete("weak trace equivalence");
  EquivVerdict v;
  v.relation = Relation::weak_trace;
  v.stats = base_stats(lhs, rhs);

  Lts ql = quotient(lhs, branching_partition(lhs), true);
  Lts qr = quotient(rhs, branching_partition(rhs), true);
  auto global = global_labels(ql, &qr);
  std::vector<std::string> text(global.size() + 1);
  for (const auto& [t, id] : global) text[id] = t;
  TraceAutomaton da(ql, global), db(qr, global);

  using Subset = TraceAutomaton::Subset;
  struct Node {
    Subset left, right;
    std::size_t parent;
    std::uint32_t label;
  };
  std::vector<Node> nodes;
  std::unordered_map<Subset, std::unordered_map<Subset, std::size_t, SubsetHash>, SubsetHash> seen;
  auto add = [&](Subset l, Subset r, std::size_t parent, std::uint32_t label) {
    auto& inner = seen[l];
    if (inner.count(r) != 0) return;
    if (nodes.size() >= cap)
      throw TruncationError("weak trace equivalence: more than " + std::to_string(cap) + " subset pairs");
    inner.emplace(r, nodes.size());
    nodes.push_back({std::move(l), std::move(r), parent, label});
  };
  auto trace_to = [&](std::size_t i) {
    std::vector<std::string> out;
    while (i != 0) {
      out.push_back(text[nodes[i].label]);
      i = nodes[i].parent;
    }
    std::reverse(out.begin(), out.end());
    return out;
  };
  auto fail = [&](std::size_t i, Side side, std::string last) {
    EquivWitness w;
    w.side = side;
    w.lhs_state = lhs.initial;
    w.rhs_state = rhs.initial;
    w.trace = trace_to(i);
    w.trace.push_back(last);
    w.label = std::move(last);
    v.holds = false;
    v.witness = std::move(w);
    v.stats.reduced = nodes.size();
    return v;
  };

  add(da.initial(), db.initial(), 0, 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Subset l = nodes[i].left, r = nodes[i].right;
    bool tl = da.terminating(l), tr = db.terminating(r);
    if (tl != tr) return fail(i, tl ? Side::lhs : Side::rhs, std::string(kTerminationLabel));
    auto sl = da.successors(l);
    auto sr = db.successors(r);
    std::vector<std::uint32_t> labels;
    for (const auto& [a, s] : sl) labels.push_back(a);
    for (const auto& [a, s] : sr) labels.push_back(a);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    for (auto a : labels) {
      auto il = sl.find(a);
      auto ir = sr.find(a);
      if (ir == sr.end()) return fail(i, Side::lhs, text[a]);
      if (il == sl.end()) return fail(i, Side::rhs, text[a]);
    }
    for (auto a : labels) add(std::move(sl[a]), std::move(sr[a]), i, a);
  }
  v.holds = true;
  v.stats.reduced = nodes.size();
  return v;
}

EquivVerdict check_equivalence(Relation r, const Lts& lhs, const Lts& rhs, std::size_t cap) {
  switch (r) {
    case Relation::strong: return strong_bisim(lhs, rhs);
    case Relation::branching: return branching_bisim(lhs, rhs);
    case Relation::weak_trace: return weak_trace_equiv(lhs, rhs, cap);
  }
  throw Error("unknown relation");
}

DeadlockReport find_deadlocks(const Lts& lts) {
  DeadlockReport report;
  report.partial = lts.truncated;
  if (lts.num_states == 0) return report;
  Adjacency adj(lts);
  std::vector<bool> unexplored(lts.num_states, false);
  for (StateId s : lts.unexplored) unexplored[s] = true;
  constexpr StateId kNone = ~StateId{0};
  std::vector<StateId> parent(lts.num_states, kNone);
  std::vector<LabelId> via(lts.num_states, 0);
  std::vector<bool> visited(lts.num_states, false);
  std::deque<StateId> queue{lts.initial};
  visited[lts.initial] = true;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    if (unexplored[s]) continue;
    if (adj.degree(s) == 0 && !lts.terminating[s]) {
      Deadlock d;
      d.state = s;
      for (StateId u = s; parent[u] != kNone; u = parent[u]) d.labels.push_back(via[u]);
      std::reverse(d.labels.begin(), d.labels.end());
      for (LabelId l : d.labels) d.trace.push_back(lts.labels[l].text);
      report.deadlocks.push_back(std::move(d));
      continue;
    }
    for (std::size_t e = adj.begin(s); e < adj.end(s); ++e) {
      StateId t = adj.edges[e].target;
      if (visited[t]) continue;
      visited[t] = true;
      parent[t] = s;
      via[t] = adj.edges[e].label;
      queue.push_back(t);
    }
  }
  return report;
}

Lts minimize(const Lts& lts, Relation r, std::size_t cap) {
  switch (r) {
    case Relation::strong:
      return canonical_form(quotient(lts, strong_partition(lts), false));
    case Relation::branching:
      return canonical_form(quotient(lts, branching_partition(lts), true));
    case Relation::weak_trace: break;
  }
  lts.require_complete("trace minimisation");
  Lts q = quotient(lts, branching_partition(lts), true);
  auto global = global_labels(q, nullptr);
  std::vector<std::string> text(global.size() + 1);
  for (const auto& [t, id] : global) text[id] = t;
  TraceAutomaton da(q, global);

  Lts det;
  std::vector<LabelId> label_of(text.size(), 0);
  for (std::size_t i = 1; i < text.size(); ++i) label_of[i] = det.intern_label(text[i]);
  std::unordered_map<TraceAutomaton::Subset, StateId, SubsetHash> index;
  std::vector<TraceAutomaton::Subset> subsets;
  auto add = [&](TraceAutomaton::Subset s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    if (subsets.size() >= cap)
      throw TruncationError("trace minimisation: more than " + std::to_string(cap) + " subset states");
    StateId id = det.add_state(da.terminating(s));
    index.emplace(s, id);
    subsets.push_back(std::move(s));
    return id;
  };
  if (lts.num_states == 0) return det;
  det.initial = add(da.initial());
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    auto succ = da.successors(subsets[i]);
    for (auto& [a, s] : succ) {
      StateId t = add(std::move(s));
      det.add_transition(static_cast<StateId>(i), label_of[a], t);
    }
  }
  return canonical_form(quotient(det, strong_partition(det), false));
}

}  // namespace desync
