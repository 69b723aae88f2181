#include "partition.hpp"

#include <algorithm>
#include <unordered_map>

#include "desync/equiv.hpp"

namespace desync {

namespace detail {

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::size_t h = v.size();
    for (auto x : v) h ^= std::hash<std::uint64_t>{}(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

using BlockTable = std::unordered_map<std::vector<std::uint64_t>, std::uint32_t, KeyHash>;

std::uint32_t intern_block(BlockTable& table, std::uint32_t old_block, std::vector<std::uint64_t>& sig) {
  sig.insert(sig.begin(), old_block);
  auto [it, inserted] = table.try_emplace(sig, static_cast<std::uint32_t>(table.size()));
  return it->second;
}

// Strongly connected components of the tau-graph, numbered in completion
// order: every component reachable by tau from component c has a smaller id.
std::vector<std::uint32_t> tau_components(const Adjacency& adj, std::size_t n, std::uint32_t& count) {
  constexpr std::uint32_t kNone = ~std::uint32_t{0};
  std::vector<std::uint32_t> index(n, kNone), low(n, 0), comp(n, kNone);
  std::vector<StateId> stack;
  std::vector<bool> on_stack(n, false);
  std::uint32_t next_index = 0;
  count = 0;
  struct Frame {
    StateId state;
    std::size_t edge;
  };
  std::vector<Frame> call;
  for (StateId root = 0; root < n; ++root) {
    if (index[root] != kNone) continue;
    call.push_back({root, adj.begin(root)});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      StateId s = f.state;
      bool descended = false;
      while (f.edge < adj.end(s)) {
        const Transition& t = adj.edges[f.edge++];
        if (t.label != 0) continue;
        StateId u = t.target;
        if (index[u] == kNone) {
          index[u] = low[u] = next_index++;
          stack.push_back(u);
          on_stack[u] = true;
          call.push_back({u, adj.begin(u)});
          descended = true;
          break;
        }
        if (on_stack[u]) low[s] = std::min(low[s], index[u]);
      }
      if (descended) continue;
      if (low[s] == index[s]) {
        while (true) {
          StateId u = stack.back();
          stack.pop_back();
          on_stack[u] = false;
          comp[u] = count;
          if (u == s) break;
        }
        ++count;
      }
      call.pop_back();
      if (!call.empty()) {
        StateId parent = call.back().state;
        low[parent] = std::min(low[parent], low[s]);
      }
    }
  }
  return comp;
}

}  // namespace

std::vector<std::uint32_t> normalise_blocks(const std::vector<std::uint32_t>& block) {
  std::unordered_map<std::uint32_t, std::uint32_t> renumber;
  std::vector<std::uint32_t> out(block.size());
  for (std::size_t i = 0; i < block.size(); ++i) {
    auto [it, inserted] = renumber.try_emplace(block[i], static_cast<std::uint32_t>(renumber.size()));
    out[i] = it->second;
  }
  return out;
}

std::vector<std::uint64_t> strong_signature(const Adjacency& adj, const Lts& lts,
                                            const std::vector<std::uint32_t>& block, StateId s) {
  std::vector<std::uint64_t> sig;
  if (lts.terminating[s]) sig.push_back(kTerminationEntry);
  for (std::size_t e = adj.begin(s); e < adj.end(s); ++e)
    sig.push_back(sig_entry(adj.edges[e].label, block[adj.edges[e].target]));
  std::sort(sig.begin(), sig.end());
  sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
  return sig;
}

std::vector<std::uint64_t> branching_signature(const Adjacency& adj, const Lts& lts,
                                               const std::vector<std::uint32_t>& block, StateId s) {
  std::vector<std::uint64_t> sig;
  std::vector<StateId> work{s};
  std::vector<StateId> seen{s};
  while (!work.empty()) {
    StateId u = work.back();
    work.pop_back();
    if (lts.terminating[u]) sig.push_back(kTerminationEntry);
    for (std::size_t e = adj.begin(u); e < adj.end(u); ++e) {
      const Transition& t = adj.edges[e];
      if (t.label == 0 && block[t.target] == block[s]) {
        if (std::find(seen.begin(), seen.end(), t.target) == seen.end()) {
          seen.push_back(t.target);
          work.push_back(t.target);
        }
        continue;
      }
      sig.push_back(sig_entry(t.label, block[t.target]));
    }
  }
  std::sort(sig.begin(), sig.end());
  sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
  return sig;
}

}  // namespace detail

std::vector<std::uint32_t> strong_partition(const Lts& lts) {
  lts.require_complete("strong bisimulation");
  const std::size_t n = lts.num_states;
  Adjacency adj(lts);
  std::vector<std::uint32_t> block(n, 0);
  std::size_t blocks = n == 0 ? 0 : 1;
  while (true) {
    detail::BlockTable table;
    std::vector<std::uint32_t> next(n);
    for (StateId s = 0; s < n; ++s) {
      auto sig = detail::strong_signature(adj, lts, block, s);
      next[s] = detail::intern_block(table, block[s], sig);
    }
    block.swap(next);
    if (table.size() == blocks) break;
    blocks = table.size();
  }
  return detail::normalise_blocks(block);
}

std::vector<std::uint32_t> branching_partition(const Lts& lts) {
  lts.require_complete("branching bisimulation");
  const std::size_t n = lts.num_states;
  Adjacency adj(lts);
  std::uint32_t k = 0;
  auto comp = detail::tau_components(adj, n, k);

  // Collapse tau-cycles; the remaining tau-graph is acyclic and component
  // ids already follow a successors-first order.
  std::vector<std::vector<std::pair<LabelId, std::uint32_t>>> out(k);
  std::vector<bool> term(k, false);
  for (StateId s = 0; s < n; ++s) {
    if (lts.terminating[s]) term[comp[s]] = true;
    for (std::size_t e = adj.begin(s); e < adj.end(s); ++e) {
      const Transition& t = adj.edges[e];
      if (t.label == 0 && comp[t.target] == comp[s]) continue;
      out[comp[s]].emplace_back(t.label, comp[t.target]);
    }
  }
  for (auto& edges : out) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }

  std::vector<std::uint32_t> block(k, 0);
  std::size_t blocks = k == 0 ? 0 : 1;
  std::vector<std::vector<std::uint64_t>> sigs(k);
  while (true) {
    detail::BlockTable table;
    std::vector<std::uint32_t> next(k);
    for (std::uint32_t c = 0; c < k; ++c) {
      std::vector<std::uint64_t> sig;
      if (term[c]) sig.push_back(detail::kTerminationEntry);
      for (auto [label, d] : out[c]) {
        if (label == 0 && block[d] == block[c]) {
          sig.insert(sig.end(), sigs[d].begin(), sigs[d].end());
        } else {
          sig.push_back(detail::sig_entry(label, block[d]));
        }
      }
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      sigs[c] = sig;
      next[c] = detail::intern_block(table, block[c], sig);
    }
    block.swap(next);
    if (table.size() == blocks) break;
    blocks = table.size();
  }
  std::vector<std::uint32_t> result(n);
  for (StateId s = 0; s < n; ++s) result[s] = block[comp[s]];
  return detail::normalise_blocks(result);
}

}  // namespace desync
