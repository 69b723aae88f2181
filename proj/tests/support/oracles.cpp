#include "oracles.hpp"

#include <algorithm>
#include <numeric>

namespace oracle {

namespace {

struct Edge {
  std::string label;
  StateId target;
};

// Union of a and b as plain adjacency lists; b's states follow a's.
struct Graph {
  std::vector<std::vector<Edge>> out;
  std::vector<bool> term;
  StateId a0 = 0, b0 = 0;
};

Graph combine(const Lts& a, const Lts& b) {
  Graph g;
  const std::size_t n = a.num_states + b.num_states;
  g.out.resize(n);
  g.term.resize(n);
  for (std::size_t i = 0; i < a.num_states; ++i) g.term[i] = a.terminating[i];
  for (std::size_t i = 0; i < b.num_states; ++i) g.term[a.num_states + i] = b.terminating[i];
  for (const auto& t : a.transitions) g.out[t.source].push_back({a.labels[t.label].text, t.target});
  const auto off = static_cast<StateId>(a.num_states);
  for (const auto& t : b.transitions) g.out[off + t.source].push_back({b.labels[t.label].text, off + t.target});
  g.a0 = a.initial;
  g.b0 = off + b.initial;
  return g;
}

bool is_tau(const std::string& l) { return l == "tau"; }

std::vector<std::vector<StateId>> tau_reach(const Graph& g) {
  const std::size_t n = g.out.size();
  std::vector<std::vector<StateId>> reach(n);
  for (StateId s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::vector<StateId> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      StateId u = stack.back();
      stack.pop_back();
      reach[s].push_back(u);
      for (const auto& e : g.out[u])
        if (is_tau(e.label) && !seen[e.target]) {
          seen[e.target] = true;
          stack.push_back(e.target);
        }
    }
  }
  return reach;
}

std::vector<StateId> close(const Lts& lts, std::vector<StateId> set) {
  std::vector<bool> seen(lts.num_states, false);
  std::vector<StateId> out, stack;
  for (StateId s : set)
    if (!seen[s]) {
      seen[s] = true;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    StateId u = stack.back();
    stack.pop_back();
    out.push_back(u);
    for (const auto& t : lts.transitions)
      if (t.source == u && t.label == 0 && !seen[t.target]) {
        seen[t.target] = true;
        stack.push_back(t.target);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<StateId> step(const Lts& lts, const std::vector<StateId>& set, const std::string& label) {
  std::vector<StateId> next;
  for (const auto& t : lts.transitions)
    if (t.label != 0 && lts.labels[t.label].text == label && std::binary_search(set.begin(), set.end(), t.source))
      next.push_back(t.target);
  return close(lts, next);
}

}  // namespace

bool strong_bisimilar(const Lts& a, const Lts& b) {
  Graph g = combine(a, b);
  const std::size_t n = g.out.size();
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 1));
  for (StateId s = 0; s < n; ++s)
    for (StateId t = 0; t < n; ++t)
      if (g.term[s] != g.term[t]) r[s][t] = 0;
  auto simulated = [&](StateId s, StateId t) {
    for (const auto& e : g.out[s]) {
      bool ok = false;
      for (const auto& f : g.out[t])
        if (f.label == e.label && r[e.target][f.target]) ok = true;
      if (!ok) return false;
    }
    return true;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (StateId s = 0; s < n; ++s)
      for (StateId t = 0; t < n; ++t)
        if (r[s][t] && (!simulated(s, t) || !simulated(t, s))) {
          r[s][t] = r[t][s] = 0;
          changed = true;
        }
  }
  return r[g.a0][g.b0] != 0;
}

bool branching_bisimilar(const Lts& a, const Lts& b) {
  Graph g = combine(a, b);
  const std::size_t n = g.out.size();
  auto reach = tau_reach(g);
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 1));
  auto simulated = [&](StateId s, StateId t) {
    if (g.term[s]) {
      bool ok = false;
      for (StateId u : reach[t])
        if (r[s][u] && g.term[u]) ok = true;
      if (!ok) return false;
    }
    for (const auto& e : g.out[s]) {
      if (is_tau(e.label) && r[e.target][t]) continue;
      bool ok = false;
      for (StateId u : reach[t]) {
        if (!r[s][u]) continue;
        for (const auto& f : g.out[u])
          if (f.label == e.label && r[e.target][f.target]) ok = true;
        if (ok) break;
      }
      if (!ok) return false;
    }
    return true;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (StateId s = 0; s < n; ++s)
      for (StateId t = 0; t < n; ++t)
        if (r[s][t] && (!simulated(s, t) || !simulated(t, s))) {
          r[s][t] = r[t][s] = 0;
          changed = true;
        }
  }
  return r[g.a0][g.b0] != 0;
}

std::set<std::vector<std::string>> weak_traces(const Lts& lts, std::size_t depth) {
  std::set<std::vector<std::string>> out;
  if (lts.num_states == 0) return out;
  std::set<std::string> labels;
  for (const auto& t : lts.transitions)
    if (t.label != 0) labels.insert(lts.labels[t.label].text);
  std::vector<std::string> trace;
  auto rec = [&](auto& self, const std::vector<StateId>& set) -> void {
    out.insert(trace);
    if (std::any_of(set.begin(), set.end(), [&](StateId s) { return lts.terminating[s]; })) {
      trace.push_back("<termination>");
      out.insert(trace);
      trace.pop_back();
    }
    if (trace.size() == depth) return;
    for (const auto& l : labels) {
      auto next = step(lts, set, l);
      if (next.empty()) continue;
      trace.push_back(l);
      self(self, next);
      trace.pop_back();
    }
  };
  rec(rec, close(lts, {lts.initial}));
  return out;
}

bool can_perform(const Lts& lts, const std::vector<std::string>& trace) {
  if (lts.num_states == 0) return false;
  auto set = close(lts, {lts.initial});
  for (const auto& l : trace) {
    if (l == "<termination>")
      return std::any_of(set.begin(), set.end(), [&](StateId s) { return lts.terminating[s]; });
    set = step(lts, set, l);
    if (set.empty()) return false;
  }
  return true;
}

Lts random_lts(std::mt19937& rng, std::size_t max_states, const std::vector<std::string>& labels,
               double tau_weight) {
  std::uniform_int_distribution<std::size_t> size(1, max_states);
  const std::size_t n = size(rng);
  std::uniform_int_distribution<StateId> state(0, static_cast<StateId>(n - 1));
  std::uniform_int_distribution<std::size_t> degree(0, 3);
  std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
  std::bernoulli_distribution silent(tau_weight), term(0.15);
  Lts lts;
  for (std::size_t i = 0; i < n; ++i) lts.add_state(term(rng));
  for (StateId s = 0; s < n; ++s) {
    std::size_t d = degree(rng);
    for (std::size_t k = 0; k < d; ++k) {
      desync::Transition t{s, lts.intern_label(silent(rng) ? std::string("tau") : labels[pick(rng)]), state(rng)};
      if (std::find(lts.transitions.begin(), lts.transitions.end(), t) == lts.transitions.end())
        lts.transitions.push_back(t);
    }
  }
  return lts;
}

namespace {

Lts copy_structure(const Lts& lts) {
  Lts out;
  for (std::size_t i = 0; i < lts.num_states; ++i) out.add_state(lts.terminating[i]);
  out.initial = lts.initial;
  for (const auto& t : lts.transitions)
    out.add_transition(t.source, out.intern_label(lts.labels[t.label].text), t.target);
  return out;
}

}  // namespace

Lts equivalent_variant(std::mt19937& rng, const Lts& lts, bool silent) {
  Lts cur = copy_structure(lts);
  std::uniform_int_distribution<int> ops(1, 4);
  std::bernoulli_distribution coin(0.5);
  int count = ops(rng);
  for (int k = 0; k < count; ++k) {
    std::uniform_int_distribution<StateId> state(0, static_cast<StateId>(cur.num_states - 1));
    StateId v = state(rng);
    if (silent && coin(rng)) {
      // u -tau-> v with no other behaviour is inert.
      StateId u = cur.add_state(false);
      for (auto& t : cur.transitions)
        if (t.target == v && coin(rng)) t.target = u;
      cur.add_transition(u, 0, v);
      if (cur.initial == v && coin(rng)) cur.initial = u;
    } else {
      StateId c = cur.add_state(cur.terminating[v]);
      std::vector<desync::Transition> extra;
      for (const auto& t : cur.transitions)
        if (t.source == v) extra.push_back({c, t.label, t.target == v ? (coin(rng) ? c : v) : t.target});
      for (auto& t : cur.transitions)
        if (t.target == v && coin(rng)) t.target = c;
      for (const auto& t : extra) cur.transitions.push_back(t);
    }
  }
  // Renumber.
  std::vector<StateId> perm(cur.num_states);
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), rng);
  Lts out;
  std::vector<bool> term(cur.num_states);
  for (StateId s = 0; s < cur.num_states; ++s) term[perm[s]] = cur.terminating[s];
  for (StateId s = 0; s < cur.num_states; ++s) out.add_state(term[s]);
  out.initial = perm[cur.initial];
  for (const auto& t : cur.transitions)
    out.add_transition(perm[t.source], out.intern_label(cur.labels[t.label].text), perm[t.target]);
  std::shuffle(out.transitions.begin(), out.transitions.end(), rng);
  return out;
}

Lts mutate(std::mt19937& rng, const Lts& lts, const std::vector<std::string>& labels) {
  Lts out = copy_structure(lts);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<StateId> state(0, static_cast<StateId>(out.num_states - 1));
  std::uniform_int_distribution<std::size_t> pick(0, labels.size());
  switch (kind(rng)) {
    case 0: {
      std::size_t l = pick(rng);
      out.add_transition(state(rng), out.intern_label(l == labels.size() ? std::string("tau") : labels[l]), state(rng));
      break;
    }
    case 1:
      if (!out.transitions.empty()) {
        std::uniform_int_distribution<std::size_t> e(0, out.transitions.size() - 1);
        out.transitions.erase(out.transitions.begin() + static_cast<std::ptrdiff_t>(e(rng)));
      }
      break;
    default: {
      StateId s = state(rng);
      out.terminating[s] = !out.terminating[s];
    }
  }
  return out;
}

namespace {

using desync::Action;
using desync::ChannelId;
using desync::DatumId;
using desync::Polarity;
using desync::Term;

struct SpecGen {
  std::mt19937& rng;
  desync::Signature sig;
  std::vector<std::string> names;

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng); }

  ChannelId channel() {
    auto base = sig.base_channels();
    ChannelId c = base[below(base.size())];
    return chance(0.25) ? c + 1 : c;
  }

  Action action(Polarity p) {
    ChannelId c = channel();
    auto data = sig.channel_data(c);
    return {p, c, data[below(data.size())]};
  }

  Action any_action() {
    switch (below(4)) {
      case 0: return Action::tau();
      case 1: return action(Polarity::send);
      case 2: return action(Polarity::receive);
      default: return action(Polarity::comm);
    }
  }

  Term term(int depth, bool guarded) {
    std::size_t choice = depth <= 0 ? below(3) : below(9);
    switch (choice) {
      case 0: return guarded && !names.empty() ? Term::var(names[below(names.size())]) : Term::delta();
      case 1: return chance(0.5) ? Term::epsilon() : Term::delta();
      case 2:
      case 3: return Term::prefix(any_action(), depth <= 0 ? Term::epsilon() : term(depth - 1, true));
      case 4: {
        std::vector<Term> opts;
        std::size_t k = 2 + below(2);
        for (std::size_t i = 0; i < k; ++i) opts.push_back(term(depth - 1, guarded));
        return Term::alt(std::move(opts));
      }
      case 5: return Term::par(term(depth - 1, guarded), term(depth - 1, guarded));
      case 6: {
        std::vector<Action> set;
        for (std::size_t i = 0, k = below(3); i < k; ++i) set.push_back(action(chance(0.5) ? Polarity::send : Polarity::receive));
        return Term::encap(desync::make_action_set(std::move(set)), term(depth - 1, guarded));
      }
      case 7: {
        std::vector<Action> set;
        for (std::size_t i = 0, k = below(3); i < k; ++i) set.push_back(action(Polarity::comm));
        return Term::hide(desync::make_action_set(std::move(set)), term(depth - 1, guarded));
      }
      default: {
        ChannelId c = channel();
        ChannelId to = desync::Signature::is_hatted(c) ? c - 1 : c + 1;
        return Term::rename(desync::make_channel_map({{c, to}}), term(depth - 1, guarded));
      }
    }
  }
};

}  // namespace

desync::SpecFile random_spec(std::mt19937& rng) {
  SpecGen gen{rng, {}, {}};
  std::size_t data = gen.below(3);
  std::vector<DatumId> ids;
  for (std::size_t i = 0; i < data; ++i) ids.push_back(gen.sig.add_datum("d" + std::to_string(i)));
  std::size_t channels = 1 + gen.below(3);
  for (std::size_t i = 0; i < channels; ++i) {
    std::vector<DatumId> carried;
    if (!ids.empty() && gen.chance(0.6)) {
      for (DatumId d : ids)
        if (gen.chance(0.6)) carried.push_back(d);
    }
    gen.sig.add_channel("c" + std::to_string(i), carried);
  }
  std::size_t eqs = 1 + gen.below(4);
  for (std::size_t i = 0; i < eqs; ++i) gen.names.push_back("X" + std::to_string(i));

  desync::SpecFile file;
  file.spec = desync::RecursiveSpec(gen.sig);
  for (const auto& n : gen.names) file.spec.define(n, gen.term(3, false));
  for (const auto& n : gen.names)
    if (gen.chance(0.3)) file.plants.push_back(n);
  if (gen.chance(0.5)) file.supervisor = gen.names[gen.below(gen.names.size())];
  if (gen.chance(0.3)) file.requirement = gen.names[gen.below(gen.names.size())];
  if (gen.chance(0.3)) file.config.method = static_cast<desync::Method>(gen.below(5));
  if (gen.chance(0.3)) file.config.buffer = static_cast<desync::BufferDiscipline>(gen.below(4));
  if (gen.chance(0.3))
    file.config.capacity = gen.chance(0.5) ? std::optional<std::size_t>{} : std::optional<std::size_t>{1 + gen.below(5)};
  if (gen.chance(0.2)) file.config.state_cap = 1 + gen.below(100000);
  return file;
}

}  // namespace oracle
