#include "term_store.hpp"

#include <algorithm>
#include <variant>

namespace desync::detail {

namespace {

constexpr NodeId kEmpty = ~NodeId{0};
constexpr NodeId kUnset = ~NodeId{0};

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

}  // namespace

TermStore::TermStore(const RecursiveSpec& spec)
    : spec_(spec), table_(1024, kEmpty), var_bodies_(spec.equations().size(), kUnset) {
  delta_ = make(NodeKind::delta, 0, {});
  epsilon_ = make(NodeKind::epsilon, 0, {});
}

std::size_t TermStore::hash(NodeKind kind, std::uint32_t payload, std::span<const std::uint32_t> kids) const {
  std::size_t h = mix(static_cast<std::size_t>(kind), payload);
  for (auto k : kids) h = mix(h, k);
  return h;
}

void TermStore::grow_table() {
  std::vector<NodeId> bigger(table_.size() * 2, kEmpty);
  std::size_t mask = bigger.size() - 1;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    std::size_t slot = hash(nodes_[id].kind, nodes_[id].payload, kids(id)) & mask;
    while (bigger[slot] != kEmpty) slot = (slot + 1) & mask;
    bigger[slot] = id;
  }
  table_.swap(bigger);
}

NodeId TermStore::make(NodeKind kind, std::uint32_t payload, std::span<const std::uint32_t> k) {
  std::size_t mask = table_.size() - 1;
  std::size_t slot = hash(kind, payload, k) & mask;
  while (table_[slot] != kEmpty) {
    NodeId id = table_[slot];
    const Node& n = nodes_[id];
    if (n.kind == kind && n.payload == payload && n.count == k.size()) {
      auto existing = kids(id);
      if (std::equal(existing.begin(), existing.end(), k.begin())) return id;
    }
    slot = (slot + 1) & mask;
  }
  auto id = static_cast<NodeId>(nodes_.size());
  if (id == kEmpty) throw Error("term store exhausted");
  nodes_.push_back({kind, payload, static_cast<std::uint32_t>(pool_.size()), static_cast<std::uint32_t>(k.size())});
  pool_.insert(pool_.end(), k.begin(), k.end());
  table_[slot] = id;
  memo_index_.push_back(-1);
  terminating_.push_back(-1);
  if (nodes_.size() * 2 > table_.size()) grow_table();
  return id;
}

NodeId TermStore::make_alt(std::vector<NodeId> in) {
  std::vector<NodeId> k;
  k.reserve(in.size());
  for (NodeId c : in) {
    if (nodes_[c].kind == NodeKind::alt) {
      auto sub = kids(c);
      k.insert(k.end(), sub.begin(), sub.end());
    } else if (nodes_[c].kind != NodeKind::delta) {
      k.push_back(c);
    }
  }
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  if (k.empty()) return delta_;
  if (k.size() == 1) return k.front();
  return make(NodeKind::alt, 0, k);
}

NodeId TermStore::make_par(std::vector<NodeId> in) {
  std::vector<NodeId> k;
  k.reserve(in.size());
  for (NodeId c : in) {
    if (nodes_[c].kind == NodeKind::par) {
      auto sub = kids(c);
      k.insert(k.end(), sub.begin(), sub.end());
    } else if (nodes_[c].kind != NodeKind::epsilon) {
      k.push_back(c);
    }
  }
  if (k.empty()) return epsilon_;
  if (k.size() == 1) return k.front();
  return make(NodeKind::par, 0, k);
}

NodeId TermStore::make_buffer(std::uint32_t info, std::vector<DatumId> contents) {
  return make(NodeKind::buffer, info, contents);
}

std::uint32_t TermStore::intern_set(const ActionSet& set) {
  std::vector<PackedAction> packed;
  for (const auto& a : set) packed.push_back(pack(a));
  std::sort(packed.begin(), packed.end());
  for (std::uint32_t i = 0; i < sets_.size(); ++i)
    if (sets_[i] == packed) return i;
  sets_.push_back(std::move(packed));
  return static_cast<std::uint32_t>(sets_.size() - 1);
}

std::uint32_t TermStore::intern_map(const ChannelMap& map) {
  for (std::uint32_t i = 0; i < maps_.size(); ++i)
    if (maps_[i] == map) return i;
  maps_.push_back(map);
  return static_cast<std::uint32_t>(maps_.size() - 1);
}

std::uint32_t TermStore::intern_buffer(const BufferProc& b) {
  for (std::uint32_t i = 0; i < buffers_.size(); ++i)
    if (buffers_[i].kind == b.kind && buffers_[i].input == b.input && buffers_[i].data == b.data) return i;
  buffers_.push_back({b.kind, b.input, b.data});
  return static_cast<std::uint32_t>(buffers_.size() - 1);
}

NodeId TermStore::intern(const Term& t) {
  const auto& v = t.node().v;
  if (std::holds_alternative<Delta>(v)) return delta_;
  if (std::holds_alternative<Epsilon>(v)) return epsilon_;
  if (const auto* p = std::get_if<Prefix>(&v)) {
    std::uint32_t rest = intern(p->rest);
    return make(NodeKind::prefix, pack(p->action), {&rest, 1});
  }
  if (const auto* a = std::get_if<Alt>(&v)) {
    std::vector<NodeId> k;
    for (const auto& o : a->options) k.push_back(intern(o));
    return make_alt(std::move(k));
  }
  if (const auto* p = std::get_if<Par>(&v)) return make_par({intern(p->left), intern(p->right)});
  if (const auto* e = std::get_if<Encap>(&v)) {
    std::uint32_t body = intern(e->body);
    return make(NodeKind::encap, intern_set(e->blocked), {&body, 1});
  }
  if (const auto* h = std::get_if<Hide>(&v)) {
    std::uint32_t body = intern(h->body);
    return make(NodeKind::hide, intern_set(h->hidden), {&body, 1});
  }
  if (const auto* r = std::get_if<Rename>(&v)) {
    std::uint32_t body = intern(r->body);
    return make(NodeKind::rename, intern_map(r->map), {&body, 1});
  }
  if (const auto* x = std::get_if<Var>(&v)) {
    auto index = spec_.index_of(x->name);
    if (!index) throw Error("unbound recursion variable '" + x->name + "'");
    return make(NodeKind::var, static_cast<std::uint32_t>(*index), {});
  }
  const auto& b = std::get<BufferProc>(v);
  if (Signature::is_hatted(b.input)) throw Error("buffer input channel must not be hatted");
  return make_buffer(intern_buffer(b), b.contents);
}

NodeId TermStore::var_body(std::uint32_t index) {
  if (var_bodies_[index] == kUnset) var_bodies_[index] = intern(spec_.equations()[index].body);
  return var_bodies_[index];
}

NodeId TermStore::peel(NodeId root, std::vector<Wrapper>& wrappers) const {
  wrappers.clear();
  NodeId cur = root;
  while (true) {
    NodeKind k = nodes_[cur].kind;
    if (k != NodeKind::encap && k != NodeKind::hide && k != NodeKind::rename) return cur;
    wrappers.push_back({k, nodes_[cur].payload});
    cur = kids(cur)[0];
  }
}

bool TermStore::apply_wrappers(const std::vector<Wrapper>& wrappers, PackedAction& a) const {
  for (auto it = wrappers.rbegin(); it != wrappers.rend(); ++it) {
    if (a == 0) return true;  // tau passes through unchanged
    switch (it->kind) {
      case NodeKind::encap: {
        const auto& set = sets_[it->payload];
        if (std::binary_search(set.begin(), set.end(), a)) return false;
        break;
      }
      case NodeKind::hide: {
        const auto& set = sets_[it->payload];
        if (std::binary_search(set.begin(), set.end(), a)) a = 0;
        break;
      }
      case NodeKind::rename:
        a = pack(desync::apply(maps_[it->payload], unpack(a)));
        break;
      default:
        break;
    }
  }
  return true;
}

void TermStore::steps(NodeId id, std::vector<Step>& out) {
  NodeKind k = nodes_[id].kind;
  if (!memoised(k)) {
    compute_steps(id, out);
    return;
  }
  if (memo_index_[id] < 0) {
    std::vector<Step> local;
    compute_steps(id, local);
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());
    memo_index_[id] = static_cast<std::int32_t>(memo_.size());
    memo_.push_back(std::move(local));
  }
  const auto& cached = memo_[static_cast<std::size_t>(memo_index_[id])];
  out.insert(out.end(), cached.begin(), cached.end());
}

void TermStore::compute_steps(NodeId id, std::vector<Step>& out) {
  const Node n = nodes_[id];
  switch (n.kind) {
    case NodeKind::delta:
    case NodeKind::epsilon:
      return;
    case NodeKind::prefix:
      out.push_back({n.payload, kids(id)[0]});
      return;
    case NodeKind::alt: {
      std::vector<NodeId> k(kids(id).begin(), kids(id).end());
      for (NodeId c : k) steps(c, out);
      return;
    }
    case NodeKind::var:
      steps(var_body(n.payload), out);
      return;
    case NodeKind::buffer:
      buffer_steps(id, out);
      return;
    case NodeKind::encap:
    case NodeKind::hide:
    case NodeKind::rename: {
      std::vector<Step> inner;
      steps(kids(id)[0], inner);
      std::vector<Wrapper> w{{n.kind, n.payload}};
      for (auto s : inner) {
        if (!apply_wrappers(w, s.action)) continue;
        out.push_back({s.action, make(n.kind, n.payload, {&s.target, 1})});
      }
      return;
    }
    case NodeKind::par: {
      std::vector<NodeId> k(kids(id).begin(), kids(id).end());
      std::vector<std::vector<Step>> per(k.size());
      for (std::size_t i = 0; i < k.size(); ++i) steps(k[i], per[i]);
      std::vector<NodeId> next;
      for (std::size_t i = 0; i < k.size(); ++i) {
        for (const auto& s : per[i]) {
          next = k;
          next[i] = s.target;
          out.push_back({s.action, make_par(next)});
        }
      }
      // Binary handshakes: a send in one operand with the matching receive in
      // another.
      for (std::size_t i = 0; i < k.size(); ++i) {
        for (const auto& si : per[i]) {
          Action ai = unpack(si.action);
          if (!ai.is_send_or_receive()) continue;
          for (std::size_t j = i + 1; j < k.size(); ++j) {
            for (const auto& sj : per[j]) {
              auto merged = communication_merge(ai, unpack(sj.action));
              if (!merged) continue;
              next = k;
              next[i] = si.target;
              next[j] = sj.target;
              out.push_back({pack(*merged), make_par(next)});
            }
          }
        }
      }
      return;
    }
  }
}

void TermStore::buffer_steps(NodeId id, std::vector<Step>& out) {
  const Node n = nodes_[id];
  const BufferInfo& info = buffers_[n.payload];
  std::vector<DatumId> contents(kids(id).begin(), kids(id).end());
  const ChannelId in = info.input;
  const ChannelId outch = in | 1u;
  const bool full = info.kind.capacity && contents.size() >= *info.kind.capacity;

  switch (info.kind.discipline) {
    case BufferDiscipline::queue: {
      if (!full) {
        for (DatumId d : info.data) {
          std::vector<DatumId> next{d};
          next.insert(next.end(), contents.begin(), contents.end());
          out.push_back({pack(Action::receive(in, d)), make_buffer(n.payload, std::move(next))});
        }
      }
      if (!contents.empty()) {
        std::vector<DatumId> next(contents.begin(), contents.end() - 1);
        out.push_back({pack(Action::send(outch, contents.back())), make_buffer(n.payload, std::move(next))});
      }
      return;
    }
    case BufferDiscipline::stack: {
      if (!full) {
        for (DatumId d : info.data) {
          std::vector<DatumId> next{d};
          next.insert(next.end(), contents.begin(), contents.end());
          out.push_back({pack(Action::receive(in, d)), make_buffer(n.payload, std::move(next))});
        }
      }
      if (!contents.empty()) {
        std::vector<DatumId> next(contents.begin() + 1, contents.end());
        out.push_back({pack(Action::send(outch, contents.front())), make_buffer(n.payload, std::move(next))});
      }
      return;
    }
    case BufferDiscipline::wire: {
      for (DatumId d : info.data)
        out.push_back({pack(Action::receive(in, d)), make_buffer(n.payload, {d})});
      if (!contents.empty()) out.push_back({pack(Action::send(outch, contents.front())), id});
      return;
    }
    case BufferDiscipline::bag: {
      if (!full) {
        for (DatumId d : info.data) {
          std::vector<DatumId> next = contents;
          next.insert(std::upper_bound(next.begin(), next.end(), d), d);
          out.push_back({pack(Action::receive(in, d)), make_buffer(n.payload, std::move(next))});
        }
      }
      for (std::size_t i = 0; i < contents.size(); ++i) {
        if (i > 0 && contents[i] == contents[i - 1]) continue;
        std::vector<DatumId> next = contents;
        next.erase(next.begin() + static_cast<std::ptrdiff_t>(i));
        out.push_back({pack(Action::send(outch, contents[i])), make_buffer(n.payload, std::move(next))});
      }
      return;
    }
  }
}

bool TermStore::terminating(NodeId id) {
  if (terminating_[id] >= 0) return terminating_[id] != 0;
  const Node n = nodes_[id];
  bool result = false;
  switch (n.kind) {
    case NodeKind::epsilon: result = true; break;
    case NodeKind::delta:
    case NodeKind::prefix:
    case NodeKind::buffer: result = false; break;
    case NodeKind::alt: {
      std::vector<NodeId> k(kids(id).begin(), kids(id).end());
      result = std::any_of(k.begin(), k.end(), [&](NodeId c) { return terminating(c); });
      break;
    }
    case NodeKind::par: {
      std::vector<NodeId> k(kids(id).begin(), kids(id).end());
      result = std::all_of(k.begin(), k.end(), [&](NodeId c) { return terminating(c); });
      break;
    }
    case NodeKind::encap:
    case NodeKind::hide:
    case NodeKind::rename: result = terminating(kids(id)[0]); break;
    case NodeKind::var: result = terminating(var_body(n.payload)); break;
  }
  terminating_[id] = result ? 1 : 0;
  return result;
}

}  // namespace desync::detail
