#pragma once

// Hash-consed term representation used for state-space exploration. States
// are canonical node ids: alternative composition is flattened, sorted and
// deduplicated with δ removed; parallel composition is flattened with ε
// removed. Operators never simplify across encapsulation, hiding or renaming,
// so a chain of those at the root stays fixed along every path.

#include <cstdint>
#include <span>
#include <vector>

#include "desync/term.hpp"

namespace desync::detail {

using NodeId = std::uint32_t;
using PackedAction = std::uint32_t;

enum class NodeKind : std::uint8_t { delta, epsilon, prefix, alt, par, encap, hide, rename, var, buffer };

inline PackedAction pack(const Action& a) {
  return (static_cast<PackedAction>(a.polarity) << 30) | (a.channel << 15) | a.datum;
}

inline Action unpack(PackedAction p) {
  return {static_cast<Polarity>(p >> 30), (p >> 15) & 0x7fffu, p & 0x7fffu};
}

struct Step {
  PackedAction action;
  NodeId target;
  friend auto operator<=>(const Step&, const Step&) = default;
};

struct Wrapper {
  NodeKind kind;
  std::uint32_t payload;
};

class TermStore {
 public:
  explicit TermStore(const RecursiveSpec& spec);

  NodeId intern(const Term& t);

  /// Appends the outgoing steps of `id` to `out`.
  void steps(NodeId id, std::vector<Step>& out);
  bool terminating(NodeId id);

  NodeKind kind(NodeId id) const { return nodes_[id].kind; }
  std::size_t size() const { return nodes_.size(); }

  /// Splits off the encapsulation/hiding/renaming operators at the root,
  /// outermost first, and returns the node underneath.
  NodeId peel(NodeId root, std::vector<Wrapper>& wrappers) const;
  /// Applies the wrappers (innermost first) to an action of the inner node;
  /// returns false when the action is blocked.
  bool apply_wrappers(const std::vector<Wrapper>& wrappers, PackedAction& a) const;

 private:
  struct Node {
    NodeKind kind;
    std::uint32_t payload;
    std::uint32_t first;
    std::uint32_t count;
  };
  struct BufferInfo {
    BufferKind kind;
    ChannelId input;
    std::vector<DatumId> data;
  };

  std::span<const std::uint32_t> kids(NodeId id) const {
    const Node& n = nodes_[id];
    return {pool_.data() + n.first, n.count};
  }

  NodeId make(NodeKind kind, std::uint32_t payload, std::span<const std::uint32_t> kids);
  NodeId make_alt(std::vector<NodeId> kids);
  NodeId make_par(std::vector<NodeId> kids);
  NodeId make_buffer(std::uint32_t info, std::vector<DatumId> contents);
  std::uint32_t intern_set(const ActionSet& set);
  std::uint32_t intern_map(const ChannelMap& map);
  std::uint32_t intern_buffer(const BufferProc& b);
  NodeId var_body(std::uint32_t index);

  void compute_steps(NodeId id, std::vector<Step>& out);
  void buffer_steps(NodeId id, std::vector<Step>& out);
  static bool memoised(NodeKind k) {
    return k == NodeKind::prefix || k == NodeKind::alt || k == NodeKind::var || k == NodeKind::buffer;
  }

  std::size_t hash(NodeKind kind, std::uint32_t payload, std::span<const std::uint32_t> kids) const;
  void grow_table();

  const RecursiveSpec& spec_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> pool_;
  std::vector<NodeId> table_;  // open addressing, kEmpty marks free slots
  std::vector<std::vector<PackedAction>> sets_;
  std::vector<ChannelMap> maps_;
  std::vector<BufferInfo> buffers_;
  std::vector<NodeId> var_bodies_;
  std::vector<std::int32_t> memo_index_;
  std::vector<std::vector<Step>> memo_;
  std::vector<std::int8_t> terminating_;
  NodeId delta_ = 0;
  NodeId epsilon_ = 0;
};

}  // namespace desync::detail
