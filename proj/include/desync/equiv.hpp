#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "desync/lts.hpp"
#include "desync/semantics.hpp"

namespace desync {

enum class Relation : std::uint8_t { strong, branching, weak_trace };

std::string to_string(Relation r);
std::optional<Relation> parse_relation(std::string_view text);

enum class Side : std::uint8_t { lhs, rhs };

/// Why two systems differ.
///
/// For bisimulations: the initial states, and a step `label` that `side` can
/// take (after inert silent steps, for branching) into a class the other
/// side cannot reach with that label; `label` is "<termination>" when only
/// one side can terminate.
///
/// For weak traces: `trace` is a shortest visible trace (ties broken by label
/// text) that `side` can perform and the other cannot; a final
/// "<termination>" entry means both can do the prefix but only `side` can
/// then terminate.
struct EquivWitness {
  Side side = Side::lhs;
  StateId lhs_state = 0;
  StateId rhs_state = 0;
  std::string label;
  std::vector<std::string> trace;
};

struct EquivStats {
  std::size_t lhs_states = 0;
  std::size_t lhs_transitions = 0;
  std::size_t rhs_states = 0;
  std::size_t rhs_transitions = 0;
  /// Classes of the combined state space (bisimulations) or pairs of subset
  /// states explored (weak traces).
  std::size_t reduced = 0;
};

struct EquivVerdict {
  Relation relation = Relation::strong;
  bool holds = false;
  std::optional<EquivWitness> witness;
  EquivStats stats;
};

inline constexpr std::string_view kTerminationLabel = "<termination>";

EquivVerdict strong_bisim(const Lts& lhs, const Lts& rhs);
/// Divergence-insensitive branching bisimilarity.
EquivVerdict branching_bisim(const Lts& lhs, const Lts& rhs);
/// Weak trace equivalence with termination observable. Determinisation
/// visits at most `cap` subset pairs before giving up with TruncationError.
EquivVerdict weak_trace_equiv(const Lts& lhs, const Lts& rhs, std::size_t cap = kDefaultStateCap);
EquivVerdict check_equivalence(Relation r, const Lts& lhs, const Lts& rhs, std::size_t cap = kDefaultStateCap);

/// Coarsest strong (resp. branching) bisimulation as a block number per
/// state. Blocks are numbered in order of first occurrence over state ids.
std::vector<std::uint32_t> strong_partition(const Lts& lts);
std::vector<std::uint32_t> branching_partition(const Lts& lts);

struct Deadlock {
  StateId state = 0;
  std::vector<std::string> trace;
  std::vector<LabelId> labels;
};

struct DeadlockReport {
  std::vector<Deadlock> deadlocks;
  /// The LTS was truncated; unexplored states were skipped.
  bool partial = false;
};

/// Non-terminating states without outgoing transitions, in breadth-first
/// order, each with a shortest trace from the initial state (ties broken by
/// label text).
DeadlockReport find_deadlocks(const Lts& lts);

/// Quotient under the relation. For weak traces this is the minimal
/// deterministic tau-free automaton of the trace language.
Lts minimize(const Lts& lts, Relation r, std::size_t cap = kDefaultStateCap);

/// Disjoint union with labels matched by text. States of `rhs` are offset by
/// `lhs.num_states`; the initial state is the one of `lhs`.
Lts disjoint_union(const Lts& lhs, const Lts& rhs);

}  // namespace desync
