#pragma once

// Sufficient conditions for desynchronisability, each with a replayable
// witness.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "desync/closedloop.hpp"
#include "desync/equiv.hpp"
#include "desync/loop_config.hpp"
#include "desync/semantics.hpp"

namespace desync {

enum class Role : std::uint8_t { plant, supervisor };
std::string to_string(Role r);

struct WellPosedWitness {
  /// Matched communications leading to the offending pair.
  std::vector<std::string> path;
  /// The send with no matching receive, e.g. `k!b`.
  std::string unmatched;
  /// Party performing the unmatched send.
  Role role = Role::plant;
  StateId plant_state = 0;
  StateId supervisor_state = 0;
};

struct WellPosedResult {
  bool holds = true;
  std::optional<WellPosedWitness> witness;
  std::size_t pairs = 0;
};

struct SelfLoop {
  Role role = Role::plant;
  /// Name of the process whose LTS contains the loop.
  std::string process;
  StateId state = 0;
  std::string label;
};

struct SelfLoopResult {
  bool holds = true;
  std::vector<SelfLoop> offenders;
};

struct DiamondWitness {
  StateId state = 0;
  /// Shortest trace from the initial state to `state`.
  std::vector<std::string> access;
  std::string a, b;
  StateId q1 = 0;  // after a
  StateId q2 = 0;  // after b
};

struct DiamondResult {
  bool holds = true;
  std::optional<DiamondWitness> witness;
};

enum class CycleSide : std::uint8_t { inputs, outputs };
std::string to_string(CycleSide s);

struct CycleWitness {
  /// The label set the cycle avoids.
  CycleSide empty_side = CycleSide::inputs;
  /// States visited; front() == back().
  std::vector<StateId> states;
  std::vector<std::string> labels;
  /// Trace from the initial state to states.front(); empty unless strict.
  std::vector<std::string> access;
};

struct CycleResult {
  bool holds = true;
  bool strict = false;
  std::optional<CycleWitness> witness;
};

/// Mutual receivability on the matched-pair product of the two LTSs: after
/// every jointly realisable history, each send one side offers is accepted by
/// the other. Silent steps of either side are taken alone.
WellPosedResult check_well_posed(const Lts& plant, const Lts& supervisor);
WellPosedResult check_well_posed(const RecursiveSpec& spec, const Term& plant, const Term& supervisor,
                                 std::size_t cap = kDefaultStateCap);

/// All q -a-> q edges of `lts`, attributed to `role`/`process`.
std::vector<SelfLoop> self_loops(const Lts& lts, Role role, const std::string& process);

struct NamedProcess {
  std::string name;
  Term term;
};

SelfLoopResult check_no_self_loops(const RecursiveSpec& spec, const std::vector<NamedProcess>& plants,
                                   const NamedProcess& supervisor, std::size_t cap = kDefaultStateCap);

/// Throws Error for nondeterministic input, TruncationError for truncated.
DiamondResult check_diamond(const Lts& loop);

/// Without `strict`, looks for a non-empty cycle through the initial state
/// avoiding all input labels, then one avoiding all output labels. With
/// `strict`, any reachable cycle counts.
CycleResult check_cycle_condition(const Lts& loop, const std::set<std::string>& input_labels,
                                  const std::set<std::string>& output_labels, bool strict = false);
CycleResult check_cycle_condition(const Lts& loop, const ChannelPartition& partition, const Signature& sig,
                                  bool strict = false);

/// η: outgoing label texts per state; Br: their number.
std::vector<std::set<std::string>> enabled_map(const Lts& lts);
std::vector<std::size_t> branching_degree(const Lts& lts);

struct ReportOptions {
  bool strict_cycles = false;
  std::size_t cap = kDefaultStateCap;
  /// Also build the buffered loop and compare it with the synchronous one.
  bool direct_check = false;
  LoopConfig direct_config;
};

struct DirectCheck {
  LoopConfig config;
  bool truncated = false;
  std::size_t states = 0;
  DeadlockReport deadlocks;
  std::optional<EquivVerdict> branching;
};

struct ConditionReport {
  ValidityVerdict plant_validity;
  ValidityVerdict supervisor_validity;
  WellPosedResult well_posed;
  SelfLoopResult self_loops;
  /// Empty when the loop could not be checked; see `notes`.
  std::optional<DiamondResult> diamond;
  std::optional<CycleResult> cycle;
  std::vector<std::set<std::string>> enabled;
  std::vector<std::size_t> branching;
  std::size_t loop_states = 0;
  std::size_t loop_transitions = 0;
  std::optional<DirectCheck> direct;
  std::vector<std::string> notes;

  bool valid() const { return plant_validity.valid() && supervisor_validity.valid(); }
  /// All four conditions hold. Sufficient, not necessary, for
  /// desynchronisability.
  bool all_hold() const;
};

/// Throws TruncationError when a component or the synchronous loop exceeds
/// the cap.
ConditionReport desynchronisability_report(const RecursiveSpec& spec, const std::vector<NamedProcess>& plants,
                                           const NamedProcess& supervisor, const ReportOptions& options = {});

}  // namespace desync
