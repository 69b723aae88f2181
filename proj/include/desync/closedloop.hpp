#pragma once

#include <set>
#include <string>
#include <vector>

#include "desync/equiv.hpp"
#include "desync/loop_config.hpp"
#include "desync/term.hpp"

namespace desync {

/// Channels of the plant/supervisor interface split by the plant's point of
/// view: inputs are driven by the supervisor (controllable), outputs by the
/// plant (uncontrollable).
struct ChannelPartition {
  std::set<ChannelId> plant_inputs;
  std::set<ChannelId> plant_outputs;
  /// Channels used by only one of the two parties.
  std::set<ChannelId> one_sided;
  std::vector<std::string> warnings;

  /// Communication labels (`h?!d` texts) induced by each side.
  std::set<std::string> input_labels(const Signature& sig) const;
  std::set<std::string> output_labels(const Signature& sig) const;
};

/// Throws Error when a shared channel has the same direction in both parties
/// or either party is not simple.
ChannelPartition channel_partition(const RecursiveSpec& spec, const Term& plant, const Term& supervisor);

/// ∂_B(P ‖ S) with B the send/receive actions over every channel the two
/// parties use. Validates both parties first.
Term sync_closed_loop(const RecursiveSpec& spec, const Term& plant, const Term& supervisor,
                      std::size_t cap = kDefaultStateCap);

struct AsyncLoop {
  /// Encapsulated composition of renamed plant, buffers and renamed
  /// supervisor; identical for all methods.
  Term wired;
  ActionSet hidden;
  /// Unhatting applied after hiding.
  ChannelMap relabel;
  /// rename(relabel, hide(hidden, wired)).
  Term term;
  ChannelPartition partition;
};

/// Buffered loop: a buffer per interface channel reads on the base channel
/// and writes on its hatted twin; both parties have their input channels
/// hatted, so senders write to buffers and receivers read from them.
AsyncLoop async_closed_loop(const RecursiveSpec& spec, const Term& plant, const Term& supervisor,
                            const LoopConfig& cfg);

/// Strong bisimilarity of the synchronous loop and the requirement.
EquivVerdict verify_supervisor(const RecursiveSpec& spec, const Term& plant, const Term& supervisor,
                               const Term& requirement, std::size_t cap = kDefaultStateCap);

}  // namespace desync
