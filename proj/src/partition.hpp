#pragma once

// Signature-based partition refinement shared by the equivalence checkers.

#include <cstdint>
#include <vector>

#include "desync/lts.hpp"

namespace desync::detail {

inline constexpr std::uint64_t kTerminationEntry = ~std::uint64_t{0};

inline std::uint64_t sig_entry(LabelId label, std::uint32_t block) {
  return (static_cast<std::uint64_t>(label) << 32) | block;
}

/// Strong signature of `s`: its (label, block) pairs plus the termination
/// entry, sorted.
std::vector<std::uint64_t> strong_signature(const Adjacency& adj, const Lts& lts,
                                            const std::vector<std::uint32_t>& block, StateId s);

/// Branching signature of `s`: (label, block) pairs reachable after inert
/// silent steps, excluding inert steps themselves.
std::vector<std::uint64_t> branching_signature(const Adjacency& adj, const Lts& lts,
                                               const std::vector<std::uint32_t>& block, StateId s);

/// Renumbers blocks by first occurrence over state ids.
std::vector<std::uint32_t> normalise_blocks(const std::vector<std::uint32_t>& block);

}  // namespace desync::detail
