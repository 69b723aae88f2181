#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "desync/lts.hpp"
#include "desync/term.hpp"

namespace desync {

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

/// Breadth-first generation of the LTS of `root`. States are canonical terms
/// and are numbered in discovery order. If a new state would push the count
/// past `cap`, exploration stops and the result is marked truncated.
/// Throws Error for unbound variables or unguarded recursion.
Lts generate_lts(const RecursiveSpec& spec, const Term& root, std::size_t cap = kDefaultStateCap);

struct DeterminismVerdict {
  bool deterministic = true;
  StateId state = 0;
  std::string label;
  StateId first = 0;
  StateId second = 0;
};

/// Throws TruncationError for truncated input.
DeterminismVerdict is_deterministic(const Lts& lts);

struct ValidityVerdict {
  SimpleVerdict simple;
  DeterminismVerdict determinism;
  /// First label of a forbidden kind, if any.
  std::optional<std::string> forbidden_label;
  std::size_t states = 0;

  bool valid() const { return simple.simple && determinism.deterministic && !forbidden_label; }
  std::string explain(const Signature& sig) const;
};

/// Simple, deterministic and free of communication labels.
ValidityVerdict check_plant_validity(const RecursiveSpec& spec, const Term& root,
                                     std::size_t cap = kDefaultStateCap);
ValidityVerdict check_supervisor_validity(const RecursiveSpec& spec, const Term& root,
                                          std::size_t cap = kDefaultStateCap);
/// Deterministic and carrying only communication labels. Simplicity is not
/// required and is reported as satisfied.
ValidityVerdict check_requirement_validity(const RecursiveSpec& spec, const Term& root,
                                           std::size_t cap = kDefaultStateCap);

}  // namespace desync
