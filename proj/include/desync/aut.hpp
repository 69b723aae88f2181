#pragma once

// Aldebaran (.aut) exchange format:
//
//   des (initial, transitions, states)
//   (src,"label",dst)
//   ...
//
// Terminating states are written as a `"<tick>"` self loop, which import
// turns back into the termination flag.

#include <string>
#include <string_view>

#include "desync/lts.hpp"

namespace desync {

inline constexpr std::string_view kTickLabel = "<tick>";

/// States are renumbered breadth-first from the initial state, so the
/// initial state is always 0. Throws TruncationError for truncated input.
std::string export_aut(const Lts& lts);

/// Accepts `tau` and `i` as the silent label; other labels that are not
/// actions become opaque. Throws Error on malformed input.
Lts import_aut(std::string_view text);

}  // namespace desync
