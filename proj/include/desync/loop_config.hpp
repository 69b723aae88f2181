#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "desync/semantics.hpp"
#include "desync/term.hpp"

namespace desync {

/// How the buffered loop exposes its buffer interactions: M1 hides the
/// plant-side edges, M2 the supervisor-side edges, M3 every sender-to-buffer
/// edge and M4 every buffer-to-receiver edge. `sync` is the handshake loop.
enum class Method : std::uint8_t { sync, m1, m2, m3, m4 };

std::string to_string(Method m);
std::optional<Method> parse_method(std::string_view text);

struct LoopConfig {
  Method method = Method::m1;
  BufferKind buffer;
  std::size_t state_cap = kDefaultStateCap;

  friend bool operator==(const LoopConfig&, const LoopConfig&) = default;
};

}  // namespace desync
