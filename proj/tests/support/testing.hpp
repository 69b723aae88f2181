#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "desync/dsl.hpp"
#include "desync/lts.hpp"
#include "desync/semantics.hpp"

namespace testing {

inline desync::Lts lts_of(const desync::SpecFile& f, std::string_view name,
                          std::size_t cap = desync::kDefaultStateCap) {
  return desync::generate_lts(f.spec, desync::Term::var(std::string(name)), cap);
}

inline std::set<std::string> labels_at(const desync::Lts& lts, desync::StateId s) {
  std::set<std::string> out;
  for (const auto& t : lts.transitions)
    if (t.source == s) out.insert(lts.labels[t.label].text);
  return out;
}

inline bool has_edge(const desync::Lts& lts, desync::StateId s, std::string_view label, desync::StateId d) {
  for (const auto& t : lts.transitions)
    if (t.source == s && t.target == d && lts.labels[t.label].text == label) return true;
  return false;
}

/// Follows a visible-label trace through a deterministic, tau-free LTS.
inline std::optional<desync::StateId> walk(const desync::Lts& lts, const std::vector<std::string>& trace) {
  desync::StateId s = lts.initial;
  for (const auto& l : trace) {
    bool moved = false;
    for (const auto& t : lts.transitions)
      if (t.source == s && lts.labels[t.label].text == l) {
        s = t.target;
        moved = true;
        break;
      }
    if (!moved) return std::nullopt;
  }
  return s;
}

}  // namespace testing
