#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace desync {

using StateId = std::uint32_t;
using LabelId = std::uint32_t;

enum class LabelKind : std::uint8_t { tau, send, receive, comm, opaque };

/// A transition label as text plus its parsed structure. Labels that do not
/// look like actions (for instance from foreign `.aut` files) are opaque: they
/// take part in equivalence checking but carry no channel information.
struct Label {
  LabelKind kind = LabelKind::tau;
  std::string channel;
  std::string datum;
  std::string text = "tau";

  bool is_tau() const { return kind == LabelKind::tau; }
  friend bool operator==(const Label& a, const Label& b) { return a.text == b.text; }
};

/// Parses `tau`, `h!d`, `h?d`, `h?!d` (datum optional, defaulting to unit);
/// anything else becomes an opaque label.
Label parse_label(std::string_view text);

struct Transition {
  StateId source = 0;
  LabelId label = 0;
  StateId target = 0;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Explicit labelled transition system. Label 0 is always tau.
struct Lts {
  Lts();

  std::size_t num_states = 0;
  StateId initial = 0;
  std::vector<Transition> transitions;
  std::vector<bool> terminating;
  std::vector<Label> labels;
  /// Set when exploration hit the state cap; `unexplored` then lists the
  /// states whose outgoing transitions are incomplete.
  bool truncated = false;
  std::size_t cap = 0;
  std::vector<StateId> unexplored;

  StateId add_state(bool is_terminating = false);
  LabelId intern_label(const Label& label);
  LabelId intern_label(std::string_view text) { return intern_label(parse_label(text)); }
  std::optional<LabelId> find_label(std::string_view text) const;
  void add_transition(StateId src, LabelId label, StateId dst);

  const Label& label(LabelId id) const { return labels.at(id); }
  /// Non-tau labels used by at least one transition, sorted by text.
  std::vector<std::string> alphabet() const;
  /// Throws TruncationError when truncated.
  void require_complete(std::string_view what) const;

 private:
  std::map<std::string, LabelId, std::less<>> label_index_;
};

/// Compressed outgoing adjacency, sorted per state by (label text, target).
struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<Transition> edges;

  explicit Adjacency(const Lts& lts);
  std::size_t begin(StateId s) const { return offsets[s]; }
  std::size_t end(StateId s) const { return offsets[s + 1]; }
  std::size_t degree(StateId s) const { return offsets[s + 1] - offsets[s]; }
};

/// Rank of each label in lexicographic text order; used for deterministic
/// tie-breaking.
std::vector<std::uint32_t> label_ranks(const Lts& lts);

/// Relabels every send/receive label `h!d`/`h?d` into `h?!d`.
Lts to_communication_labels(const Lts& lts);

/// States reachable from the initial state, renumbered in breadth-first order
/// (successors visited by label text, then target). Unreachable states are
/// dropped.
Lts canonical_form(const Lts& lts);

/// Structural equality: same numbering, transitions, flags and label texts.
bool identical(const Lts& a, const Lts& b);

}  // namespace desync
