#pragma once

// Textual specification format.
//
//   spec   := decl*
//   decl   := "data" ids ";"
//           | "chan" ids [":" ids] ";"
//           | "proc" ID "=" term ";"
//           | "plant" ids ";" | "supervisor" ID ";" | "requirement" ID ";"
//           | "config" setting ("," setting)* ";"
//   setting:= "method" "=" (sync|m1|m2|m3|m4)
//           | "buffer" "=" (queue|stack|wire|bag)
//           | "capacity" "=" (NUMBER|unbounded)
//           | "cap" "=" NUMBER
//   term   := seq ("+" seq)*
//   seq    := factor ("." seq)?        left side must be an action
//   factor := "delta" | "epsilon" | action | ID | "(" term ")"
//           | "par" "(" term "," term ")"
//           | "encap" "(" "{" actions "}" "," term ")"
//           | "hide" "(" "{" actions "}" "," term ")"
//           | "rename" "(" "{" CHAN "->" CHAN ("," CHAN "->" CHAN)* "}" "," term ")"
//   action := CHAN ("?"|"!"|"?!") [DATUM] | "tau"
//
// A channel without a ":" data list carries only `unit`; `h?` means `h?unit`.
// `h'` names the hatted twin of `h`. `#` comments run to end of line.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "desync/loop_config.hpp"
#include "desync/term.hpp"

namespace desync {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

struct ConfigDefaults {
  std::optional<Method> method;
  std::optional<BufferDiscipline> buffer;
  /// Set when the file names a capacity; an empty inner value means unbounded.
  std::optional<std::optional<std::size_t>> capacity;
  std::optional<std::size_t> state_cap;

  friend bool operator==(const ConfigDefaults&, const ConfigDefaults&) = default;
  bool empty() const { return !method && !buffer && !capacity && !state_cap; }
  /// Overlays the settings present on `base`.
  LoopConfig apply(LoopConfig base) const;
};

struct SpecFile {
  RecursiveSpec spec;
  std::vector<std::string> plants;
  std::optional<std::string> supervisor;
  std::optional<std::string> requirement;
  ConfigDefaults config;
  /// Non-fatal diagnostics, e.g. a non-simple plant.
  std::vector<std::string> warnings;

  const Signature& signature() const { return spec.signature(); }
  /// Parallel composition of the plant variables (ε when there are none).
  Term plant_term() const;
  /// Throws Error when no supervisor is declared.
  Term supervisor_term() const;
  Term requirement_term() const;

  /// Structural equality, ignoring warnings.
  friend bool operator==(const SpecFile& a, const SpecFile& b) {
    return a.spec == b.spec && a.plants == b.plants && a.supervisor == b.supervisor &&
           a.requirement == b.requirement && a.config == b.config;
  }
};

/// Throws ParseError (with 1-based line and column) on malformed or
/// ill-formed input.
SpecFile parse_spec(std::string_view text);

/// Text that parses back to an equal SpecFile.
std::string print_spec(const SpecFile& file);

/// DSL rendering of a single term; hatted channels print as `h'`.
std::string print_term(const Term& t, const Signature& sig);

}  // namespace desync
