#pragma once

// Core syntax of the process language: signatures, actions, process terms
// and recursive specifications.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace desync {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation needs a complete state space but exploration hit
/// its state cap.
class TruncationError : public Error {
 public:
  using Error::Error;
};

using ChannelId = std::uint32_t;
using DatumId = std::uint32_t;

/// Data elements and channel names. Every declared channel `h` comes with a
/// hatted twin `h'`; base channels have even ids and their twins the next odd
/// id, so hatting is a bit operation.
class Signature {
 public:
  static constexpr DatumId kUnit = 0;
  static constexpr std::size_t kMaxChannels = 1u << 14;
  static constexpr std::size_t kMaxData = 1u << 15;

  Signature();

  DatumId add_datum(const std::string& name);
  /// Declares a base channel. An empty data list means the channel carries
  /// only `unit`.
  ChannelId add_channel(const std::string& name, std::vector<DatumId> data = {});

  std::optional<DatumId> find_datum(std::string_view name) const;
  /// Resolves both base names and hatted names (`h'`).
  std::optional<ChannelId> find_channel(std::string_view name) const;

  const std::string& datum_name(DatumId d) const { return data_.at(d); }
  std::string channel_name(ChannelId c) const;

  static bool is_hatted(ChannelId c) { return (c & 1u) != 0; }
  static ChannelId base_of(ChannelId c) { return c & ~1u; }

  /// Data carried by a channel (shared between `h` and `h'`).
  std::span<const DatumId> channel_data(ChannelId c) const;
  bool carries(ChannelId c, DatumId d) const;
  bool channel_declared_untyped(ChannelId c) const;

  std::size_t num_data() const { return data_.size(); }
  std::size_t num_base_channels() const { return channels_.size(); }
  std::vector<ChannelId> base_channels() const;
  std::vector<DatumId> user_data() const;

  friend bool operator==(const Signature& a, const Signature& b);

 private:
  struct ChannelInfo {
    std::string name;
    std::vector<DatumId> data;
    bool untyped;
  };
  std::vector<std::string> data_;
  std::map<std::string, DatumId, std::less<>> datum_index_;
  std::vector<ChannelInfo> channels_;
  std::map<std::string, ChannelId, std::less<>> channel_index_;
};

enum class Polarity : std::uint8_t { tau = 0, send = 1, receive = 2, comm = 3 };

struct Action {
  Polarity polarity = Polarity::tau;
  ChannelId channel = 0;
  DatumId datum = 0;

  static Action tau() { return {}; }
  static Action send(ChannelId c, DatumId d) { return {Polarity::send, c, d}; }
  static Action receive(ChannelId c, DatumId d) { return {Polarity::receive, c, d}; }
  static Action comm(ChannelId c, DatumId d) { return {Polarity::comm, c, d}; }

  bool is_tau() const { return polarity == Polarity::tau; }
  bool is_send_or_receive() const {
    return polarity == Polarity::send || polarity == Polarity::receive;
  }

  friend auto operator<=>(const Action&, const Action&) = default;
};

/// Renders `h!d`, `h?d`, `h?!d` or `tau`.
std::string to_string(const Action& a, const Signature& sig);

/// γ: merges a matching send/receive pair into a communication.
std::optional<Action> communication_merge(const Action& a, const Action& b);

/// Sorted, duplicate-free action set.
using ActionSet = std::vector<Action>;
ActionSet make_action_set(std::vector<Action> actions);
bool contains(const ActionSet& set, const Action& a);

/// Channel-level renaming; channels not listed map to themselves.
using ChannelMap = std::vector<std::pair<ChannelId, ChannelId>>;
ChannelMap make_channel_map(std::vector<std::pair<ChannelId, ChannelId>> entries);
ChannelId apply(const ChannelMap& map, ChannelId c);
Action apply(const ChannelMap& map, const Action& a);

enum class BufferDiscipline : std::uint8_t { queue, stack, wire, bag };

struct BufferKind {
  BufferDiscipline discipline = BufferDiscipline::queue;
  /// Empty means unbounded. Ignored by wires.
  std::optional<std::size_t> capacity;

  friend bool operator==(const BufferKind&, const BufferKind&) = default;
};

std::string to_string(BufferDiscipline d);
std::optional<BufferDiscipline> parse_buffer_discipline(std::string_view text);

struct TermNode;

/// Immutable, shareable process term.
class Term {
 public:
  Term();  // δ

  static Term delta();
  static Term epsilon();
  static Term prefix(Action a, Term rest);
  /// Alternative composition; an empty list is δ and a singleton is itself.
  static Term alt(std::vector<Term> options);
  static Term alt(Term left, Term right);
  static Term par(Term left, Term right);
  /// Right-nested parallel composition; an empty list is ε.
  static Term par(std::vector<Term> parts);
  static Term encap(ActionSet blocked, Term body);
  static Term hide(ActionSet hidden, Term body);
  static Term rename(ChannelMap map, Term body);
  static Term var(std::string name);

  const TermNode& node() const { return *node_; }

  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  friend Term make_term(TermNode);
  std::shared_ptr<const TermNode> node_;
};

struct Delta {
  friend bool operator==(const Delta&, const Delta&) = default;
};
struct Epsilon {
  friend bool operator==(const Epsilon&, const Epsilon&) = default;
};
struct Prefix {
  Action action;
  Term rest;
  friend bool operator==(const Prefix&, const Prefix&) = default;
};
struct Alt {
  std::vector<Term> options;
  friend bool operator==(const Alt&, const Alt&) = default;
};
struct Par {
  Term left;
  Term right;
  friend bool operator==(const Par&, const Par&) = default;
};
struct Encap {
  ActionSet blocked;
  Term body;
  friend bool operator==(const Encap&, const Encap&) = default;
};
struct Hide {
  ActionSet hidden;
  Term body;
  friend bool operator==(const Hide&, const Hide&) = default;
};
struct Rename {
  ChannelMap map;
  Term body;
  friend bool operator==(const Rename&, const Rename&) = default;
};
struct Var {
  std::string name;
  friend bool operator==(const Var&, const Var&) = default;
};
/// An instance B_h(ξ) of one of the parameterised buffer equations: reads on
/// `input`, writes on its hatted twin. Contents are kept front-first: for a
/// queue the front is the newest item, for a stack it is the top, a bag keeps
/// them sorted and a wire holds at most one.
struct BufferProc {
  BufferKind kind;
  ChannelId input = 0;
  std::vector<DatumId> data;
  std::vector<DatumId> contents;
  friend bool operator==(const BufferProc&, const BufferProc&) = default;
};

struct TermNode {
  std::variant<Delta, Epsilon, Prefix, Alt, Par, Encap, Hide, Rename, Var, BufferProc> v;
};

Term make_term(TermNode node);

struct Equation {
  std::string name;
  Term body;
  friend bool operator==(const Equation&, const Equation&) = default;
};

/// Named recursion equations over a signature. Insertion order is kept so
/// printing is stable.
class RecursiveSpec {
 public:
  RecursiveSpec() = default;
  explicit RecursiveSpec(Signature sig) : signature_(std::move(sig)) {}

  const Signature& signature() const { return signature_; }
  Signature& signature() { return signature_; }

  void define(std::string name, Term body);
  const Term* find(std::string_view name) const;
  /// Throws Error for an unbound name.
  const Term& body(std::string_view name) const;
  std::optional<std::size_t> index_of(std::string_view name) const;
  const std::vector<Equation>& equations() const { return equations_; }

  friend bool operator==(const RecursiveSpec& a, const RecursiveSpec& b) {
    return a.signature_ == b.signature_ && a.equations_ == b.equations_;
  }

 private:
  Signature signature_;
  std::vector<Equation> equations_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Variables occurring in `root` (and transitively in the equations it
/// reaches) that have no equation.
std::vector<std::string> unbound_variables(const RecursiveSpec& spec, const Term& root);

/// Returns a variable lying on a cycle of unguarded references, if any. A
/// reference is guarded when it sits beneath an action prefix.
std::optional<std::string> find_unguarded_variable(const RecursiveSpec& spec);

/// Syntactic alphabet (non-tau actions). Over-approximates the behavioural
/// alphabet: every prefix reachable through the equations counts, parallel
/// composition adds all γ-merges of its operands' alphabets, and encapsulation
/// and hiding remove their sets. Throws Error on unbound variables.
std::set<Action> alphabet(const RecursiveSpec& spec, const Term& root);

struct SimpleVerdict {
  bool simple = true;
  std::optional<ChannelId> channel;
  std::optional<Action> send;
  std::optional<Action> receive;
};

/// A process is simple when no channel is used both for sending and for
/// receiving in its alphabet.
SimpleVerdict is_simple(const RecursiveSpec& spec, const Term& root);

enum class Direction : std::uint8_t { input, output };

/// Input/output classification of the channels a simple process uses.
/// Throws Error for non-simple processes.
std::map<ChannelId, Direction> channel_direction(const RecursiveSpec& spec, const Term& root);

/// Compact human-readable rendering for diagnostics (not the DSL printer).
std::string describe(const Term& t, const Signature& sig);

}  // namespace desync
