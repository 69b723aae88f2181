#include "desync/term.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace desync {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

// ---------------------------------------------------------------------------
// Signature

Signature::Signature() {
  data_.push_back("unit");
  datum_index_.emplace("unit", kUnit);
}

DatumId Signature::add_datum(const std::string& name) {
  if (datum_index_.count(name) != 0) throw Error("duplicate datum '" + name + "'");
  if (data_.size() >= kMaxData) throw Error("too many data elements");
  auto id = static_cast<DatumId>(data_.size());
  data_.push_back(name);
  datum_index_.emplace(name, id);
  return id;
}

ChannelId Signature::add_channel(const std::string& name, std::vector<DatumId> data) {
  if (name.empty() || name.find('\'') != std::string::npos)
    throw Error("invalid channel name '" + name + "'");
  if (channel_index_.count(name) != 0) throw Error("duplicate channel '" + name + "'");
  if (channels_.size() >= kMaxChannels) throw Error("too many channels");
  for (DatumId d : data)
    if (d >= data_.size()) throw Error("channel '" + name + "' uses an undeclared datum");
  bool untyped = data.empty();
  if (untyped) data.push_back(kUnit);
  std::sort(data.begin(), data.end());
  data.erase(std::unique(data.begin(), data.end()), data.end());
  auto id = static_cast<ChannelId>(channels_.size() * 2);
  channels_.push_back({name, std::move(data), untyped});
  channel_index_.emplace(name, id);
  return id;
}

std::optional<DatumId> Signature::find_datum(std::string_view name) const {
  auto it = datum_index_.find(name);
  if (it == datum_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ChannelId> Signature::find_channel(std::string_view name) const {
  bool hatted = !name.empty() && name.back() == '\'';
  if (hatted) name.remove_suffix(1);
  auto it = channel_index_.find(name);
  if (it == channel_index_.end()) return std::nullopt;
  return hatted ? it->second + 1 : it->second;
}

std::string Signature::channel_name(ChannelId c) const {
  const auto& info = channels_.at(c / 2);
  return is_hatted(c) ? info.name + "'" : info.name;
}

std::span<const DatumId> Signature::channel_data(ChannelId c) const {
  return channels_.at(c / 2).data;
}

bool Signature::carries(ChannelId c, DatumId d) const {
  auto data = channel_data(c);
  return std::binary_search(data.begin(), data.end(), d);
}

bool Signature::channel_declared_untyped(ChannelId c) const { return channels_.at(c / 2).untyped; }

std::vector<ChannelId> Signature::base_channels() const {
  std::vector<ChannelId> out;
  for (std::size_t i = 0; i < channels_.size(); ++i) out.push_back(static_cast<ChannelId>(2 * i));
  return out;
}

std::vector<DatumId> Signature::user_data() const {
  std::vector<DatumId> out;
  for (std::size_t i = 1; i < data_.size(); ++i) out.push_back(static_cast<DatumId>(i));
  return out;
}

bool operator==(const Signature& a, const Signature& b) {
  if (a.data_ != b.data_ || a.channels_.size() != b.channels_.size()) return false;
  for (std::size_t i = 0; i < a.channels_.size(); ++i) {
    const auto& x = a.channels_[i];
    const auto& y = b.channels_[i];
    if (x.name != y.name || x.data != y.data || x.untyped != y.untyped) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Actions

std::string to_string(const Action& a, const Signature& sig) {
  if (a.is_tau()) return "tau";
  std::string out = sig.channel_name(a.channel);
  switch (a.polarity) {
    case Polarity::send: out += "!"; break;
    case Polarity::receive: out += "?"; break;
    case Polarity::comm: out += "?!"; break;
    case Polarity::tau: break;
  }
  out += sig.datum_name(a.datum);
  return out;
}

std::optional<Action> communication_merge(const Action& a, const Action& b) {
  if (a.channel != b.channel || a.datum != b.datum) return std::nullopt;
  bool matched = (a.polarity == Polarity::send && b.polarity == Polarity::receive) ||
                 (a.polarity == Polarity::receive && b.polarity == Polarity::send);
  if (!matched) return std::nullopt;
  return Action::comm(a.channel, a.datum);
}

ActionSet make_action_set(std::vector<Action> actions) {
  std::sort(actions.begin(), actions.end());
  actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
  return actions;
}

bool contains(const ActionSet& set, const Action& a) {
  return std::binary_search(set.begin(), set.end(), a);
}

ChannelMap make_channel_map(std::vector<std::pair<ChannelId, ChannelId>> entries) {
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].first == entries[i - 1].first)
      throw Error("channel map assigns two targets to one channel");
  return entries;
}

ChannelId apply(const ChannelMap& map, ChannelId c) {
  auto it = std::lower_bound(map.begin(), map.end(), std::make_pair(c, ChannelId{0}));
  if (it != map.end() && it->first == c) return it->second;
  return c;
}

Action apply(const ChannelMap& map, const Action& a) {
  if (a.is_tau()) return a;
  return {a.polarity, apply(map, a.channel), a.datum};
}

std::string to_string(BufferDiscipline d) {
  switch (d) {
    case BufferDiscipline::queue: return "queue";
    case BufferDiscipline::stack: return "stack";
    case BufferDiscipline::wire: return "wire";
    case BufferDiscipline::bag: return "bag";
  }
  return "?";
}

std::optional<BufferDiscipline> parse_buffer_discipline(std::string_view text) {
  if (text == "queue") return BufferDiscipline::queue;
  if (text == "stack") return BufferDiscipline::stack;
  if (text == "wire") return BufferDiscipline::wire;
  if (text == "bag") return BufferDiscipline::bag;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Terms

Term make_term(TermNode node) { return Term(std::make_shared<const TermNode>(std::move(node))); }

Term::Term() : node_(std::make_shared<const TermNode>(TermNode{Delta{}})) {}

Term Term::delta() { return make_term({Delta{}}); }
Term Term::epsilon() { return make_term({Epsilon{}}); }
Term Term::prefix(Action a, Term rest) { return make_term({Prefix{a, std::move(rest)}}); }

Term Term::alt(std::vector<Term> options) {
  if (options.empty()) return delta();
  if (options.size() == 1) return std::move(options.front());
  return make_term({Alt{std::move(options)}});
}

Term Term::alt(Term left, Term right) { return alt(std::vector<Term>{std::move(left), std::move(right)}); }
Term Term::par(Term left, Term right) { return make_term({Par{std::move(left), std::move(right)}}); }

Term Term::par(std::vector<Term> parts) {
  if (parts.empty()) return epsilon();
  Term acc = std::move(parts.back());
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = par(std::move(parts[i]), std::move(acc));
  return acc;
}

Term Term::encap(ActionSet blocked, Term body) {
  for (const auto& a : blocked)
    if (!a.is_send_or_receive()) throw Error("encapsulation sets may only contain send/receive actions");
  return make_term({Encap{make_action_set(std::move(blocked)), std::move(body)}});
}

Term Term::hide(ActionSet hidden, Term body) {
  for (const auto& a : hidden)
    if (a.polarity != Polarity::comm) throw Error("hiding sets may only contain communication actions");
  return make_term({Hide{make_action_set(std::move(hidden)), std::move(body)}});
}

Term Term::rename(ChannelMap map, Term body) {
  return make_term({Rename{make_channel_map(std::move(map)), std::move(body)}});
}

Term Term::var(std::string name) { return make_term({Var{std::move(name)}}); }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  return a.node_->v == b.node_->v;
}

// ---------------------------------------------------------------------------
// Recursive specifications

void RecursiveSpec::define(std::string name, Term body) {
  if (index_.count(name) != 0) throw Error("duplicate definition of '" + name + "'");
  index_.emplace(name, equations_.size());
  equations_.push_back({std::move(name), std::move(body)});
}

const Term* RecursiveSpec::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &equations_[it->second].body;
}

const Term& RecursiveSpec::body(std::string_view name) const {
  const Term* t = find(name);
  if (t == nullptr) throw Error("unbound recursion variable '" + std::string(name) + "'");
  return *t;
}

std::optional<std::size_t> RecursiveSpec::index_of(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Calls `on_var(name, guarded)` for every variable occurrence directly in `t`
// (without unfolding equations).
void for_each_var(const Term& t, bool guarded,
                  const std::function<void(const std::string&, bool)>& on_var) {
  std::visit(Overloaded{
                 [](const Delta&) {},
                 [](const Epsilon&) {},
                 [](const BufferProc&) {},
                 [&](const Prefix& p) { for_each_var(p.rest, true, on_var); },
                 [&](const Alt& a) {
                   for (const auto& o : a.options) for_each_var(o, guarded, on_var);
                 },
                 [&](const Par& p) {
                   for_each_var(p.left, guarded, on_var);
                   for_each_var(p.right, guarded, on_var);
                 },
                 [&](const Encap& e) { for_each_var(e.body, guarded, on_var); },
                 [&](const Hide& h) { for_each_var(h.body, guarded, on_var); },
                 [&](const Rename& r) { for_each_var(r.body, guarded, on_var); },
                 [&](const Var& v) { on_var(v.name, guarded); },
             },
             t.node().v);
}

}  // namespace

std::vector<std::string> unbound_variables(const RecursiveSpec& spec, const Term& root) {
  std::set<std::string> seen;
  std::set<std::string> missing;
  std::vector<const Term*> work{&root};
  while (!work.empty()) {
    const Term* t = work.back();
    work.pop_back();
    for_each_var(*t, false, [&](const std::string& name, bool) {
      if (!seen.insert(name).second) return;
      if (const Term* body = spec.find(name)) {
        work.push_back(body);
      } else {
        missing.insert(name);
      }
    });
  }
  return {missing.begin(), missing.end()};
}

std::optional<std::string> find_unguarded_variable(const RecursiveSpec& spec) {
  const auto& eqs = spec.equations();
  std::vector<std::vector<std::size_t>> edges(eqs.size());
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    for_each_var(eqs[i].body, false, [&](const std::string& name, bool guarded) {
      if (guarded) return;
      if (auto j = spec.index_of(name)) edges[i].push_back(*j);
    });
  }
  // Cycle detection on the unguarded-reference graph.
  enum : std::uint8_t { white, grey, black };
  std::vector<std::uint8_t> colour(eqs.size(), white);
  for (std::size_t start = 0; start < eqs.size(); ++start) {
    if (colour[start] != white) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
    colour[start] = grey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < edges[node].size()) {
        std::size_t succ = edges[node][next++];
        if (colour[succ] == grey) return eqs[succ].name;
        if (colour[succ] == white) {
          colour[succ] = grey;
          stack.emplace_back(succ, 0);
        }
      } else {
        colour[node] = black;
        stack.pop_back();
      }
    }
  }
  return std::nullopt;
}

namespace {

class AlphabetComputer {
 public:
  explicit AlphabetComputer(const RecursiveSpec& spec) : spec_(spec) {}

  std::set<Action> run(const Term& root) {
    auto missing = unbound_variables(spec_, root);
    if (!missing.empty()) throw Error("unbound recursion variable '" + missing.front() + "'");
    // Least fixpoint over the variable approximations.
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& name : reachable(root)) {
        auto next = eval(spec_.body(name));
        auto& cur = vars_[name];
        if (next.size() != cur.size()) {
          cur = std::move(next);
          changed = true;
        }
      }
    }
    return eval(root);
  }

 private:
  std::vector<std::string> reachable(const Term& root) {
    std::set<std::string> seen;
    std::vector<const Term*> work{&root};
    while (!work.empty()) {
      const Term* t = work.back();
      work.pop_back();
      for_each_var(*t, false, [&](const std::string& name, bool) {
        if (seen.insert(name).second) work.push_back(&spec_.body(name));
      });
    }
    return {seen.begin(), seen.end()};
  }

  std::set<Action> eval(const Term& t) {
    return std::visit(
        Overloaded{
            [](const Delta&) { return std::set<Action>{}; },
            [](const Epsilon&) { return std::set<Action>{}; },
            [&](const Prefix& p) {
              auto s = eval(p.rest);
              if (!p.action.is_tau()) s.insert(p.action);
              return s;
            },
            [&](const Alt& a) {
              std::set<Action> s;
              for (const auto& o : a.options) s.merge(eval(o));
              return s;
            },
            [&](const Par& p) {
              auto l = eval(p.left);
              auto r = eval(p.right);
              std::set<Action> s = l;
              s.insert(r.begin(), r.end());
              for (const auto& x : l)
                for (const auto& y : r)
                  if (auto m = communication_merge(x, y)) s.insert(*m);
              return s;
            },
            [&](const Encap& e) {
              std::set<Action> s;
              for (const auto& a : eval(e.body))
                if (!contains(e.blocked, a)) s.insert(a);
              return s;
            },
            [&](const Hide& h) {
              std::set<Action> s;
              for (const auto& a : eval(h.body))
                if (!contains(h.hidden, a)) s.insert(a);
              return s;
            },
            [&](const Rename& r) {
              std::set<Action> s;
              for (const auto& a : eval(r.body)) s.insert(apply(r.map, a));
              return s;
            },
            [&](const Var& v) { return vars_[v.name]; },
            [&](const BufferProc& b) {
              std::set<Action> s;
              for (DatumId d : b.data) {
                s.insert(Action::receive(b.input, d));
                s.insert(Action::send(b.input | 1u, d));
              }
              return s;
            },
        },
        t.node().v);
  }

  const RecursiveSpec& spec_;
  std::map<std::string, std::set<Action>> vars_;
};

}  // namespace

std::set<Action> alphabet(const RecursiveSpec& spec, const Term& root) {
  return AlphabetComputer(spec).run(root);
}

SimpleVerdict is_simple(const RecursiveSpec& spec, const Term& root) {
  std::map<ChannelId, Action> sends;
  std::map<ChannelId, Action> receives;
  for (const auto& a : alphabet(spec, root)) {
    if (a.polarity == Polarity::send) sends.emplace(a.channel, a);
    if (a.polarity == Polarity::receive) receives.emplace(a.channel, a);
  }
  for (const auto& [ch, s] : sends) {
    auto it = receives.find(ch);
    if (it != receives.end()) return {false, ch, s, it->second};
  }
  return {};
}

std::map<ChannelId, Direction> channel_direction(const RecursiveSpec& spec, const Term& root) {
  auto verdict = is_simple(spec, root);
  if (!verdict.simple)
    throw Error("process is not simple: channel '" + spec.signature().channel_name(*verdict.channel) +
                "' is used for both sending and receiving");
  std::map<ChannelId, Direction> out;
  for (const auto& a : alphabet(spec, root)) {
    if (a.polarity == Polarity::send) out[a.channel] = Direction::output;
    if (a.polarity == Polarity::receive) out[a.channel] = Direction::input;
  }
  return out;
}

std::string describe(const Term& t, const Signature& sig) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Delta&) { os << "delta"; },
                 [&](const Epsilon&) { os << "epsilon"; },
                 [&](const Prefix& p) { os << to_string(p.action, sig) << "." << describe(p.rest, sig); },
                 [&](const Alt& a) {
                   os << "(";
                   for (std::size_t i = 0; i < a.options.size(); ++i)
                     os << (i ? " + " : "") << describe(a.options[i], sig);
                   os << ")";
                 },
                 [&](const Par& p) { os << "par(" << describe(p.left, sig) << ", " << describe(p.right, sig) << ")"; },
                 [&](const Encap& e) { os << "encap({" << e.blocked.size() << " actions}, " << describe(e.body, sig) << ")"; },
                 [&](const Hide& h) { os << "hide({" << h.hidden.size() << " actions}, " << describe(h.body, sig) << ")"; },
                 [&](const Rename& r) { os << "rename({" << r.map.size() << " channels}, " << describe(r.body, sig) << ")"; },
                 [&](const Var& v) { os << v.name; },
                 [&](const BufferProc& b) {
                   os << to_string(b.kind.discipline) << "[" << sig.channel_name(b.input) << "](";
                   for (std::size_t i = 0; i < b.contents.size(); ++i)
                     os << (i ? "." : "") << sig.datum_name(b.contents[i]);
                   os << ")";
                 },
             },
             t.node().v);
  return os.str();
}

}  // namespace desync
