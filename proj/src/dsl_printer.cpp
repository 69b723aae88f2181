#include <sstream>

#include "desync/dsl.hpp"

namespace desync {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string action_text(const Action& a, const Signature& sig) {
  if (a.is_tau()) return "tau";
  std::string out = sig.channel_name(a.channel);
  out += a.polarity == Polarity::send ? "!" : a.polarity == Polarity::receive ? "?" : "?!";
  if (a.datum != Signature::kUnit) out += sig.datum_name(a.datum);
  return out;
}

bool is_alt(const Term& t) { return std::holds_alternative<Alt>(t.node().v); }

void print(std::ostream& os, const Term& t, const Signature& sig);

void print_wrapped(std::ostream& os, const Term& t, const Signature& sig) {
  if (is_alt(t)) {
    os << "(";
    print(os, t, sig);
    os << ")";
  } else {
    print(os, t, sig);
  }
}

void print_actions(std::ostream& os, const ActionSet& set, const Signature& sig) {
  os << "{";
  for (std::size_t i = 0; i < set.size(); ++i) os << (i ? ", " : "") << action_text(set[i], sig);
  os << "}";
}

void print(std::ostream& os, const Term& t, const Signature& sig) {
  std::visit(Overloaded{
                 [&](const Delta&) { os << "delta"; },
                 [&](const Epsilon&) { os << "epsilon"; },
                 [&](const Prefix& p) {
                   os << action_text(p.action, sig);
                   if (std::holds_alternative<Epsilon>(p.rest.node().v)) return;
                   os << ".";
                   print_wrapped(os, p.rest, sig);
                 },
                 [&](const Alt& a) {
                   for (std::size_t i = 0; i < a.options.size(); ++i) {
                     if (i) os << " + ";
                     print_wrapped(os, a.options[i], sig);
                   }
                 },
                 [&](const Par& p) {
                   os << "par(";
                   print(os, p.left, sig);
                   os << ", ";
                   print(os, p.right, sig);
                   os << ")";
                 },
                 [&](const Encap& e) {
                   os << "encap(";
                   print_actions(os, e.blocked, sig);
                   os << ", ";
                   print(os, e.body, sig);
                   os << ")";
                 },
                 [&](const Hide& h) {
                   os << "hide(";
                   print_actions(os, h.hidden, sig);
                   os << ", ";
                   print(os, h.body, sig);
                   os << ")";
                 },
                 [&](const Rename& r) {
                   os << "rename({";
                   for (std::size_t i = 0; i < r.map.size(); ++i)
                     os << (i ? ", " : "") << sig.channel_name(r.map[i].first) << " -> "
                        << sig.channel_name(r.map[i].second);
                   os << "}, ";
                   print(os, r.body, sig);
                   os << ")";
                 },
                 [&](const Var& v) { os << v.name; },
                 [&](const BufferProc&) { throw Error("buffer processes have no textual form"); },
             },
             t.node().v);
}

void print_list(std::ostream& os, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? ", " : "") << names[i];
}

}  // namespace

std::string print_term(const Term& t, const Signature& sig) {
  std::ostringstream os;
  print(os, t, sig);
  return os.str();
}

std::string print_spec(const SpecFile& file) {
  std::ostringstream os;
  const Signature& sig = file.signature();
  std::vector<std::string> data;
  for (DatumId d : sig.user_data()) data.push_back(sig.datum_name(d));
  if (!data.empty()) {
    os << "data ";
    print_list(os, data);
    os << ";\n";
  }
  for (ChannelId c : sig.base_channels()) {
    os << "chan " << sig.channel_name(c);
    if (!sig.channel_declared_untyped(c)) {
      os << " : ";
      std::vector<std::string> carried;
      for (DatumId d : sig.channel_data(c)) carried.push_back(sig.datum_name(d));
      print_list(os, carried);
    }
    os << ";\n";
  }
  if (!file.spec.equations().empty()) os << "\n";
  for (const auto& eq : file.spec.equations()) os << "proc " << eq.name << " = " << print_term(eq.body, sig) << ";\n";
  if (!file.plants.empty() || file.supervisor || file.requirement) os << "\n";
  if (!file.plants.empty()) {
    os << "plant ";
    print_list(os, file.plants);
    os << ";\n";
  }
  if (file.supervisor) os << "supervisor " << *file.supervisor << ";\n";
  if (file.requirement) os << "requirement " << *file.requirement << ";\n";
  const auto& cfg = file.config;
  if (!cfg.empty()) {
    std::vector<std::string> settings;
    if (cfg.method) settings.push_back("method = " + to_string(*cfg.method));
    if (cfg.buffer) settings.push_back("buffer = " + to_string(*cfg.buffer));
    if (cfg.capacity)
      settings.push_back("capacity = " + (*cfg.capacity ? std::to_string(**cfg.capacity) : std::string("unbounded")));
    if (cfg.state_cap) settings.push_back("cap = " + std::to_string(*cfg.state_cap));
    os << "config ";
    print_list(os, settings);
    os << ";\n";
  }
  return os.str();
}

}  // namespace desync
