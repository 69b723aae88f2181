// desync: closed-loop construction and desynchronisability checks.
//
// Exit codes: 0 the checked property holds, 1 it fails, 2 a state space hit
// the cap before an answer was reached, 3 usage or input error.

#include <openssl/evp.h>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "desync/aut.hpp"
#include "desync/closedloop.hpp"
#include "desync/conditions.hpp"
#include "desync/dsl.hpp"
#include "desync/report.hpp"

using namespace desync;
using nlohmann::json;

namespace {

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kTruncated = 2;
constexpr int kUsage = 3;

struct Options {
  std::string spec_path;
  std::string method;
  std::string buffer;
  std::string capacity;
  std::string relation = "branching";
  std::size_t state_cap = kDefaultStateCap;
  bool strict_cycles = false;
  bool direct = false;
  std::string format = "text";
  std::string process;
  std::string out_path;
  std::string lhs_path, rhs_path;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

class Clock {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string join(const std::vector<std::string>& v, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

struct Context {
  const Options& opt;
  const CLI::App* sub;
  RunReport report;
  std::ostringstream text;
  Clock clock;

  bool given(const char* flag) const { return sub->count(flag) > 0; }

  // File defaults, overridden by flags that were actually given.
  LoopConfig loop_config(const SpecFile& file) const {
    LoopConfig cfg = file.config.apply(LoopConfig{});
    if (given("--method")) cfg.method = *parse_method(opt.method);
    if (given("--buffer")) cfg.buffer.discipline = *parse_buffer_discipline(opt.buffer);
    if (given("--capacity")) {
      if (opt.capacity == "unbounded") {
        cfg.buffer.capacity.reset();
      } else {
        cfg.buffer.capacity = std::stoul(opt.capacity);
      }
    }
    if (given("--state-cap")) cfg.state_cap = opt.state_cap;
    return cfg;
  }

  SpecFile load_spec() {
    std::string text_in = read_file(opt.spec_path);
    report.inputs.push_back(opt.spec_path);
    report.input_digest = sha256_hex(text_in);
    SpecFile file = parse_spec(text_in);
    for (const auto& w : file.warnings) report.warnings.push_back(w);
    return file;
  }

  void time(const char* what, double ms) { report.timings[what] = ms; }
};

void require_roles(const SpecFile& file, bool requirement = false) {
  if (file.plants.empty()) throw Error("specification declares no plant");
  if (!file.supervisor) throw Error("specification declares no supervisor");
  if (requirement && !file.requirement) throw Error("specification declares no requirement");
}

void describe_verdict(std::ostream& os, const EquivVerdict& v, const char* lhs, const char* rhs) {
  os << to_string(v.relation) << " " << lhs << " vs " << rhs << ": " << (v.holds ? "holds" : "fails") << "\n";
  if (v.witness) {
    const auto& w = *v.witness;
    os << "  witness: " << (w.side == Side::lhs ? lhs : rhs) << " can do";
    if (v.relation == Relation::weak_trace)
      os << " trace <" << join(w.trace, " ") << ">";
    else
      os << " " << w.label << " from its initial state";
    os << " which the other cannot match\n";
  }
}

void describe_deadlocks(std::ostream& os, const DeadlockReport& d) {
  os << "deadlocks: " << d.deadlocks.size() << (d.partial ? " (partial scan)" : "") << "\n";
  for (std::size_t i = 0; i < d.deadlocks.size() && i < 3; ++i)
    os << "  state " << d.deadlocks[i].state << " after <" << join(d.deadlocks[i].trace) << ">\n";
}

int cmd_check(Context& ctx) {
  SpecFile file = ctx.load_spec();
  LoopConfig cfg = ctx.loop_config(file);
  auto rel = parse_relation(ctx.opt.relation);
  ctx.report.config = to_json(cfg);
  ctx.report.config["relation"] = to_string(*rel);
  const auto& spec = file.spec;

  if (cfg.method == Method::sync) {
    require_roles(file, true);
    auto v = verify_supervisor(spec, file.plant_term(), file.supervisor_term(), file.requirement_term(), cfg.state_cap);
    ctx.report.results["supervisor"] = to_json(v);
    describe_verdict(ctx.text, v, "sync loop", "requirement");
    return v.holds ? kHolds : kFails;
  }

  require_roles(file);
  Term plant = file.plant_term(), sup = file.supervisor_term();
  Clock t;
  Lts sync = generate_lts(spec, sync_closed_loop(spec, plant, sup, cfg.state_cap), cfg.state_cap);
  ctx.report.results["sync"] = lts_stats(sync);
  if (sync.truncated) {
    ctx.text << "synchronous loop exceeds the state cap " << cfg.state_cap << "\n";
    return kTruncated;
  }
  AsyncLoop loop = async_closed_loop(spec, plant, sup, cfg);
  for (const auto& w : loop.partition.warnings) ctx.report.warnings.push_back(w);
  Lts async = generate_lts(spec, loop.term, cfg.state_cap);
  ctx.time("generate_ms", t.ms());
  ctx.report.results["async"] = lts_stats(async);
  ctx.text << "sync loop: " << sync.num_states << " states; " << to_string(cfg.method) << " loop: "
           << async.num_states << " states" << (async.truncated ? " (truncated)" : "") << "\n";
  DeadlockReport dl = find_deadlocks(async);
  ctx.report.results["deadlocks"] = to_json(dl);
  describe_deadlocks(ctx.text, dl);
  if (async.truncated) {
    ctx.text << "asynchronous loop exceeds the state cap " << cfg.state_cap << "\n";
    return kTruncated;
  }
  Clock te;
  EquivVerdict v = check_equivalence(*rel, sync, async, cfg.state_cap);
  ctx.time("equivalence_ms", te.ms());
  ctx.report.results["equivalence"] = to_json(v);
  describe_verdict(ctx.text, v, "sync", "async");
  return v.holds ? kHolds : kFails;
}

int cmd_conditions(Context& ctx) {
  SpecFile file = ctx.load_spec();
  require_roles(file);
  LoopConfig cfg = ctx.loop_config(file);
  if (cfg.method == Method::sync) cfg.method = Method::m1;
  ReportOptions ro;
  ro.strict_cycles = ctx.opt.strict_cycles;
  ro.cap = cfg.state_cap;
  ro.direct_check = ctx.opt.direct;
  ro.direct_config = cfg;
  ctx.report.config = to_json(cfg);
  ctx.report.config["strict_cycles"] = ro.strict_cycles;
  ctx.report.config["direct"] = ro.direct_check;

  std::vector<NamedProcess> plants;
  for (const auto& p : file.plants) plants.push_back({p, Term::var(p)});
  NamedProcess sup{*file.supervisor, file.supervisor_term()};
  ConditionReport r = desynchronisability_report(file.spec, plants, sup, ro);
  ctx.report.results["conditions"] = to_json(r, file.signature());

  auto& os = ctx.text;
  os << "validity: plant " << r.plant_validity.explain(file.signature()) << "; supervisor "
     << r.supervisor_validity.explain(file.signature()) << "\n";
  os << "well-posed: " << (r.well_posed.holds ? "holds" : "fails");
  if (const auto& w = r.well_posed.witness)
    os << " (" << to_string(w->role) << " sends " << w->unmatched << " after <" << join(w->path) << ">)";
  os << "\nno self loops: " << (r.self_loops.holds ? "holds" : "fails");
  for (const auto& s : r.self_loops.offenders) os << "\n  " << s.process << " state " << s.state << " " << s.label;
  os << "\ndiamond: " << (r.diamond ? (r.diamond->holds ? "holds" : "fails") : "not checked");
  if (r.diamond && r.diamond->witness) {
    const auto& w = *r.diamond->witness;
    os << " (state " << w.state << " after <" << join(w.access) << ">: " << w.a << " and " << w.b << " do not commute)";
  }
  os << "\ncycle condition: " << (r.cycle ? (r.cycle->holds ? "holds" : "fails") : "not checked");
  if (r.cycle && r.cycle->witness)
    os << " (cycle <" << join(r.cycle->witness->labels) << "> avoids plant " << to_string(r.cycle->witness->empty_side)
       << ")";
  os << "\n";
  if (r.direct) {
    os << "direct " << to_string(r.direct->config.method) << " check: " << r.direct->states << " states"
       << (r.direct->truncated ? " (truncated)" : "") << ", " << r.direct->deadlocks.deadlocks.size() << " deadlocks";
    if (r.direct->branching) os << ", branching " << (r.direct->branching->holds ? "holds" : "fails");
    os << "\n";
  }
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  os << "all conditions " << (r.all_hold() ? "hold" : "do not hold") << "\n";
  return r.all_hold() ? kHolds : kFails;
}

int cmd_lts(Context& ctx) {
  SpecFile file = ctx.load_spec();
  LoopConfig cfg = ctx.loop_config(file);
  const std::string& name = ctx.opt.process;
  const auto& spec = file.spec;
  Term root;
  if (name == "@plant") {
    root = file.plant_term();
  } else if (name == "@supervisor") {
    root = file.supervisor_term();
  } else if (name == "@requirement") {
    root = file.requirement_term();
  } else if (name == "@sync") {
    require_roles(file);
    root = sync_closed_loop(spec, file.plant_term(), file.supervisor_term(), cfg.state_cap);
  } else if (name == "@async") {
    require_roles(file);
    if (cfg.method == Method::sync) throw Error("@async needs one of the methods m1..m4");
    root = async_closed_loop(spec, file.plant_term(), file.supervisor_term(), cfg).term;
  } else if (name == "@wired") {
    require_roles(file);
    if (cfg.method == Method::sync) cfg.method = Method::m1;
    root = async_closed_loop(spec, file.plant_term(), file.supervisor_term(), cfg).wired;
  } else {
    if (!spec.find(name)) throw Error("no process named '" + name + "'");
    root = Term::var(name);
  }
  ctx.report.config = to_json(cfg);
  ctx.report.config["process"] = name;
  Lts lts = generate_lts(spec, root, cfg.state_cap);
  ctx.report.results["lts"] = lts_stats(lts);
  if (lts.truncated) {
    ctx.text << name << ": state space exceeds the cap " << cfg.state_cap << "\n";
    return kTruncated;
  }
  std::string aut = export_aut(lts);
  if (ctx.opt.out_path.empty() || ctx.opt.out_path == "-") {
    if (ctx.opt.format == "text") ctx.text << aut;
  } else {
    std::ofstream out(ctx.opt.out_path, std::ios::binary);
    if (!out) throw Error("cannot write '" + ctx.opt.out_path + "'");
    out << aut;
    ctx.text << name << ": " << lts.num_states << " states, " << lts.transitions.size() << " transitions written to "
             << ctx.opt.out_path << "\n";
  }
  return kHolds;
}

int cmd_compare(Context& ctx) {
  std::string a = read_file(ctx.opt.lhs_path), b = read_file(ctx.opt.rhs_path);
  ctx.report.inputs = {ctx.opt.lhs_path, ctx.opt.rhs_path};
  ctx.report.input_digest = sha256_hex(a + b);
  auto rel = parse_relation(ctx.opt.relation);
  ctx.report.config = {{"relation", to_string(*rel)}, {"state_cap", ctx.opt.state_cap}};
  Lts l = import_aut(a), r = import_aut(b);
  EquivVerdict v = check_equivalence(*rel, l, r, ctx.opt.state_cap);
  ctx.report.results["equivalence"] = to_json(v);
  describe_verdict(ctx.text, v, "lhs", "rhs");
  return v.holds ? kHolds : kFails;
}

int cmd_deadlock(Context& ctx) {
  SpecFile file = ctx.load_spec();
  require_roles(file);
  LoopConfig cfg = ctx.loop_config(file);
  ctx.report.config = to_json(cfg);
  const auto& spec = file.spec;
  Term root = cfg.method == Method::sync
                  ? sync_closed_loop(spec, file.plant_term(), file.supervisor_term(), cfg.state_cap)
                  : async_closed_loop(spec, file.plant_term(), file.supervisor_term(), cfg).wired;
  Lts lts = generate_lts(spec, root, cfg.state_cap);
  DeadlockReport d = find_deadlocks(lts);
  ctx.report.results["lts"] = lts_stats(lts);
  ctx.report.results["deadlocks"] = to_json(d);
  ctx.text << (cfg.method == Method::sync ? "sync" : "buffered (before hiding)") << " loop: " << lts.num_states
           << " states\n";
  describe_deadlocks(ctx.text, d);
  if (!d.deadlocks.empty()) return kFails;
  return lts.truncated ? kTruncated : kHolds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop construction and desynchronisability checks for plant/supervisor models"};
  app.require_subcommand(1);
  Options opt;

  auto method_check = CLI::IsMember({"sync", "m1", "m2", "m3", "m4"});
  auto buffer_check = CLI::IsMember({"queue", "stack", "wire", "bag"});
  auto relation_check = CLI::IsMember({"strong", "branching", "weak-trace"});
  auto capacity_check = CLI::Validator(
      [](std::string& s) -> std::string {
        if (s == "unbounded") return {};
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 9 || std::stoul(s) == 0)
          return "capacity must be a positive number or 'unbounded'";
        return {};
      },
      "N|unbounded");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--state-cap", opt.state_cap, "Maximum number of states to explore")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 31));
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "structured"}));
  };
  auto loop_flags = [&](CLI::App* sub) {
    sub->add_option("--method", opt.method, "Construction method")->check(method_check);
    sub->add_option("--buffer", opt.buffer, "Buffer discipline")->check(buffer_check);
    sub->add_option("--capacity", opt.capacity, "Buffer capacity")->check(capacity_check);
  };

  auto* check = app.add_subcommand("check", "Compare the synchronous loop with a buffered loop");
  check->add_option("spec", opt.spec_path, "Specification file")->required();
  loop_flags(check);
  check->add_option("--relation", opt.relation, "Equivalence to decide")->check(relation_check);
  common(check);

  auto* cond = app.add_subcommand("conditions", "Check the sufficient desynchronisability conditions");
  cond->add_option("spec", opt.spec_path, "Specification file")->required();
  cond->add_flag("--strict-cycles", opt.strict_cycles, "Check every reachable cycle, not only initial ones");
  cond->add_flag("--direct", opt.direct, "Also build the buffered loop and compare it");
  loop_flags(cond);
  common(cond);

  auto* lts = app.add_subcommand("lts", "Export the LTS of a process as .aut");
  lts->add_option("spec", opt.spec_path, "Specification file")->required();
  lts->add_option("process", opt.process,
                  "Process name, or @plant, @supervisor, @requirement, @sync, @async, @wired")
      ->required();
  lts->add_option("-o,--output", opt.out_path, "Output file (default: stdout)");
  loop_flags(lts);
  common(lts);

  auto* compare = app.add_subcommand("compare", "Compare two .aut files");
  compare->add_option("lhs", opt.lhs_path, "Left .aut file")->required();
  compare->add_option("rhs", opt.rhs_path, "Right .aut file")->required();
  compare->add_option("--relation", opt.relation, "Equivalence to decide")->check(relation_check);
  common(compare);

  auto* deadlock = app.add_subcommand("deadlock", "Search a closed loop for deadlocks");
  deadlock->add_option("spec", opt.spec_path, "Specification file")->required();
  loop_flags(deadlock);
  common(deadlock);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  Context ctx{opt, sub, {}, {}, {}};
  ctx.report.command = sub->get_name();
  int code = kUsage;
  try {
    if (sub == check) code = cmd_check(ctx);
    else if (sub == cond) code = cmd_conditions(ctx);
    else if (sub == lts) code = cmd_lts(ctx);
    else if (sub == compare) code = cmd_compare(ctx);
    else code = cmd_deadlock(ctx);
  } catch (const TruncationError& e) {
    ctx.text << "truncated: " << e.what() << "\n";
    ctx.report.results["error"] = e.what();
    code = kTruncated;
  } catch (const std::exception& e) {
    ctx.report.results["error"] = e.what();
    ctx.report.exit_code = kUsage;
    ctx.report.timings["wall_clock_ms"] = ctx.clock.ms();
    if (opt.format == "structured")
      std::cout << ctx.report.to_json().dump(2) << "\n";
    else
      std::cerr << "desync: " << e.what() << "\n";
    return kUsage;
  }
  ctx.report.exit_code = code;
  ctx.report.timings["wall_clock_ms"] = ctx.clock.ms();
  if (opt.format == "structured") {
    std::cout << ctx.report.to_json().dump(2) << "\n";
  } else {
    for (const auto& w : ctx.report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << ctx.text.str();
  }
  return code;
}
