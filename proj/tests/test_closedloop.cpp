#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "desync/closedloop.hpp"
#include "desync/dsl.hpp"
#include "desync/equiv.hpp"
#include "desync/semantics.hpp"
#include "suites.hpp"
#include "testing.hpp"

using namespace desync;

namespace {

Lts sync_lts(const SpecFile& f, std::size_t cap = kDefaultStateCap) {
  return generate_lts(f.spec, sync_closed_loop(f.spec, f.plant_term(), f.supervisor_term()), cap);
}

Lts async_lts(const SpecFile& f, Method m, std::optional<std::size_t> capacity = std::nullopt,
              std::size_t cap = kDefaultStateCap) {
  LoopConfig cfg;
  cfg.method = m;
  cfg.buffer.capacity = capacity;
  cfg.state_cap = cap;
  return generate_lts(f.spec, async_closed_loop(f.spec, f.plant_term(), f.supervisor_term(), cfg).term, cap);
}

std::set<std::string> names(const std::set<ChannelId>& cs, const Signature& sig) {
  std::set<std::string> out;
  for (auto c : cs) out.insert(sig.channel_name(c));
  return out;
}

}  // namespace

TEST_CASE("two-machines synchronous loop mirrors the supervisor") {
  auto f = suites::load_corpus("twomachines");
  Lts loop = sync_lts(f);
  CHECK(loop.num_states == 6);
  Lts sup = to_communication_labels(generate_lts(f.spec, f.supervisor_term()));
  CHECK(strong_bisim(loop, sup).holds);
  CHECK(find_deadlocks(loop).deadlocks.empty());
}

TEST_CASE("cond-1 synchronous loop is a two-step cycle") {
  auto f = suites::load_corpus("cond1_example");
  Lts loop = sync_lts(f);
  CHECK(loop.num_states == 2);
  CHECK(testing::has_edge(loop, 0, "h?!a", 1));
  CHECK(testing::has_edge(loop, 1, "l?!c", 0));
  CHECK(loop.transitions.size() == 2);
  CHECK(find_deadlocks(loop).deadlocks.empty());
}

TEST_CASE("deadlocked parties give a single deadlocked state") {
  auto f = parse_spec("chan h; proc P = delta; proc S = delta; plant P; supervisor S;");
  Lts s = sync_lts(f);
  CHECK(s.num_states == 1);
  CHECK(find_deadlocks(s).deadlocks.size() == 1);
  for (Method m : {Method::m1, Method::m2, Method::m3, Method::m4}) {
    Lts a = async_lts(f, m);
    CHECK(a.num_states == 1);
    CHECK(find_deadlocks(a).deadlocks.size() == 1);
  }
}

TEST_CASE("channel partitions") {
  auto f = suites::load_corpus("twomachines");
  const auto& sig = f.signature();
  auto p = channel_partition(f.spec, f.plant_term(), f.supervisor_term());
  CHECK(names(p.plant_inputs, sig) == std::set<std::string>{"l1", "l2"});
  CHECK(names(p.plant_outputs, sig) == std::set<std::string>{"ul1", "ul2"});
  CHECK(p.one_sided.empty());
  CHECK(p.input_labels(sig) == std::set<std::string>{"l1?!unit", "l2?!unit"});

  auto c4 = suites::load_corpus("cond4_example");
  auto q = channel_partition(c4.spec, c4.plant_term(), c4.supervisor_term());
  CHECK(names(q.plant_inputs, c4.signature()) == std::set<std::string>{"h", "k"});
  CHECK(q.plant_outputs.empty());

  // Disjoint alphabets: each channel is one-sided and flagged.
  auto d = parse_spec("chan x, y; proc P = x?.P; proc S = y?.S; plant P; supervisor S;");
  auto r = channel_partition(d.spec, d.plant_term(), d.supervisor_term());
  CHECK(r.one_sided.size() == 2);
  CHECK_FALSE(r.warnings.empty());

  auto clash = parse_spec("chan x; proc P = x?.P; proc S = x?.S; plant P; supervisor S;");
  CHECK_THROWS_AS(channel_partition(clash.spec, clash.plant_term(), clash.supervisor_term()), Error);
}

TEST_CASE("buffered two-machines loop is finite and branching bisimilar under M1") {
  auto f = suites::load_corpus("twomachines");
  Lts s = sync_lts(f);
  Lts a = async_lts(f, Method::m1, std::nullopt, 100000);
  CHECK_FALSE(a.truncated);
  CHECK(branching_bisim(s, a).holds);
  CHECK(minimize(a, Relation::branching).num_states == 6);
}

TEST_CASE("figure-8 buffered loop deadlocks after six steps") {
  auto f = suites::load_corpus("fig8");
  LoopConfig cfg;
  auto loop = async_closed_loop(f.spec, f.plant_term(), f.supervisor_term(), cfg);
  Lts wired = generate_lts(f.spec, loop.wired);
  auto d = find_deadlocks(wired);
  REQUIRE_FALSE(d.deadlocks.empty());
  CHECK(d.deadlocks.front().trace ==
        std::vector<std::string>{"h1?!a1", "h3?!a3", "h2?!a2", "h2'?!a2", "h1'?!a1", "h3'?!a3"});
}

TEST_CASE("verify_supervisor") {
  auto f = suites::load_corpus("twomachines");
  CHECK(verify_supervisor(f.spec, f.plant_term(), f.supervisor_term(), f.requirement_term()).holds);
  CHECK_FALSE(verify_supervisor(f.spec, f.plant_term(), f.supervisor_term(), Term::delta()).holds);

  // The minimised loop, written back as a requirement.
  Lts min = minimize(sync_lts(f), Relation::strong);
  std::ostringstream text;
  text << suites::read_corpus("twomachines");
  for (StateId s = 0; s < min.num_states; ++s) {
    text << "proc R" << s << " = ";
    bool first = true;
    for (const auto& t : min.transitions)
      if (t.source == s) {
        text << (first ? "" : " + ") << min.labels[t.label].text << ".R" << t.target;
        first = false;
      }
    if (first) text << "delta";
    text << ";\n";
  }
  auto g = parse_spec(text.str());
  CHECK(verify_supervisor(g.spec, g.plant_term(), g.supervisor_term(), Term::var("R0")).holds);
}

TEST_CASE("async visible alphabet is within the synchronous alphabet") {
  for (const auto& name : {"twomachines", "fig8", "pusherlift", "pusherlift_noselfloops"}) {
    CAPTURE(name);
    auto f = suites::load_corpus(name);
    auto sync_alpha = sync_lts(f).alphabet();
    std::set<std::string> allowed(sync_alpha.begin(), sync_alpha.end());
    for (Method m : {Method::m1, Method::m2, Method::m3, Method::m4}) {
      Lts a = async_lts(f, m, std::nullopt, 20000);
      for (const auto& l : a.alphabet()) CHECK(allowed.count(l));
    }
  }
}

TEST_CASE("a one-sided channel surfaces in the buffered loop only") {
  auto f = suites::load_corpus("cond1_example");
  auto sync_alpha = sync_lts(f).alphabet();
  CHECK(sync_alpha == std::vector<std::string>{"h?!a", "l?!c"});
  Lts a = async_lts(f, Method::m2);
  auto alpha = a.alphabet();
  CHECK(std::find(alpha.begin(), alpha.end(), "k?!b") != alpha.end());
  for (const auto& l : alpha) CHECK((l == "k?!b" || l == "h?!a" || l == "l?!c"));
}

TEST_CASE("strict alternation with one-place queues is desynchronisable") {
  for (int n = 1; n <= 4; ++n) {
    CAPTURE(n);
    std::ostringstream text;
    for (int i = 0; i < n; ++i) text << "chan c" << i << ", r" << i << ";\n";
    text << "proc P = ";
    for (int i = 0; i < n; ++i) text << "c" << i << "?.r" << i << "!.";
    text << "P;\nproc S = ";
    for (int i = 0; i < n; ++i) text << "c" << i << "!.r" << i << "?.";
    text << "S;\nplant P;\nsupervisor S;\n";
    auto f = parse_spec(text.str());
    Lts s = sync_lts(f);
    CHECK(s.num_states == static_cast<std::size_t>(2 * n));
    Lts a = async_lts(f, Method::m1, 1);
    CHECK_FALSE(a.truncated);
    CHECK(branching_bisim(s, a).holds);
  }
}
