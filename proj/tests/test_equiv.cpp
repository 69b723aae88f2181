#include "doctest.h"

#include <random>

#include "desync/aut.hpp"
#include "desync/closedloop.hpp"
#include "desync/dsl.hpp"
#include "desync/equiv.hpp"
#include "desync/semantics.hpp"
#include "oracles.hpp"
#include "suites.hpp"
#include "testing.hpp"

using namespace desync;

namespace {

Lts proc(const char* text, const char* name) { return testing::lts_of(parse_spec(text), name); }

const char* kPair = "chan a, b, c; proc L = a!.(b!.delta + c!.delta); proc R = a!.b!.delta + a!.c!.delta;"
                    "proc T = a!.tau.b!.delta; proc U = a!.b!.delta;";

Lts async_of(const SpecFile& f, Method m) {
  LoopConfig cfg;
  cfg.method = m;
  return generate_lts(f.spec, async_closed_loop(f.spec, f.plant_term(), f.supervisor_term(), cfg).term);
}

}  // namespace

TEST_CASE("relation names") {
  CHECK(parse_relation("weak-trace") == Relation::weak_trace);
  CHECK(parse_relation("branching") == Relation::branching);
  CHECK(parse_relation("strong") == Relation::strong);
  CHECK_FALSE(parse_relation("weak"));
  CHECK(to_string(Relation::weak_trace) == "weak-trace");
}

TEST_CASE("an LTS is equivalent to itself") {
  auto f = suites::load_corpus("pusherlift");
  Lts s = generate_lts(f.spec, f.supervisor_term());
  for (Relation r : {Relation::strong, Relation::branching, Relation::weak_trace})
    CHECK(check_equivalence(r, s, s).holds);
}

TEST_CASE("branching early versus late") {
  Lts l = proc(kPair, "L"), r = proc(kPair, "R");
  auto v = strong_bisim(l, r);
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness);
  CHECK(v.witness->label == "a!unit");
  CHECK_FALSE(branching_bisim(l, r).holds);
  CHECK(weak_trace_equiv(l, r).holds);
  CHECK(oracle::strong_bisimilar(l, r) == false);
}

TEST_CASE("inert silent steps") {
  Lts t = proc(kPair, "T"), u = proc(kPair, "U");
  CHECK_FALSE(strong_bisim(t, u).holds);
  CHECK(branching_bisim(t, u).holds);
  CHECK(weak_trace_equiv(t, u).holds);
}

TEST_CASE("termination is observable") {
  auto f = parse_spec("chan a; proc X = a!; proc Y = a!.delta;");
  Lts x = testing::lts_of(f, "X"), y = testing::lts_of(f, "Y");
  auto s = strong_bisim(x, y);
  CHECK_FALSE(s.holds);
  auto w = weak_trace_equiv(x, y);
  CHECK_FALSE(w.holds);
  REQUIRE(w.witness);
  CHECK(w.witness->side == Side::lhs);
  CHECK(w.witness->trace == std::vector<std::string>{"a!unit", std::string(kTerminationLabel)});
}

TEST_CASE("weak-trace witness is a shortest distinguishing trace") {
  auto f = parse_spec("chan a, b, c; proc X = a!.b!.c!.X; proc Y = a!.b!.(c!.Y + a!.delta);");
  auto v = weak_trace_equiv(testing::lts_of(f, "X"), testing::lts_of(f, "Y"));
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness);
  CHECK(v.witness->side == Side::rhs);
  CHECK(v.witness->trace == std::vector<std::string>{"a!unit", "b!unit", "a!unit"});
}

TEST_CASE("weak-trace decision gives up beyond its budget") {
  auto f = suites::load_corpus("pusherlift");
  Lts s = generate_lts(f.spec, f.supervisor_term());
  CHECK_THROWS_AS(weak_trace_equiv(s, s, 3), TruncationError);
}

TEST_CASE("deciders refuse truncated input") {
  auto f = parse_spec("chan k; proc Q = k!.par(Q, Q);");
  Lts q = testing::lts_of(f, "Q", 10);
  CHECK_THROWS_AS(strong_bisim(q, q), TruncationError);
  CHECK_THROWS_AS(branching_bisim(q, q), TruncationError);
  CHECK_THROWS_AS(minimize(q, Relation::strong), TruncationError);
}

TEST_CASE("deadlock search") {
  auto tm = suites::load_corpus("twomachines");
  Lts loop = generate_lts(tm.spec, sync_closed_loop(tm.spec, tm.plant_term(), tm.supervisor_term()));
  CHECK(find_deadlocks(loop).deadlocks.empty());

  Lts d = generate_lts(tm.spec, Term::delta());
  auto r = find_deadlocks(d);
  REQUIRE(r.deadlocks.size() == 1);
  CHECK(r.deadlocks[0].state == d.initial);
  CHECK(r.deadlocks[0].trace.empty());

  CHECK(find_deadlocks(generate_lts(tm.spec, Term::epsilon())).deadlocks.empty());
}

TEST_CASE("minimisation") {
  std::mt19937 rng(5);
  const std::vector<std::string> labels{"a", "b"};
  for (int i = 0; i < 100; ++i) {
    Lts l = oracle::random_lts(rng, 20, labels, 0.3);
    for (Relation r : {Relation::strong, Relation::branching, Relation::weak_trace}) {
      Lts m = minimize(l, r);
      CHECK(check_equivalence(r, l, m).holds);
      Lts mm = minimize(m, r);
      CHECK(mm.num_states == m.num_states);
      CHECK(identical(mm, m));
    }
  }
  Lts u = proc(kPair, "U");
  CHECK(minimize(u, Relation::strong).num_states == u.num_states);
}

TEST_CASE("partition block numbering") {
  Lts t = proc(kPair, "T");
  auto strong = strong_partition(t);
  auto branching = branching_partition(t);
  CHECK(strong.size() == t.num_states);
  CHECK(strong[0] == 0);
  CHECK(branching[0] == 0);
  std::set<std::uint32_t> sb(strong.begin(), strong.end()), bb(branching.begin(), branching.end());
  CHECK(sb.size() == t.num_states);
  CHECK(bb.size() == t.num_states - 1);
}

TEST_CASE("disjoint union") {
  Lts t = proc(kPair, "T"), u = proc(kPair, "U");
  Lts both = disjoint_union(t, u);
  CHECK(both.num_states == t.num_states + u.num_states);
  CHECK(both.transitions.size() == t.transitions.size() + u.transitions.size());
  CHECK(both.initial == t.initial);

  Lts self = disjoint_union(t, t);
  std::size_t upper = 0;
  for (const auto& tr : self.transitions)
    if (tr.source >= t.num_states) ++upper;
  CHECK(upper == t.transitions.size());
}

TEST_CASE("modified pusher-lift under the supervisor-side methods") {
  auto f = suites::load_corpus("pusherlift_noselfloops");
  Lts s = generate_lts(f.spec, sync_closed_loop(f.spec, f.plant_term(), f.supervisor_term()));
  Lts m2 = async_of(f, Method::m2);
  CHECK_FALSE(branching_bisim(s, m2).holds);
  Lts m4 = async_of(f, Method::m4);
  auto w = weak_trace_equiv(s, m4);
  CHECK_FALSE(w.holds);
  REQUIRE(w.witness);
  const Lts& yes = w.witness->side == Side::lhs ? s : m4;
  const Lts& no = w.witness->side == Side::lhs ? m4 : s;
  CHECK(oracle::can_perform(yes, w.witness->trace));
  CHECK_FALSE(oracle::can_perform(no, w.witness->trace));
}
