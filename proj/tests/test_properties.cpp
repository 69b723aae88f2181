#include "doctest.h"

#include "suites.hpp"

namespace {

void require_all(const suites::Result& r) {
  for (const auto& f : r.failures) MESSAGE(f);
  CHECK(r.total > 0);
  CHECK(r.passed == r.total);
}

}  // namespace

TEST_CASE("bisimulation deciders agree with the fixpoint oracle") {
  require_all(suites::bisimulation(101, 200, 50));
}

TEST_CASE("weak-trace decider agrees with trace enumeration") {
  require_all(suites::weak_trace(202, 200, 30, 8));
}

TEST_CASE("buffer laws") { require_all(suites::buffer_laws(303, 40)); }

TEST_CASE("DSL and aut round trips") { require_all(suites::round_trips(404, 100)); }

TEST_CASE("all methods share the pre-hiding loop") { require_all(suites::shared_wiring(10000)); }
