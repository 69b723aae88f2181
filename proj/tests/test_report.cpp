#include "doctest.h"

#include "desync/closedloop.hpp"
#include "desync/conditions.hpp"
#include "desync/report.hpp"
#include "suites.hpp"

using namespace desync;

TEST_CASE("condition report serialisation") {
  auto f = suites::load_corpus("cond1_example");
  std::vector<NamedProcess> plants{{"P", Term::var("P")}};
  auto r = desynchronisability_report(f.spec, plants, {"S", f.supervisor_term()});
  auto j = to_json(r, f.signature());
  CHECK(j["well_posed"]["holds"] == false);
  CHECK(j["well_posed"]["witness"]["unmatched"] == "k!b");
  CHECK(j["all_hold"] == false);
  CHECK(j["plant_validity"]["valid"] == true);
  CHECK(j["loop"]["states"] == 2);
  CHECK(j.dump() == to_json(r, f.signature()).dump());
}

TEST_CASE("verdict and configuration serialisation") {
  LoopConfig cfg;
  auto c = to_json(cfg);
  CHECK(c["method"] == "m1");
  CHECK(c["buffer"] == "queue");
  CHECK(c["capacity"] == "unbounded");
  CHECK(c["state_cap"] == kDefaultStateCap);

  EquivVerdict v;
  v.relation = Relation::weak_trace;
  v.witness = EquivWitness{Side::rhs, 0, 0, "", {"a", "b"}};
  auto j = to_json(v);
  CHECK(j["relation"] == "weak-trace");
  CHECK(j["witness"]["side"] == "rhs");
  CHECK(j["witness"]["trace"].size() == 2);

  DeadlockReport d;
  for (StateId s = 0; s < 30; ++s) d.deadlocks.push_back({s, {}, {}});
  auto dj = to_json(d);
  CHECK(dj["count"] == 30);
  CHECK(dj["deadlocks"].size() == kReportedDeadlocks);
}

TEST_CASE("run report envelope") {
  RunReport r;
  r.command = "check";
  r.exit_code = 2;
  auto j = r.to_json();
  CHECK(j["tool"] == "desync");
  CHECK(j["version"] == kToolVersion);
  CHECK(j["exit_code"] == 2);
  CHECK(j.contains("timings"));
}
