#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "qhj/acceptance.hpp"
#include "qhj/report.hpp"

using namespace qhj;

TEST_CASE("check bounds", "[report]") {
  CHECK(make_check("s", 0, "a", "", 1e-9, 1e-8).pass);
  CHECK_FALSE(make_check("s", 0, "a", "", 1e-7, 1e-8).pass);
  CHECK(make_check("s", 0, "a", "", 2.0, 1.7, Check::Bound::AtLeast).pass);
  CHECK_FALSE(make_check("s", 0, "a", "", 1.0, 1.7, Check::Bound::AtLeast).pass);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(make_check("s", 0, "a", "", nan, 1.0).pass);
  CHECK_FALSE(make_check("s", 0, "a", "", nan, 1.0, Check::Bound::AtLeast).pass);
}

TEST_CASE("report status is the conjunction of checks", "[report]") {
  VerificationReport r;
  r.scenario = "x";
  CHECK(r.passed());
  r.add(make_check("x", 0, "a", "", 0.0, 1.0));
  CHECK(r.passed());
  r.add(make_check("x", 0, "b", "", 2.0, 1.0));
  CHECK_FALSE(r.passed());
  const auto j = to_json(r);
  CHECK(j["status"] == "fail");
  CHECK(j["schema_version"] == kReportSchemaVersion);
  CHECK(j["checks"].size() == 2);
}

TEST_CASE("timing lives outside the deterministic part", "[report]") {
  VerificationReport r;
  r.scenario = "x";
  Check t = make_check("x", 0, "wall", "", 0.25, 10.0);
  t.timing = true;
  r.add(t);
  r.runtimes["total"] = 0.5;
  const auto full = to_json(r);
  CHECK(full["checks"][0]["measured"] == "timing.wall");
  CHECK(full["timing"]["wall"] == 0.25);
  CHECK(full["timing"].contains("timestamp"));

  VerificationReport other = r;
  other.checks[0].measured = 0.75;
  other.runtimes["total"] = 9.0;
  CHECK(deterministic_dump(r) == deterministic_dump(other));
  CHECK(deterministic_dump(r).find("timestamp") == std::string::npos);
}

TEST_CASE("non-finite measurements become null", "[report]") {
  VerificationReport r;
  r.add(make_check("x", 0, "a", "", std::numeric_limits<double>::infinity(), 1.0));
  CHECK(to_json(r)["checks"][0]["measured"].is_null());
}

TEST_CASE("criterion status groups checks", "[report][acceptance]") {
  VerificationReport r;
  r.add(make_check("free-particle", 1, "a", "", 0.0, 1.0));
  r.add(make_check("eigen-spectrum", 2, "b", "", 0.0, 1.0));
  r.add(make_check("eigen-spectrum", 2, "c", "", 5.0, 1.0));
  const auto s = criterion_status(r);
  REQUIRE(s.size() == 2);
  CHECK(s[0].pass);
  CHECK_FALSE(s[1].pass);
  CHECK(s[1].failed_checks == 1);
  CHECK(acceptance_criteria().size() == 11);
}

TEST_CASE("single criteria run in isolation", "[acceptance]") {
  AcceptanceOptions o;
  const auto checks = run_criterion(6, o);
  REQUIRE(checks.size() == 2);
  for (const auto& c : checks) {
    CHECK(c.criterion == 6);
    CHECK(c.pass);
  }
  CHECK_THROWS_AS(run_criterion(12, o), std::invalid_argument);
  const VerificationReport r = run_acceptance(o, {1, 6, 11});
  CHECK(r.passed());
  CHECK(criterion_status(r).size() == 3);
}
