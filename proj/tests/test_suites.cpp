#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "jterw/report.hpp"
#include "jterw/suites.hpp"

using namespace jterw;

namespace {

Sweep small_sweep(const SuiteInfo& info) {
  Sweep s;
  if (info.kind == SuiteKind::Identity) {
    s.v_max = 5;
  } else {
    for (SchemeParams p : {SchemeParams{4, 2}, SchemeParams{5, 2}, SchemeParams{6, 2}}) {
      if (suite_applies(info, p)) s.schemes.push_back(p);
    }
  }
  return s;
}

Sweep flipped(Sweep s) {
  s.flip = EntryFlip{{3, 1, 1, 0}, 0, 1};
  return s;
}

}  // namespace

TEST_CASE("registry") {
  const std::vector<std::string> expected{
      "lemma21",         "lemma22",          "lemma23-blocks",    "lemma31-span",     "lemma34-containment",
      "lemma35-liftpull", "cor36-commute",   "thm33-N-closed",    "thm42-T-equals-M", "eq15-structure",
      "lemma44-support", "ttt1-beta-squared", "thm46-decomposition", "thm51-T-equals-N", "eq20-structure",
      "ttt2-beta-squared", "thm54-decomposition"};
  std::vector<std::string> names;
  for (const auto& info : suite_registry()) names.emplace_back(info.name);
  for (const auto& e : expected) CHECK(std::find(names.begin(), names.end(), e) != names.end());
  CHECK_THROWS_AS(suite_info("lemma99"), UnknownSuiteError);
  CHECK_THROWS_AS(run_suite("lemma99"), UnknownSuiteError);
  CHECK(default_schemes().size() == 8);
}

TEST_CASE("every suite passes on a small sweep") {
  for (const auto& info : suite_registry()) {
    CAPTURE(info.name);
    const auto report = run_suite(info.name, small_sweep(info));
    CHECK(report.cases_run > 0);
    CHECK(report.passed());
    CHECK_FALSE(report.counterexample.has_value());
    CHECK(report.name == info.name);
  }
}

TEST_CASE("infeasible sweeps are rejected") {
  Sweep s;
  s.schemes = {{7, 3}};
  CHECK_THROWS_AS(run_suite("thm51-T-equals-N", s), InfeasibleSweepError);
  s.schemes = {{6, 3}};
  CHECK_THROWS_AS(run_suite("thm42-T-equals-M", s), InfeasibleSweepError);
  s.schemes = {{3, 2}};
  CHECK_THROWS_AS(run_suite("lemma23-blocks", s), InfeasibleSweepError);
  s.schemes = {{5, 2}};
  s.base_point = std::vector<int>{1, 6};
  CHECK_THROWS_AS(run_suite("lemma23-blocks", s), InfeasibleSweepError);
  Sweep v;
  v.v_max = 40;
  CHECK_THROWS_AS(run_suite("lemma21", v), InfeasibleSweepError);
}

TEST_CASE("boundary suites report the closure dimension") {
  Sweep s;
  s.schemes = {{6, 3}};
  const auto report = run_suite("thm51-T-equals-N", s);
  CHECK(report.passed());
  CHECK(report.facts.at("J(6,3).dim_T") == "24");
}

TEST_CASE("a flipped intersection entry is caught") {
  for (const char* name : {"lemma21", "lemma22", "lemma31-span"}) {
    CAPTURE(name);
    Sweep s;
    s.v_max = 4;
    const auto report = run_suite(name, flipped(s));
    CHECK_FALSE(report.passed());
    REQUIRE(report.counterexample.has_value());
    CHECK(report.counterexample->parameters.find("v=3") != std::string::npos);
  }
  Sweep s;
  s.schemes = {{5, 2}};
  for (const char* name : {"thm42-T-equals-M", "lemma23-blocks", "lemma34-containment"}) {
    CAPTURE(name);
    const auto report = run_suite(name, flipped(s));
    CHECK_FALSE(report.passed());
    REQUIRE(report.counterexample.has_value());
    REQUIRE(report.counterexample->residual.has_value());
    CHECK(report.counterexample->residual->value != 0);
    CHECK(report.counterexample->residual->nonzeros > 0);
  }
  // The same sweep without the flip is clean.
  CHECK(run_suite("thm42-T-equals-M", s).passed());
}

TEST_CASE("reports are deterministic and round-trip through JSON") {
  Sweep s;
  s.schemes = {{5, 2}};
  auto a = run_suite("lemma35-liftpull", s);
  auto b = run_suite("lemma35-liftpull", s);
  a.wall_time_ms = b.wall_time_ms = 0;
  CHECK(a == b);
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(report_from_json(report_to_json(a)) == a);

  auto failing = run_suite("thm42-T-equals-M", flipped(s));
  const auto back = report_from_json(report_to_json(failing));
  CHECK(back == failing);
  REQUIRE(back.counterexample.has_value());
  CHECK(back.counterexample->residual->value == failing.counterexample->residual->value);

  const std::vector<SuiteReport> many{a, failing};
  const auto many_back = reports_from_json(reports_to_json(many));
  REQUIRE(many_back.size() == 2);
  CHECK(many_back[0] == a);
  CHECK(many_back[1] == failing);
  CHECK_THROWS(report_from_json("{\"suite\": 3}"));
}

TEST_CASE("base point does not change outcomes") {
  Sweep a;
  a.schemes = {{5, 2}};
  Sweep b = a;
  b.base_point = std::vector<int>{3, 5};
  for (const char* name : {"lemma23-blocks", "lemma44-support", "thm46-decomposition"}) {
    CAPTURE(name);
    const auto ra = run_suite(name, a);
    const auto rb = run_suite(name, b);
    CHECK(ra.passed());
    CHECK(rb.passed());
    CHECK(ra.cases_run == rb.cases_run);
    CHECK(ra.facts == rb.facts);
  }
}
