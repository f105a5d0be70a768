#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "portmission/plan_score.hpp"

using namespace portmission;
using namespace pmtest;

namespace {

ScoringRubric golden_rubric() {
  return parse_rubric(slurp(asset_path("rubrics/crane_inspection.json"))).value();
}

/// Swaps the action payloads (action, robot, params, queries) of two steps
/// while leaving ids and preconditions in place.
MissionPlan swap_payloads(MissionPlan plan, int a, int b) {
  std::swap(plan.steps[a].action, plan.steps[b].action);
  std::swap(plan.steps[a].robot, plan.steps[b].robot);
  std::swap(plan.steps[a].theta, plan.steps[b].theta);
  std::swap(plan.steps[a].queries, plan.steps[b].queries);
  return plan;
}

}  // namespace

TEST_CASE("label grammar round-trips") {
  for (const char* text : {"Navigate:USV", "FlyTo:UAV#2", "Inspect:UAV#3"}) {
    const auto ref = parse_label(text);
    REQUIRE(ref.ok());
    CHECK(format_label(ref.value()) == text);
  }
  CHECK_FALSE(parse_label("FlyTo").ok());
  CHECK_FALSE(parse_label("Teleport:UAV").ok());
  CHECK_FALSE(parse_label("FlyTo:ROV").ok());
}

TEST_CASE("golden document scores exactly 100 against its rubric") {
  const auto score = score_plan(slurp(asset_path("plans/crane_inspection_golden.json")),
                                golden_rubric());
  REQUIRE(score.ok());
  CHECK(score.value().json_validity == 20.0);
  CHECK(score.value().ordering == 40.0);
  CHECK(score.value().preconditions == 40.0);
  CHECK(score.value().total == 100.0);
}

TEST_CASE("unparseable documents score zero everywhere") {
  const auto score = score_plan("{definitely not json", golden_rubric());
  REQUIRE(score.ok());
  CHECK(score.value().json_validity == 0.0);
  CHECK(score.value().ordering == 0.0);
  CHECK(score.value().preconditions == 0.0);
  CHECK(score.value().total == 0.0);
}

TEST_CASE("empty rubric is an error") {
  CHECK_FALSE(score_plan("{}", ScoringRubric{}).ok());
}

TEST_CASE("payload swap with stale preconditions loses ordering and edges") {
  // Swap steps 2 and 3 of the golden plan, leaving ids and preconditions
  // pointing at the old positions.
  const MissionPlan swapped = swap_payloads(golden_plan(), 2, 3);
  const std::string doc = serialize_plan(swapped);
  const ScoringRubric rubric = golden_rubric();

  // Expected components via independent enumeration of the rubric.
  const auto parsed = parse_plan(doc);
  REQUIRE(parsed.ok());
  const auto counted = enumerate_rubric(parsed.value(), rubric);
  const double want_ordering = round_one_decimal(
      40.0 * counted.pairs_satisfied / rubric.precedence_pairs.size());
  const double want_preconds = round_one_decimal(
      40.0 * counted.edges_matched / rubric.precondition_edges.size());

  const auto score = score_plan(doc, rubric);
  REQUIRE(score.ok());
  CHECK(score.value().ordering == want_ordering);
  CHECK(score.value().preconditions == want_preconds);
  CHECK(score.value().ordering < 40.0);
  CHECK(score.value().preconditions < 40.0);

  // Frozen expectations from the enumeration oracle: 5/6 pairs, 3/6 edges.
  CHECK(counted.pairs_satisfied == 5);
  CHECK(counted.edges_matched == 3);
  CHECK(score.value().ordering == doctest::Approx(33.3));
  CHECK(score.value().preconditions == doctest::Approx(20.0));
}

TEST_CASE("exactly one violated precedence pair costs 40/|pairs|") {
  // Swap payloads of steps 2 and 3 and rewrite preconditions so every
  // labelled precondition edge still matches; only the listed order of
  // FlyTo#1 vs Inspect breaks.
  MissionPlan plan = swap_payloads(golden_plan(), 2, 3);
  plan.steps[2].preconditions = {3};  // Inspect after FlyTo#1 (now id 3)
  plan.steps[3].preconditions = {1};  // FlyTo#1 after Takeoff
  plan.steps[4].preconditions = {2};  // FlyTo#2 after Inspect

  const ScoringRubric rubric = golden_rubric();
  const auto score = score_plan(serialize_plan(plan), rubric);
  REQUIRE(score.ok());
  CHECK(score.value().preconditions == 40.0);
  const double expected =
      round_one_decimal(40.0 * 5.0 / static_cast<double>(rubric.precedence_pairs.size()));
  CHECK(score.value().ordering == expected);
  CHECK(score.value().total ==
        doctest::Approx(20.0 + expected + 40.0));
}

TEST_CASE("scorer equals the enumeration oracle over random payload shuffles") {
  std::mt19937 rng(23);
  const ScoringRubric rubric = golden_rubric();
  const MissionPlan golden = golden_plan();

  int strictly_below = 0;
  for (int trial = 0; trial < 200; ++trial) {
    MissionPlan plan = golden;
    std::vector<int> perm(plan.steps.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::shuffle(perm.begin(), perm.end(), rng);
    MissionPlan shuffled = plan;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      shuffled.steps[i].action = plan.steps[perm[i]].action;
      shuffled.steps[i].robot = plan.steps[perm[i]].robot;
      shuffled.steps[i].theta = plan.steps[perm[i]].theta;
      shuffled.steps[i].queries = plan.steps[perm[i]].queries;
    }
    const std::string doc = serialize_plan(shuffled);
    const auto parsed = parse_plan(doc);
    REQUIRE(parsed.ok());
    const auto counted = enumerate_rubric(parsed.value(), rubric);
    const auto score = score_plan(doc, rubric);
    REQUIRE(score.ok());
    CHECK(score.value().ordering ==
          round_one_decimal(40.0 * counted.pairs_satisfied /
                            rubric.precedence_pairs.size()));
    CHECK(score.value().preconditions ==
          round_one_decimal(40.0 * counted.edges_matched /
                            rubric.precondition_edges.size()));
    CHECK(score.value().total >= 0.0);
    CHECK(score.value().total <= 100.0);
    const bool all_satisfied =
        counted.pairs_satisfied ==
            static_cast<int>(rubric.precedence_pairs.size()) &&
        counted.edges_matched ==
            static_cast<int>(rubric.precondition_edges.size());
    CHECK((score.value().total == 100.0) == all_satisfied);
    if (score.value().ordering < 40.0) ++strictly_below;
  }
  CHECK(strictly_below > 0);  // shuffles actually exercised degradation
}

TEST_CASE("rubric files round-trip") {
  const ScoringRubric rubric = golden_rubric();
  const auto again = parse_rubric(serialize_rubric(rubric));
  REQUIRE(again.ok());
  CHECK(again.value().precedence_pairs == rubric.precedence_pairs);
  CHECK(again.value().precondition_edges == rubric.precondition_edges);
}
