#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "portmission/bench.hpp"
#include "portmission/report.hpp"
#include "portmission/transcript.hpp"

using namespace portmission;
using namespace pmtest;

namespace {

BenchTask crane_task() {
  BenchTask task;
  task.label = "crane_inspection";
  task.request = parse_mission_request(
                     slurp(asset_path("missions/crane_inspection.json")))
                     .value();
  task.rubric =
      parse_rubric(slurp(asset_path("rubrics/crane_inspection.json"))).value();
  return task;
}

}  // namespace

TEST_CASE("stub planner cell: perfect scores, zero latency") {
  const WorldState world = default_port_world();
  StubPlanner stub;
  const auto runs = run_benchmark({crane_task()}, {&stub}, 3, world);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].trials.size() == 3);
  CHECK(runs[0].mean_correctness() == doctest::Approx(100.0));
  CHECK(runs[0].success_rate() == doctest::Approx(1.0));
  CHECK(runs[0].mean_latency() == doctest::Approx(0.0));
}

TEST_CASE("fixture transcripts: one malformed response out of five") {
  const WorldState world = default_port_world();
  const auto records = read_transcript(
      asset_path("fixtures/transcripts/fixture-model__crane_inspection.jsonl"));
  REQUIRE(records.ok());
  REQUIRE(records.value().size() == 5);

  TranscriptPlayer player("fixture-model", records.value(), "");
  const auto runs = run_benchmark({crane_task()}, {&player}, 5, world);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].mean_correctness() == doctest::Approx(80.0));
  CHECK(runs[0].success_rate() == doctest::Approx(0.8));
  CHECK(runs[0].mean_latency() == doctest::Approx(1.0));
}

TEST_CASE("per-model average equals the mean of task rows") {
  BenchRun a;
  a.model = "m";
  a.task = "t1";
  TrialResult t;
  t.score.total = 90.0;
  t.executed = true;
  t.latency_s = 2.0;
  a.trials = {t, t};
  BenchRun b = a;
  b.task = "t2";
  b.trials[0].score.total = 50.0;
  b.trials[0].executed = false;
  b.trials[0].latency_s = 4.0;

  const BenchStats avg = average_stats({a, b});
  CHECK(avg.mean_correctness ==
        doctest::Approx((a.mean_correctness() + b.mean_correctness()) / 2.0));
  CHECK(avg.success_rate ==
        doctest::Approx((a.success_rate() + b.success_rate()) / 2.0));
  CHECK(avg.mean_latency ==
        doctest::Approx((a.mean_latency() + b.mean_latency()) / 2.0));
}

TEST_CASE("table renderers include the average row") {
  const WorldState world = default_port_world();
  StubPlanner stub;
  const auto runs = run_benchmark({crane_task()}, {&stub}, 1, world);
  const std::string table = render_table(runs);
  CHECK(table.find("average") != std::string::npos);
  CHECK(table.find("stub") != std::string::npos);
  const std::string tsv = render_tsv(runs);
  CHECK(tsv.find("model\ttask\trt_s\tcorr\tsucc_pct") == 0);
  CHECK(tsv.find("stub\taverage") != std::string::npos);
}

TEST_CASE("aggregate_report is lossless over the outcome") {
  const WorldState world = default_port_world();
  const MissionRequest req = parse_mission_request(
                                 slurp(asset_path("missions/crane_inspection.json")))
                                 .value();
  StubPlanner planner;
  StubInspector inspector;
  const MissionOutcome outcome = run_mission(
      golden_plan(), world, {&planner, &inspector}, req, ReplanPolicy{});
  REQUIRE(outcome.status == MissionStatus::Succeeded);

  const FinalReport report = aggregate_report(outcome, "crane-inspection");
  CHECK(report.timeline.size() == outcome.timeline.size());
  CHECK(report.inspections.size() == outcome.inspections.size());
  CHECK(report.alerts.size() == outcome.alerts.size());
  CHECK(report.steps_completed == 7);
  CHECK(report.steps_failed == 0);
  CHECK(report.status == MissionStatus::Succeeded);
  CHECK(report.duration_ticks == outcome.final_tick);

  // Inspections appear in tick order.
  for (std::size_t i = 1; i < report.inspections.size(); ++i) {
    CHECK(report.inspections[i - 1].tick <= report.inspections[i].tick);
  }

  const std::string doc = report_to_json(report);
  CHECK(doc.find("\"alerts\"") != std::string::npos);
  CHECK(doc.find("\"timeline\"") != std::string::npos);
  const std::string text = report_to_text(report);
  CHECK(text.find("Succeeded") != std::string::npos);
}

TEST_CASE("injected critical finding lands in the alerts section") {
  const WorldState world = default_port_world();
  const MissionRequest req = parse_mission_request(
                                 slurp(asset_path("missions/crane_inspection.json")))
                                 .value();
  StubPlanner planner;
  StubInspector inspector;
  const MissionOutcome outcome = run_mission(
      golden_plan(), world, {&planner, &inspector}, req, ReplanPolicy{});
  const FinalReport report = aggregate_report(outcome, "crane-inspection");
  CHECK_FALSE(report.alerts.empty());
}

TEST_CASE("empty plan aggregates to an empty timeline") {
  const WorldState world = open_water_world();
  const MissionRequest req = basic_request(world, "idle");
  MissionPlan plan;
  plan.mission_id = "noop";
  StubPlanner planner;
  StubInspector inspector;
  const MissionOutcome outcome =
      run_mission(plan, world, {&planner, &inspector}, req, ReplanPolicy{});
  CHECK(outcome.status == MissionStatus::Succeeded);
  const FinalReport report = aggregate_report(outcome, "noop");
  CHECK(report.timeline.empty());
  CHECK(report.steps_completed == 0);
}

TEST_CASE("concurrent model cells produce the sequential result") {
  const WorldState world = default_port_world();
  StubPlanner a, b;
  const std::vector<PlannerClient*> models{&a, &b};
  const auto seq =
      run_benchmark({crane_task()}, models, 2, world, {}, {}, 1);
  const auto par =
      run_benchmark({crane_task()}, models, 2, world, {}, {}, 2);
  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].model == par[i].model);
    CHECK(seq[i].mean_correctness() == par[i].mean_correctness());
    CHECK(seq[i].success_rate() == par[i].success_rate());
  }
}

TEST_CASE("client errors are recorded per trial without aborting the cell") {
  const WorldState world = default_port_world();
  TranscriptPlayer empty_player("empty", {}, "");
  const auto runs = run_benchmark({crane_task()}, {&empty_player}, 2, world);
  REQUIRE(runs.size() == 1);
  REQUIRE(runs[0].trials.size() == 2);
  CHECK(runs[0].trials[0].client_error);
  CHECK(runs[0].trials[1].client_error);
  CHECK(runs[0].mean_correctness() == doctest::Approx(0.0));
  CHECK(runs[0].success_rate() == doctest::Approx(0.0));
}
