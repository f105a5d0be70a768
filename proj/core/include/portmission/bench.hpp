#pragma once

#include <string>
#include <vector>

#include "portmission/clients.hpp"
#include "portmission/coordinator.hpp"
#include "portmission/plan_score.hpp"
#include "portmission/world.hpp"

namespace portmission {

struct TrialResult {
  PlanScore score;
  bool executed = false;
  double latency_s = 0.0;
  bool client_error = false;
  std::string error;
};

struct BenchRun {
  std::string model;
  std::string task;
  std::vector<TrialResult> trials;

  double mean_correctness() const;
  double success_rate() const;  // in [0, 1]
  double mean_latency() const;
};

struct BenchTask {
  std::string label;
  MissionRequest request;
  ScoringRubric rubric;
};

/// One cell per (model, task): obtain a plan, score it against the task
/// rubric, attempt execution in simulation with a stub inspector, record
/// latency. Client errors land in the trial record without aborting the cell.
/// Cells of different models may run concurrently (`parallel_models` caps the
/// in-flight count); one model's cells stay sequential so stateful clients
/// like transcript players replay in order. Results are positioned by
/// (model, task) index, so the output is identical at any cap.
std::vector<BenchRun> run_benchmark(
    const std::vector<BenchTask>& tasks,
    const std::vector<PlannerClient*>& models, int trials_per_cell,
    const WorldState& world, const ReplanPolicy& policy = {},
    const ControlConfig& cfg = {}, int parallel_models = 1);

struct BenchStats {
  double mean_correctness = 0.0;
  double success_rate = 0.0;
  double mean_latency = 0.0;
};

/// Per-model average across tasks (mean of the task-row statistics).
BenchStats average_stats(const std::vector<BenchRun>& model_rows);

/// Aligned human-readable table, one row per (model, task) plus averages.
std::string render_table(const std::vector<BenchRun>& runs);

/// Machine-readable TSV with the same rows.
std::string render_tsv(const std::vector<BenchRun>& runs);

}  // namespace portmission
