#include "portmission/bench.hpp"

#include <future>
#include <iomanip>
#include <sstream>

namespace portmission {

double BenchRun::mean_correctness() const {
  if (trials.empty()) return 0.0;
  double sum = 0.0;
  for (const TrialResult& t : trials) sum += t.score.total;
  return sum / static_cast<double>(trials.size());
}

double BenchRun::success_rate() const {
  if (trials.empty()) return 0.0;
  int ok = 0;
  for (const TrialResult& t : trials) ok += t.executed ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(trials.size());
}

double BenchRun::mean_latency() const {
  if (trials.empty()) return 0.0;
  double sum = 0.0;
  for (const TrialResult& t : trials) sum += t.latency_s;
  return sum / static_cast<double>(trials.size());
}

namespace {

BenchRun run_cell(PlannerClient* model, const BenchTask& task,
                  int trials_per_cell, const WorldState& world,
                  const ReplanPolicy& policy, const ControlConfig& cfg) {
  BenchRun run;
  run.model = model->label();
  run.task = task.label;
  StubInspector inspector;

  for (int trial = 0; trial < trials_per_cell; ++trial) {
    TrialResult result;
    auto resp = model->plan(task.request);
    if (!resp) {
      result.client_error = true;
      result.error = to_string(resp.error().kind);
      run.trials.push_back(std::move(result));
      continue;
    }
    result.latency_s = resp.value().latency_s;

    if (auto score = score_plan(resp.value().document, task.rubric)) {
      result.score = score.value();
    }

    const auto parsed = parse_plan(resp.value().document);
    if (parsed && validate_plan(parsed.value(), task.request).admissible()) {
      ModelClients clients{model, &inspector};
      const MissionOutcome outcome = run_mission(parsed.value(), world, clients,
                                                 task.request, policy, cfg);
      result.executed = outcome.status == MissionStatus::Succeeded;
    }
    run.trials.push_back(std::move(result));
  }
  return run;
}

}  // namespace

std::vector<BenchRun> run_benchmark(const std::vector<BenchTask>& tasks,
                                    const std::vector<PlannerClient*>& models,
                                    int trials_per_cell, const WorldState& world,
                                    const ReplanPolicy& policy,
                                    const ControlConfig& cfg,
                                    int parallel_models) {
  std::vector<BenchRun> runs(models.size() * tasks.size());

  const auto run_model = [&](std::size_t mi) {
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
      runs[mi * tasks.size() + ti] =
          run_cell(models[mi], tasks[ti], trials_per_cell, world, policy, cfg);
    }
  };

  if (parallel_models <= 1 || models.size() <= 1) {
    for (std::size_t mi = 0; mi < models.size(); ++mi) run_model(mi);
    return runs;
  }

  std::vector<std::future<void>> in_flight;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    if (in_flight.size() >= static_cast<std::size_t>(parallel_models)) {
      in_flight.front().wait();
      in_flight.erase(in_flight.begin());
    }
    in_flight.push_back(std::async(std::launch::async, run_model, mi));
  }
  for (std::future<void>& f : in_flight) f.wait();
  return runs;
}

BenchStats average_stats(const std::vector<BenchRun>& model_rows) {
  BenchStats avg;
  if (model_rows.empty()) return avg;
  for (const BenchRun& row : model_rows) {
    avg.mean_correctness += row.mean_correctness();
    avg.success_rate += row.success_rate();
    avg.mean_latency += row.mean_latency();
  }
  const double n = static_cast<double>(model_rows.size());
  avg.mean_correctness /= n;
  avg.success_rate /= n;
  avg.mean_latency /= n;
  return avg;
}

namespace {

std::string num(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

struct Row {
  std::string model, task, rt, corr, succ;
};

std::vector<Row> make_rows(const std::vector<BenchRun>& runs) {
  std::vector<Row> rows;
  std::string model;
  std::vector<BenchRun> group;
  const auto flush = [&]() {
    if (group.empty()) return;
    const BenchStats avg = average_stats(group);
    rows.push_back({model, "average", num(avg.mean_latency, 3),
                    num(avg.mean_correctness, 1),
                    num(avg.success_rate * 100.0, 1)});
    group.clear();
  };
  for (const BenchRun& run : runs) {
    if (run.model != model) {
      flush();
      model = run.model;
    }
    rows.push_back({run.model, run.task, num(run.mean_latency(), 3),
                    num(run.mean_correctness(), 1),
                    num(run.success_rate() * 100.0, 1)});
    group.push_back(run);
  }
  flush();
  return rows;
}

}  // namespace

std::string render_table(const std::vector<BenchRun>& runs) {
  const std::vector<Row> rows = make_rows(runs);
  std::size_t wm = 5, wt = 4;
  for (const Row& r : rows) {
    wm = std::max(wm, r.model.size());
    wt = std::max(wt, r.task.size());
  }
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(wm) + 2) << "model"
     << std::setw(static_cast<int>(wt) + 2) << "task" << std::right
     << std::setw(10) << "rt_s" << std::setw(8) << "corr" << std::setw(8)
     << "succ%" << "\n";
  for (const Row& r : rows) {
    os << std::left << std::setw(static_cast<int>(wm) + 2) << r.model
       << std::setw(static_cast<int>(wt) + 2) << r.task << std::right
       << std::setw(10) << r.rt << std::setw(8) << r.corr << std::setw(8)
       << r.succ << "\n";
  }
  return os.str();
}

std::string render_tsv(const std::vector<BenchRun>& runs) {
  std::ostringstream os;
  os << "model\ttask\trt_s\tcorr\tsucc_pct\n";
  for (const Row& r : make_rows(runs)) {
    os << r.model << '\t' << r.task << '\t' << r.rt << '\t' << r.corr << '\t'
       << r.succ << "\n";
  }
  return os.str();
}

}  // namespace portmission
