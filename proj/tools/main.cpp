// portmission CLI: run missions, score plan files, run benchmarks, export
// grids, and replay recorded event streams.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "portmission/bench.hpp"
#include "portmission/clients.hpp"
#include "portmission/coordinator.hpp"
#include "portmission/depgraph.hpp"
#include "portmission/nav_planner.hpp"
#include "portmission/plan_score.hpp"
#include "portmission/report.hpp"
#include "portmission/transcript.hpp"
#include "portmission/world.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace portmission;

namespace {

constexpr int kExitMissionFailed = 1;
constexpr int kExitConfig = 2;

std::optional<std::string> slurp(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

int config_error(const std::string& what) {
  std::cerr << "error: " << what << "\n";
  return kExitConfig;
}

struct RunOptions {
  std::string world_file;
  std::string mission_file;
  std::string plan_file;  // optional: execute this plan instead of planning
  std::string planner_mode = "stub";
  std::string inspector_mode = "stub";
  std::string control_file;
  std::string out_dir = "runs";
  std::uint64_t seed = 0;
  int max_replans = 2;
  long abort_at_tick = -1;
  std::vector<std::string> fail_steps;  // "gen:id"
};

RemoteConfig remote_config_from_env(const std::string& template_file) {
  RemoteConfig cfg;
  if (const char* e = std::getenv(kEndpointEnv)) cfg.endpoint = e;
  if (const char* m = std::getenv(kModelEnv)) cfg.model = m;
  cfg.prompt_template = template_file;
  return cfg;
}

int cmd_run(const RunOptions& opt, const std::string& template_file) {
  const auto world_text = slurp(opt.world_file);
  if (!world_text) return config_error("cannot read world file " + opt.world_file);
  auto world = parse_world(*world_text);
  if (!world) return config_error("world: " + world.error().reason);
  world.value().rng_seed = opt.seed;

  const auto mission_text = slurp(opt.mission_file);
  if (!mission_text) {
    return config_error("cannot read mission file " + opt.mission_file);
  }
  auto request = parse_mission_request(*mission_text);
  if (!request) return config_error("mission: " + request.error().reason);

  ControlConfig control;
  if (!opt.control_file.empty()) {
    const auto text = slurp(opt.control_file);
    if (!text) return config_error("cannot read control file " + opt.control_file);
    auto parsed = parse_control_config(*text);
    if (!parsed) return config_error("control config: " + parsed.error());
    control = parsed.value();
  }

  // Remote modes must be fully configured before any simulation starts.
  std::unique_ptr<PlannerClient> planner;
  if (opt.planner_mode == "stub") {
    planner = std::make_unique<StubPlanner>();
  } else if (opt.planner_mode == "remote") {
    RemoteConfig rc = remote_config_from_env(template_file);
    if (rc.endpoint.empty() || rc.model.empty()) {
      return config_error(std::string("remote planner needs ") + kEndpointEnv +
                          " and " + kModelEnv);
    }
    if (std::getenv(kAuthEnv) == nullptr) {
      return config_error(std::string("remote planner needs ") + kAuthEnv);
    }
    planner = std::make_unique<RemotePlanner>(rc);
  } else {
    return config_error("planner mode must be stub or remote");
  }

  std::unique_ptr<InspectorClient> inspector;
  if (opt.inspector_mode == "stub") {
    inspector = std::make_unique<StubInspector>();
  } else if (opt.inspector_mode == "remote") {
    RemoteConfig rc = remote_config_from_env(template_file);
    if (rc.endpoint.empty() || rc.model.empty() ||
        std::getenv(kAuthEnv) == nullptr) {
      return config_error("remote inspector needs endpoint/model/key env vars");
    }
    inspector = std::make_unique<RemoteInspector>(rc);
  } else {
    return config_error("inspector mode must be stub or remote");
  }

  ReplanPolicy policy;
  policy.max_replans = opt.max_replans;
  policy.abort_at_tick = opt.abort_at_tick;
  for (const std::string& f : opt.fail_steps) {
    const std::size_t colon = f.find(':');
    if (colon == std::string::npos) return config_error("--fail-step wants gen:id");
    policy.inject_failures.emplace_back(std::stoi(f.substr(0, colon)),
                                        std::stoi(f.substr(colon + 1)));
  }

  // Obtain the plan: from file, or from the planner.
  std::string document;
  if (!opt.plan_file.empty()) {
    const auto text = slurp(opt.plan_file);
    if (!text) return config_error("cannot read plan file " + opt.plan_file);
    document = *text;
  } else {
    auto resp = planner->plan(request.value());
    if (!resp) {
      std::cerr << "planner failed: " << to_string(resp.error().kind) << " "
                << resp.error().detail << "\n";
      return kExitMissionFailed;
    }
    document = resp.value().document;
  }

  auto plan = parse_plan(document);
  if (!plan) {
    std::cerr << "plan rejected: " << to_string(plan.error().kind) << " at byte "
              << plan.error().byte_offset << ": " << plan.error().reason << "\n";
    return kExitMissionFailed;
  }
  const ValidationReport validation = validate_plan(plan.value(), request.value());
  if (!validation.admissible()) {
    std::cerr << "plan inadmissible:\n" << serialize_validation_report(validation);
    return kExitMissionFailed;
  }
  auto graph = build_graph(plan.value());
  if (!graph) {
    std::cerr << "plan rejected: " << graph.error().reason << "\n";
    return kExitMissionFailed;
  }

  ModelClients clients{planner.get(), inspector.get()};
  const MissionOutcome outcome = run_mission(plan.value(), world.value(), clients,
                                             request.value(), policy, control);

  const FinalReport report = aggregate_report(outcome, plan.value().mission_id);
  const fs::path run_dir = fs::path(opt.out_dir) /
      (plan.value().mission_id + "_t" + std::to_string(outcome.final_tick));
  fs::create_directories(run_dir);
  write_file(run_dir / "report.json", report_to_json(report));
  write_file(run_dir / "report.txt", report_to_text(report));
  write_file(run_dir / "plan.json", serialize_plan(plan.value()));
  write_file(run_dir / "graph.dot", to_dot(graph.value()));
  write_file(run_dir / "validation.json", serialize_validation_report(validation));
  {
    std::ofstream events(run_dir / "events.jsonl");
    for (const std::string& line : outcome.events) events << line << "\n";
    std::ofstream trace(run_dir / "trace.tsv");
    trace << "tick\trobot\tx\ty\tz\tpsi\tv\n";
    for (const std::string& row : outcome.trace_rows) trace << row << "\n";
  }

  std::cout << report_to_text(report);
  std::cout << "outputs: " << run_dir.string() << "\n";
  return outcome.status == MissionStatus::Succeeded ? 0 : kExitMissionFailed;
}

int cmd_score(const std::string& plan_file, const std::string& rubric_file,
              const std::string& json_out) {
  const auto plan_text = slurp(plan_file);
  if (!plan_text) return config_error("cannot read plan file " + plan_file);
  const auto rubric_text = slurp(rubric_file);
  if (!rubric_text) return config_error("cannot read rubric file " + rubric_file);

  auto rubric = parse_rubric(*rubric_text);
  if (!rubric) return config_error("rubric: " + rubric.error().reason);

  auto score = score_plan(*plan_text, rubric.value());
  if (!score) return config_error("rubric is empty");

  const PlanScore& s = score.value();
  std::cout << "json_validity " << s.json_validity << "\n"
            << "ordering      " << s.ordering << "\n"
            << "preconditions " << s.preconditions << "\n"
            << "total         " << s.total << "\n";
  if (!json_out.empty()) write_file(json_out, serialize_score(s));
  return 0;
}

struct BenchOptions {
  std::string tasks_dir;
  std::string world_file;
  std::string transcripts_dir;
  bool live = false;
  int trials = 1;
  int parallel = 1;
  std::string tsv_out;
};

int cmd_bench(const BenchOptions& opt, const std::string& template_file) {
  std::vector<BenchTask> tasks;
  if (!fs::is_directory(opt.tasks_dir)) {
    return config_error("tasks directory not found: " + opt.tasks_dir);
  }
  std::vector<fs::path> task_files;
  for (const auto& entry : fs::directory_iterator(opt.tasks_dir)) {
    if (entry.path().extension() == ".json" &&
        entry.path().stem().string().find(".rubric") == std::string::npos) {
      task_files.push_back(entry.path());
    }
  }
  std::sort(task_files.begin(), task_files.end());
  for (const fs::path& file : task_files) {
    const auto text = slurp(file);
    if (!text) return config_error("cannot read " + file.string());
    auto request = parse_mission_request(*text);
    if (!request) {
      return config_error(file.string() + ": " + request.error().reason);
    }
    BenchTask task;
    task.label = file.stem().string();
    task.request = std::move(request.value());

    fs::path rubric_file = file;
    rubric_file.replace_extension(".rubric.json");
    if (const auto rubric_text = slurp(rubric_file)) {
      auto rubric = parse_rubric(*rubric_text);
      if (!rubric) {
        return config_error(rubric_file.string() + ": " + rubric.error().reason);
      }
      task.rubric = std::move(rubric.value());
    } else {
      // No rubric on disk: derive one from the stub planner's own answer.
      StubPlanner stub;
      auto resp = stub.plan(task.request);
      auto plan = parse_plan(resp.value().document);
      task.rubric = rubric_from_plan(plan.value());
    }
    tasks.push_back(std::move(task));
  }
  if (tasks.empty()) return config_error("tasks directory is empty");

  const auto world_text = slurp(opt.world_file);
  if (!world_text) return config_error("cannot read world file " + opt.world_file);
  auto world = parse_world(*world_text);
  if (!world) return config_error("world: " + world.error().reason);

  std::vector<std::unique_ptr<PlannerClient>> owned;
  std::vector<PlannerClient*> models;
  int trials = opt.trials;

  if (!opt.transcripts_dir.empty()) {
    if (!fs::is_directory(opt.transcripts_dir)) {
      return config_error("transcripts directory not found: " + opt.transcripts_dir);
    }
    // One player per <model>__<task>.jsonl group; trials = records per task.
    std::map<std::string, std::vector<TranscriptRecord>> per_model;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(opt.transcripts_dir)) {
      if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    int per_task_records = 0;
    for (const fs::path& file : files) {
      const std::string stem = file.stem().string();
      const std::size_t sep = stem.find("__");
      const std::string model = sep == std::string::npos ? stem : stem.substr(0, sep);
      auto records = read_transcript(file);
      if (!records) return config_error(records.error().reason);
      per_task_records = static_cast<int>(records.value().size());
      auto& sink = per_model[model];
      sink.insert(sink.end(), records.value().begin(), records.value().end());
    }
    if (per_model.empty()) return config_error("no transcripts found");
    for (auto& [model, records] : per_model) {
      owned.push_back(std::make_unique<TranscriptPlayer>(model, std::move(records),
                                                         template_file));
      models.push_back(owned.back().get());
    }
    trials = per_task_records;
  } else if (opt.live) {
    RemoteConfig rc = remote_config_from_env(template_file);
    if (rc.endpoint.empty() || rc.model.empty() ||
        std::getenv(kAuthEnv) == nullptr) {
      return config_error("--live needs endpoint/model/key environment variables");
    }
    owned.push_back(std::make_unique<RemotePlanner>(rc));
    models.push_back(owned.back().get());
  } else {
    owned.push_back(std::make_unique<StubPlanner>());
    models.push_back(owned.back().get());
  }

  const std::vector<BenchRun> runs =
      run_benchmark(tasks, models, trials, world.value(), ReplanPolicy{},
                    ControlConfig{}, opt.parallel);
  std::cout << render_table(runs);
  if (!opt.tsv_out.empty()) write_file(opt.tsv_out, render_tsv(runs));
  return 0;
}

struct ExportOptions {
  std::string world_file;
  std::string out_file = "grid.pgm";
  std::vector<double> path_from;
  std::vector<double> path_to;
  std::string path_out;
  double proximity_weight = 1.0;
};

int cmd_export_grid(const ExportOptions& opt) {
  const auto world_text = slurp(opt.world_file);
  if (!world_text) return config_error("cannot read world file " + opt.world_file);
  auto world = parse_world(*world_text);
  if (!world) return config_error("world: " + world.error().reason);

  std::ofstream out(opt.out_file);
  if (!out) return config_error("cannot write " + opt.out_file);
  write_pgm(world.value().grid, out);
  std::cout << "grid " << world.value().grid.width << "x"
            << world.value().grid.height << " -> " << opt.out_file << "\n";

  if (opt.path_from.size() == 2 && opt.path_to.size() == 2) {
    auto path = plan_path(world.value().grid, {opt.path_from[0], opt.path_from[1]},
                          {opt.path_to[0], opt.path_to[1]}, opt.proximity_weight);
    if (!path) {
      std::cerr << "no path between the requested endpoints\n";
      return kExitMissionFailed;
    }
    std::ostringstream os;
    for (const Vec2& wp : path.value().waypoints) {
      os << wp.x << "\t" << wp.y << "\n";
    }
    const std::string dump = os.str();
    if (opt.path_out.empty()) {
      std::cout << dump;
    } else {
      write_file(opt.path_out, dump);
    }
    std::cout << "path cost " << path.value().cost << ", "
              << path.value().waypoints.size() << " waypoints\n";
  }
  return 0;
}

int cmd_replay(const std::string& run_dir) {
  std::ifstream in(fs::path(run_dir) / "events.jsonl");
  if (!in) return config_error("cannot read events in " + run_dir);

  struct Entry {
    long start = -1, end = -1;
    std::string action, robot, result;
  };
  std::map<std::pair<int, int>, Entry> steps;  // (gen, id) -> entry
  std::string status = "?";
  long final_tick = 0;
  int alerts = 0;
  std::string line;
  bool consistent = true;

  std::map<std::string, long> robot_busy_until;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      std::cerr << "bad event line: " << line << "\n";
      consistent = false;
      continue;
    }
    const std::string event = j.value("event", "");
    if (event == "step_started") {
      auto& e = steps[{j.value("gen", 0), j.value("step", -1)}];
      e.start = j.value("tick", -1L);
      e.action = j.value("action", "");
      e.robot = j.value("robot", "");
      if (const auto it = robot_busy_until.find(e.robot);
          it != robot_busy_until.end() && e.start <= it->second) {
        std::cerr << "overlap: " << e.robot << " busy until " << it->second
                  << " but step started at " << e.start << "\n";
        consistent = false;
      }
    } else if (event == "step_completed" || event == "step_failed") {
      auto& e = steps[{j.value("gen", 0), j.value("step", -1)}];
      e.end = j.value("tick", -1L);
      e.result = event == "step_completed" ? "Completed" : "Failed";
      if (!e.robot.empty()) {
        robot_busy_until[e.robot] = std::max(robot_busy_until[e.robot], e.end);
      }
    } else if (event == "alert") {
      ++alerts;
    } else if (event == "mission_end") {
      status = j.value("status", "?");
      final_tick = j.value("tick", 0L);
    }
  }

  std::cout << "replayed " << steps.size() << " steps, status " << status
            << " at tick " << final_tick << ", " << alerts << " alert(s)\n";
  for (const auto& [key, e] : steps) {
    std::cout << "  gen " << key.first << " step " << key.second << " "
              << e.action << "/" << e.robot << " [" << e.start << " .. "
              << e.end << "] " << e.result << "\n";
    if (e.start > e.end) consistent = false;
  }
  std::cout << (consistent ? "event stream consistent\n"
                           : "event stream INCONSISTENT\n");
  return consistent ? 0 : kExitMissionFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mission orchestration and desk-scale simulation for a "
               "heterogeneous USV-UAV port inspection system"};
  app.require_subcommand(1);

  std::string template_file = "assets/templates/planner_system_prompt.txt";
  app.add_option("--template", template_file,
                 "planner system prompt template file");

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "execute a mission end to end");
  run->add_option("--world", run_opt.world_file, "world description file")
      ->required();
  run->add_option("--mission", run_opt.mission_file, "mission request file")
      ->required();
  run->add_option("--plan", run_opt.plan_file,
                  "execute this plan document instead of asking the planner");
  run->add_option("--planner", run_opt.planner_mode, "stub|remote");
  run->add_option("--inspector", run_opt.inspector_mode, "stub|remote");
  run->add_option("--seed", run_opt.seed, "world seed");
  run->add_option("--max-replans", run_opt.max_replans, "replanning budget");
  run->add_option("--abort-at-tick", run_opt.abort_at_tick,
                  "operator abort hook (tick)");
  run->add_option("--fail-step", run_opt.fail_steps,
                  "inject a failure, format gen:id (repeatable)");
  run->add_option("--control", run_opt.control_file,
                  "controller gain/limit config file");
  run->add_option("--out", run_opt.out_dir, "output directory");

  std::string score_plan_file, score_rubric_file, score_json_out;
  CLI::App* score = app.add_subcommand("score", "score a plan document");
  score->add_option("plan", score_plan_file, "plan document")->required();
  score->add_option("rubric", score_rubric_file, "rubric file")->required();
  score->add_option("--json", score_json_out, "also write the score as JSON");

  BenchOptions bench_opt;
  CLI::App* bench = app.add_subcommand("bench", "run the benchmark harness");
  bench->add_option("--tasks", bench_opt.tasks_dir, "mission request directory")
      ->required();
  bench->add_option("--world", bench_opt.world_file, "world description file")
      ->required();
  bench->add_option("--transcripts", bench_opt.transcripts_dir,
                    "replay recorded transcripts from this directory");
  bench->add_flag("--live", bench_opt.live, "call the remote planner");
  bench->add_option("--trials", bench_opt.trials, "trials per cell");
  bench->add_option("--parallel", bench_opt.parallel,
                    "models benchmarked concurrently");
  bench->add_option("--tsv", bench_opt.tsv_out, "write machine-readable table");

  ExportOptions export_opt;
  CLI::App* export_grid =
      app.add_subcommand("export-grid", "rasterise the world occupancy grid");
  export_grid->add_option("--world", export_opt.world_file, "world file")
      ->required();
  export_grid->add_option("--out", export_opt.out_file, "PGM output file");
  export_grid->add_option("--path-from", export_opt.path_from,
                          "plan a path from x y")->expected(2);
  export_grid->add_option("--path-to", export_opt.path_to, "...to x y")
      ->expected(2);
  export_grid->add_option("--path-out", export_opt.path_out,
                          "write the path waypoints here");
  export_grid->add_option("--proximity-weight", export_opt.proximity_weight,
                          "obstacle proximity penalty weight");

  std::string replay_dir;
  CLI::App* replay = app.add_subcommand("replay", "inspect a recorded run");
  replay->add_option("dir", replay_dir, "run output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(run_opt, template_file);
  if (score->parsed()) return cmd_score(score_plan_file, score_rubric_file, score_json_out);
  if (bench->parsed()) return cmd_bench(bench_opt, template_file);
  if (export_grid->parsed()) return cmd_export_grid(export_opt);
  if (replay->parsed()) return cmd_replay(replay_dir);
  return kExitConfig;
}
