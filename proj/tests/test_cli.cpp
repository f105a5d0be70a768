#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"

namespace fs = std::filesystem;
using namespace pmtest;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(PM_CLI_PATH) + " " + args + " 2>&1";
  CliResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    result.output.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pm_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("score: golden pair prints the full breakdown and exits 0") {
  const CliResult r = run_cli("score " + asset_path("plans/crane_inspection_golden.json") +
                              " " + asset_path("rubrics/crane_inspection.json"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("json_validity 20") != std::string::npos);
  CHECK(r.output.find("ordering      40") != std::string::npos);
  CHECK(r.output.find("preconditions 40") != std::string::npos);
  CHECK(r.output.find("total         100") != std::string::npos);
}

TEST_CASE("score: empty plan file prints zeros, exits 0") {
  const fs::path dir = scratch("score");
  std::ofstream(dir / "empty.json").close();
  const CliResult r = run_cli("score " + (dir / "empty.json").string() + " " +
                              asset_path("rubrics/crane_inspection.json"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("json_validity 0") != std::string::npos);
  CHECK(r.output.find("total         0") != std::string::npos);
}

TEST_CASE("score: unreadable files exit 2") {
  CHECK(run_cli("score /nonexistent/plan.json /nonexistent/rubric.json")
            .exit_code == 2);
}

TEST_CASE("run: missing world file exits 2 with a diagnostic") {
  const CliResult r = run_cli("run --world /nonexistent/world.json --mission " +
                              asset_path("missions/crane_inspection.json"));
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("run: remote planner without endpoint config exits 2 before simulating") {
  unsetenv("PORTMISSION_ENDPOINT");
  unsetenv("PORTMISSION_MODEL");
  unsetenv("PORTMISSION_API_KEY");
  const CliResult remote = run_cli(
      "run --planner remote --world " + asset_path("worlds/port_default.json") +
      " --mission " + asset_path("missions/crane_inspection.json"));
  CHECK(remote.exit_code == 2);
}

TEST_CASE("run: walled-off goal exhausts replans and exits 1") {
  const fs::path dir = scratch("blocked");
  // Fallback patrol targets the workspace center; enclose it with a ring.
  const std::string world = R"({
    "bounds": {"min": [0,0,0], "max": [120,120,30]},
    "dt": 0.05,
    "grid": {"resolution": 1.0, "inflation": 2.0},
    "static_obstacles": [
      {"label": "wall_s", "footprint": [[40,40],[80,40],[80,44],[40,44]], "height": 6},
      {"label": "wall_n", "footprint": [[40,76],[80,76],[80,80],[40,80]], "height": 6},
      {"label": "wall_w", "footprint": [[40,44],[44,44],[44,76],[40,76]], "height": 6},
      {"label": "wall_e", "footprint": [[76,44],[80,44],[80,76],[76,76]], "height": 6}
    ],
    "dynamic_obstacles": [],
    "landmarks": {"PortDock": [15,15,0]},
    "usv": {"x": 15, "y": 15, "psi": 0, "v": 0},
    "uav": {"p": [15,15,0.5], "vel": [0,0,0], "psi": 0, "on_deck": true}
  })";
  std::ofstream(dir / "blocked.json") << world;
  const std::string mission = R"({
    "instruction": "patrol the basin and report anything unusual",
    "environment": {"summary": "walled test basin",
                    "bounds": {"min": [0,0,0], "max": [120,120,30]},
                    "landmarks": {"PortDock": [15,15,0]}},
    "knowledge": ["max_altitude: 20"]
  })";
  std::ofstream(dir / "mission.json") << mission;

  const CliResult r = run_cli("run --world " + (dir / "blocked.json").string() +
                              " --mission " + (dir / "mission.json").string() +
                              " --out " + (dir / "out").string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("Failed") != std::string::npos);
}

TEST_CASE("bench: empty tasks directory exits 2") {
  const fs::path dir = scratch("bench_empty");
  const CliResult r = run_cli("bench --tasks " + dir.string() + " --world " +
                              asset_path("worlds/port_default.json"));
  CHECK(r.exit_code == 2);
}

TEST_CASE("bench: stub planner scores 100 on every shipped task") {
  const CliResult r = run_cli("bench --tasks " + asset_path("missions") +
                              " --world " + asset_path("worlds/port_default.json") +
                              " --trials 1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("average") != std::string::npos);
  // Every task row and the average carry correctness 100.0 and success 100.0.
  std::istringstream lines(r.output);
  std::string line;
  int rows = 0;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    ++rows;
    CHECK(line.find("100.0") != std::string::npos);
  }
  CHECK(rows == 6);  // five tasks + the average row
}

TEST_CASE("export-grid writes a PGM and an optional path dump") {
  const fs::path dir = scratch("grid");
  const CliResult r = run_cli(
      "export-grid --world " + asset_path("worlds/port_default.json") +
      " --out " + (dir / "grid.pgm").string() + " --path-from 20 20 --path-to 87.5 78 --path-out " +
      (dir / "path.tsv").string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "grid.pgm"));
  CHECK(fs::exists(dir / "path.tsv"));
  std::ifstream pgm(dir / "grid.pgm");
  std::string magic;
  pgm >> magic;
  CHECK(magic == "P2");
}

TEST_CASE("run then replay: the recorded stream is consistent") {
  const fs::path dir = scratch("replay");
  const CliResult run = run_cli(
      "run --world " + asset_path("worlds/port_default.json") + " --mission " +
      asset_path("missions/crane_inspection.json") + " --out " + dir.string());
  REQUIRE(run.exit_code == 0);

  fs::path run_dir;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) run_dir = entry.path();
  }
  REQUIRE_FALSE(run_dir.empty());
  for (const char* file :
       {"report.json", "report.txt", "events.jsonl", "trace.tsv", "graph.dot",
        "plan.json", "validation.json"}) {
    CHECK(fs::exists(run_dir / file));
  }

  const CliResult replay = run_cli("replay " + run_dir.string());
  CHECK(replay.exit_code == 0);
  CHECK(replay.output.find("event stream consistent") != std::string::npos);
}
