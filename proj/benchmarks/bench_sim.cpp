#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "portmission/clients.hpp"
#include "portmission/coordinator.hpp"
#include "portmission/world.hpp"

namespace {

using namespace portmission;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const WorldState& port_world() {
  static const WorldState world =
      parse_world(slurp(std::string(PM_ASSETS) + "/worlds/port_default.json"))
          .value();
  return world;
}

void BM_WorldStep(benchmark::State& state) {
  WorldState w = port_world();
  w.uav_on_deck = false;
  const UsvCommand usv{0.4, 0.1};
  const UavCommand uav{{0.5, -0.3, 0.1}, 0.05};
  for (auto _ : state) {
    w = step(w, usv, uav);
    benchmark::DoNotOptimize(w.tick);
  }
}
BENCHMARK(BM_WorldStep);

void BM_Observe(benchmark::State& state) {
  WorldState w = port_world();
  w.uav_on_deck = false;
  w.uav.p = {101.5, 77, 15};
  w.uav.psi = 1.8;
  for (auto _ : state) {
    auto obs = observe(w, Robot::UAV);
    benchmark::DoNotOptimize(obs);
  }
}
BENCHMARK(BM_Observe);

void BM_GoldenMission(benchmark::State& state) {
  const WorldState world = port_world();
  const MissionRequest request =
      parse_mission_request(
          slurp(std::string(PM_ASSETS) + "/missions/crane_inspection.json"))
          .value();
  const MissionPlan plan =
      parse_plan(slurp(std::string(PM_ASSETS) +
                       "/plans/crane_inspection_golden.json"))
          .value();
  StubPlanner planner;
  StubInspector inspector;
  for (auto _ : state) {
    const MissionOutcome outcome = run_mission(
        plan, world, {&planner, &inspector}, request, ReplanPolicy{});
    benchmark::DoNotOptimize(outcome.final_tick);
  }
}
BENCHMARK(BM_GoldenMission)->Unit(benchmark::kMillisecond);

}  // namespace
