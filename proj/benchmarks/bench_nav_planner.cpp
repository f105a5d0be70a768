#include <benchmark/benchmark.h>

#include <random>

#include "portmission/nav_planner.hpp"

namespace {

using namespace portmission;

OccupancyGrid make_grid(int side, double density, unsigned seed) {
  OccupancyGrid g;
  g.resolution = 1.0;
  g.width = side;
  g.height = side;
  g.cells.assign(static_cast<std::size_t>(side) * side, 0);
  std::mt19937 rng(seed);
  std::bernoulli_distribution occ(density);
  for (auto& c : g.cells) c = occ(rng) ? 1 : 0;
  g.cells.front() = 0;
  g.cells.back() = 0;
  return g;
}

void BM_PlanPath(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const OccupancyGrid grid = make_grid(side, 0.2, 99);
  const Vec2 start{0.5, 0.5};
  const Vec2 goal{side - 0.5, side - 0.5};
  for (auto _ : state) {
    auto path = plan_path(grid, start, goal, 0.0);
    benchmark::DoNotOptimize(path);
  }
}
BENCHMARK(BM_PlanPath)->Arg(30)->Arg(60)->Arg(120)->Arg(240);

void BM_PlanPathWithProximity(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const OccupancyGrid grid = make_grid(side, 0.2, 99);
  for (auto _ : state) {
    auto path = plan_path(grid, {0.5, 0.5}, {side - 0.5, side - 0.5}, 2.0);
    benchmark::DoNotOptimize(path);
  }
}
BENCHMARK(BM_PlanPathWithProximity)->Arg(60)->Arg(120);

void BM_ClearanceMap(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const OccupancyGrid grid = make_grid(side, 0.1, 7);
  for (auto _ : state) {
    auto clearance = clearance_map(grid);
    benchmark::DoNotOptimize(clearance);
  }
}
BENCHMARK(BM_ClearanceMap)->Arg(120)->Arg(240);

}  // namespace
