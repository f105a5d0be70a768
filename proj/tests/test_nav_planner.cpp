#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "portmission/nav_planner.hpp"

using namespace portmission;
using pmtest::dijkstra_octile_cost;
using pmtest::random_grid;

namespace {

OccupancyGrid empty_grid(int side) {
  OccupancyGrid g;
  g.resolution = 1.0;
  g.width = side;
  g.height = side;
  g.cells.assign(static_cast<std::size_t>(side) * side, 0);
  return g;
}

}  // namespace

TEST_CASE("empty grid diagonal costs 9*sqrt(2)") {
  const auto g = empty_grid(10);
  const auto path = plan_path(g, {0.5, 0.5}, {9.5, 9.5}, 0.0);
  REQUIRE(path.ok());
  CHECK(path.value().cost == doctest::Approx(9.0 * std::sqrt(2.0)));
  CHECK(path.value().diagonal_moves == 9);
  CHECK(path.value().straight_moves == 0);
}

TEST_CASE("full wall separates the halves") {
  auto g = empty_grid(10);
  for (int y = 0; y < 10; ++y) g.cells[static_cast<std::size_t>(y) * 10 + 5] = 1;
  const auto path = plan_path(g, {0.5, 0.5}, {9.5, 9.5}, 0.0);
  REQUIRE_FALSE(path.ok());
  CHECK(path.error() == NavError::NoPath);
}

TEST_CASE("occupied endpoints are reported distinctly") {
  auto g = empty_grid(10);
  g.cells[0] = 1;
  CHECK(plan_path(g, {0.5, 0.5}, {9.5, 9.5}, 0.0).error() ==
        NavError::StartOccupied);
  g.cells[0] = 0;
  g.cells[99] = 1;
  CHECK(plan_path(g, {0.5, 0.5}, {9.5, 9.5}, 0.0).error() ==
        NavError::GoalOccupied);
}

TEST_CASE("A* equals the Dijkstra oracle on random 30x30 grids") {
  std::mt19937 rng(42);
  int reachable = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const OccupancyGrid g = random_grid(rng, 30, 0.2);
    const auto got = plan_path(g, {0.5, 0.5}, {29.5, 29.5}, 0.0);
    const auto want = dijkstra_octile_cost(g, {0, 0}, {29, 29});
    if (want.has_value()) {
      ++reachable;
      REQUIRE(got.ok());
      CHECK(got.value().cost == *want);  // exact equality
    } else {
      REQUIRE_FALSE(got.ok());
      CHECK(got.error() == NavError::NoPath);
    }
  }
  CHECK(reachable > 10);  // the suite exercises real paths, not just walls
}

TEST_CASE("returned paths are collision-free and 8-connected") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const OccupancyGrid g = random_grid(rng, 25, 0.25);
    const auto path = plan_path(g, {0.5, 0.5}, {24.5, 24.5}, 0.0);
    if (!path.ok()) continue;
    const auto& cells = path.value().cells;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      CHECK_FALSE(g.occupied(cells[i]));
      if (i > 0) {
        CHECK(std::abs(cells[i].x - cells[i - 1].x) <= 1);
        CHECK(std::abs(cells[i].y - cells[i - 1].y) <= 1);
        CHECK(cells[i] != cells[i - 1]);
      }
    }
    // Decimated segments stay collision-free.
    const auto& wps = path.value().waypoints;
    for (std::size_t i = 1; i < wps.size(); ++i) {
      const auto a = g.world_to_cell(wps[i - 1]);
      const auto b = g.world_to_cell(wps[i]);
      REQUIRE(a.has_value());
      REQUIRE(b.has_value());
      CHECK(line_of_sight(g, *a, *b));
    }
  }
}

TEST_CASE("proximity weight never decreases minimum clearance") {
  std::mt19937 rng(44);
  for (int trial = 0; trial < 15; ++trial) {
    const OccupancyGrid g = random_grid(rng, 25, 0.15);
    const auto clearance = clearance_map(g);
    const auto min_clearance = [&](const GridPath& p) {
      double best = 1e18;
      for (const GridCoord& c : p.cells) {
        best = std::min(best,
                        clearance[static_cast<std::size_t>(c.y) * g.width + c.x]);
      }
      return best;
    };
    const auto base = plan_path(g, {0.5, 0.5}, {24.5, 24.5}, 0.0);
    if (!base.ok()) continue;
    double prev = min_clearance(base.value());
    for (double w : {0.5, 2.0, 8.0}) {
      const auto p = plan_path(g, {0.5, 0.5}, {24.5, 24.5}, w);
      REQUIRE(p.ok());
      const double c = min_clearance(p.value());
      CHECK(c >= prev - 1e-9);
      prev = c;
    }
  }
}

TEST_CASE("decimate: straight corridor keeps only the endpoints") {
  const auto g = empty_grid(10);
  std::vector<GridCoord> cells;
  for (int x = 0; x < 10; ++x) cells.push_back({x, 4});
  const auto wps = decimate(cells, g);
  REQUIRE(wps.size() == 2);
  CHECK(wps.front() == g.cell_center({0, 4}));
  CHECK(wps.back() == g.cell_center({9, 4}));
}

TEST_CASE("decimate: L around one block keeps the corner") {
  // 5x5 grid with a block at (2,2); path hugs the corner.
  auto g = empty_grid(5);
  g.cells[2 * 5 + 2] = 1;
  const std::vector<GridCoord> cells{{0, 2}, {1, 2}, {1, 3}, {2, 3}, {3, 3},
                                     {3, 2}, {4, 2}};
  const auto wps = decimate(cells, g);
  CHECK(wps.size() == 3);  // hand ray-cast: one bend survives
}

TEST_CASE("decimate is idempotent on a two-point path") {
  const auto g = empty_grid(6);
  const std::vector<GridCoord> cells{{0, 0}, {5, 5}};
  const auto wps = decimate(cells, g);
  REQUIRE(wps.size() == 2);
  CHECK(wps.front() == g.cell_center({0, 0}));
  CHECK(wps.back() == g.cell_center({5, 5}));
}
