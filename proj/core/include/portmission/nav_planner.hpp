#pragma once

#include <vector>

#include "portmission/occupancy_grid.hpp"
#include "portmission/result.hpp"

namespace portmission {

struct GridPath {
  std::vector<GridCoord> cells;
  std::vector<Vec2> waypoints;  // decimated, world frame
  double cost = 0.0;            // straight + sqrt(2)*diagonal + proximity penalties
  int straight_moves = 0;
  int diagonal_moves = 0;
};

enum class NavError { NoPath, StartOccupied, GoalOccupied };

/// 8-connected A* with octile heuristic. Cell entry cost adds
/// proximity_weight * max(0, 1 - clearance/horizon); the penalty lives in g
/// only, so the heuristic stays admissible. Ties break on (f, h, cell index).
Result<GridPath, NavError> plan_path(const OccupancyGrid& grid, const Vec2& start,
                                     const Vec2& goal, double proximity_weight,
                                     double proximity_horizon = 3.0);

/// True when the straight segment between the two cell centers passes only
/// through free cells (supercover traversal).
bool line_of_sight(const OccupancyGrid& grid, GridCoord a, GridCoord b);

/// Greedy line-of-sight shortening; endpoints always survive.
std::vector<Vec2> decimate(const std::vector<GridCoord>& cells,
                           const OccupancyGrid& grid);

}  // namespace portmission
