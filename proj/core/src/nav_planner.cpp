#include "portmission/nav_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace portmission {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInf = std::numeric_limits<double>::infinity();

double octile(GridCoord a, GridCoord b) {
  const double dx = std::abs(a.x - b.x);
  const double dy = std::abs(a.y - b.y);
  return std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
}

struct OpenItem {
  double f;
  double h;
  int idx;
  bool operator>(const OpenItem& o) const {
    return std::tie(f, h, idx) > std::tie(o.f, o.h, o.idx);
  }
};

constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

}  // namespace

bool line_of_sight(const OccupancyGrid& grid, GridCoord a, GridCoord b) {
  if (!grid.in_bounds(a) || !grid.in_bounds(b)) return false;
  if (grid.occupied(a) || grid.occupied(b)) return false;

  const double x0 = a.x + 0.5, y0 = a.y + 0.5;
  const double x1 = b.x + 0.5, y1 = b.y + 0.5;
  const double dx = x1 - x0, dy = y1 - y0;
  const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  double t_max_x = step_x != 0
                       ? ((a.x + (step_x > 0 ? 1 : 0)) - x0) / dx
                       : kInf;
  double t_max_y = step_y != 0
                       ? ((a.y + (step_y > 0 ? 1 : 0)) - y0) / dy
                       : kInf;
  const double t_delta_x = step_x != 0 ? 1.0 / std::abs(dx) : kInf;
  const double t_delta_y = step_y != 0 ? 1.0 / std::abs(dy) : kInf;

  GridCoord c = a;
  while (c != b) {
    if (std::abs(t_max_x - t_max_y) < 1e-12) {
      // Exact corner crossing: both touched cells must be free.
      if (grid.occupied({c.x + step_x, c.y}) ||
          grid.occupied({c.x, c.y + step_y})) {
        return false;
      }
      c.x += step_x;
      c.y += step_y;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    } else if (t_max_x < t_max_y) {
      c.x += step_x;
      t_max_x += t_delta_x;
    } else {
      c.y += step_y;
      t_max_y += t_delta_y;
    }
    if (!grid.in_bounds(c) || grid.occupied(c)) return false;
  }
  return true;
}

std::vector<Vec2> decimate(const std::vector<GridCoord>& cells,
                           const OccupancyGrid& grid) {
  std::vector<Vec2> out;
  if (cells.empty()) return out;
  out.push_back(grid.cell_center(cells.front()));
  std::size_t i = 0;
  while (i + 1 < cells.size()) {
    std::size_t j = cells.size() - 1;
    while (j > i + 1 && !line_of_sight(grid, cells[i], cells[j])) --j;
    out.push_back(grid.cell_center(cells[j]));
    i = j;
  }
  return out;
}

Result<GridPath, NavError> plan_path(const OccupancyGrid& grid, const Vec2& start,
                                     const Vec2& goal, double proximity_weight,
                                     double proximity_horizon) {
  const auto sc = grid.world_to_cell(start);
  if (!sc || grid.occupied(*sc)) return NavError::StartOccupied;
  const auto gc = grid.world_to_cell(goal);
  if (!gc || grid.occupied(*gc)) return NavError::GoalOccupied;

  const int w = grid.width;
  const auto idx_of = [w](GridCoord c) { return c.y * w + c.x; };

  std::vector<double> prox;
  if (proximity_weight > 0.0) {
    const std::vector<double> clearance = clearance_map(grid);
    prox.resize(clearance.size());
    for (std::size_t i = 0; i < clearance.size(); ++i) {
      prox[i] = std::max(0.0, 1.0 - clearance[i] / proximity_horizon);
    }
  }
  const auto penalty = [&](int idx) {
    return proximity_weight > 0.0 ? proximity_weight * prox[idx] : 0.0;
  };

  const std::size_t n = grid.cells.size();
  std::vector<double> g(n, kInf);
  std::vector<int> parent(n, -1);
  std::vector<char> closed(n, 0);
  std::priority_queue<OpenItem, std::vector<OpenItem>, std::greater<OpenItem>> open;

  const int start_idx = idx_of(*sc);
  const int goal_idx = idx_of(*gc);
  g[start_idx] = 0.0;
  open.push({octile(*sc, *gc), octile(*sc, *gc), start_idx});

  while (!open.empty()) {
    const OpenItem top = open.top();
    open.pop();
    if (closed[top.idx]) continue;
    closed[top.idx] = 1;
    if (top.idx == goal_idx) break;

    const GridCoord c{top.idx % w, top.idx / w};
    for (int k = 0; k < 8; ++k) {
      const GridCoord nb{c.x + kDx[k], c.y + kDy[k]};
      if (!grid.in_bounds(nb) || grid.occupied(nb)) continue;
      const bool diagonal = k >= 4;
      if (diagonal) {
        // No corner cutting: both orthogonal neighbors must be free.
        if (grid.occupied({c.x + kDx[k], c.y}) ||
            grid.occupied({c.x, c.y + kDy[k]})) {
          continue;
        }
      }
      const int nb_idx = idx_of(nb);
      if (closed[nb_idx]) continue;
      const double cost = (diagonal ? kSqrt2 : 1.0) + penalty(nb_idx);
      const double cand = g[top.idx] + cost;
      if (cand < g[nb_idx]) {
        g[nb_idx] = cand;
        parent[nb_idx] = top.idx;
        const double h = octile(nb, *gc);
        open.push({cand + h, h, nb_idx});
      }
    }
  }

  if (!closed[goal_idx]) return NavError::NoPath;

  GridPath path;
  for (int at = goal_idx; at != -1; at = parent[at]) {
    path.cells.push_back({at % w, at / w});
  }
  std::reverse(path.cells.begin(), path.cells.end());

  // Canonical cost from the traced path: move counts plus entry penalties.
  double penalty_sum = 0.0;
  for (std::size_t i = 1; i < path.cells.size(); ++i) {
    const GridCoord prev = path.cells[i - 1];
    const GridCoord cur = path.cells[i];
    if (prev.x != cur.x && prev.y != cur.y) {
      ++path.diagonal_moves;
    } else {
      ++path.straight_moves;
    }
    penalty_sum += penalty(idx_of(cur));
  }
  path.cost = path.straight_moves + path.diagonal_moves * kSqrt2 + penalty_sum;
  path.waypoints = decimate(path.cells, grid);
  return path;
}

}  // namespace portmission
