#include "portmission/occupancy_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace portmission {

std::optional<GridCoord> OccupancyGrid::world_to_cell(const Vec2& p) const {
  const int cx = static_cast<int>(std::floor((p.x - origin.x) / resolution));
  const int cy = static_cast<int>(std::floor((p.y - origin.y) / resolution));
  GridCoord c{cx, cy};
  if (!in_bounds(c)) return std::nullopt;
  return c;
}

Result<OccupancyGrid, GridError> build_grid(const std::vector<Polygon>& obstacles,
                                            const Bounds3& bounds,
                                            double resolution,
                                            double inflation) {
  if (resolution <= 0.0 || bounds.max.x <= bounds.min.x ||
      bounds.max.y <= bounds.min.y) {
    return GridError::DegenerateBounds;
  }

  OccupancyGrid g;
  g.resolution = resolution;
  g.origin = {bounds.min.x, bounds.min.y};
  g.width = static_cast<int>(std::ceil((bounds.max.x - bounds.min.x) / resolution));
  g.height = static_cast<int>(std::ceil((bounds.max.y - bounds.min.y) / resolution));
  g.inflation_radius = inflation;
  g.cells.assign(static_cast<std::size_t>(g.width) * g.height, 0);

  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      const Vec2 c = g.cell_center({x, y});
      for (const Polygon& poly : obstacles) {
        if (distance_to_polygon(c, poly) <= inflation) {
          g.cells[static_cast<std::size_t>(y) * g.width + x] = 1;
          break;
        }
      }
    }
  }
  return g;
}

namespace {

// Felzenszwalb-Huttenlocher 1D squared distance transform.
void edt_1d(const std::vector<double>& f, std::vector<double>& d) {
  const int n = static_cast<int>(f.size());
  d.assign(n, 0.0);
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dx = q - v[k];
    d[q] = dx * dx + f[v[k]];
  }
}

}  // namespace

std::vector<double> clearance_map(const OccupancyGrid& grid) {
  constexpr double kInf = 1e12;
  const int w = grid.width;
  const int h = grid.height;
  std::vector<double> sq(static_cast<std::size_t>(w) * h, kInf);
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    if (grid.cells[i]) sq[i] = 0.0;
  }

  std::vector<double> col(h), out(h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) col[y] = sq[static_cast<std::size_t>(y) * w + x];
    edt_1d(col, out);
    for (int y = 0; y < h; ++y) sq[static_cast<std::size_t>(y) * w + x] = out[y];
  }
  std::vector<double> row(w), rout(w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) row[x] = sq[static_cast<std::size_t>(y) * w + x];
    edt_1d(row, rout);
    for (int x = 0; x < w; ++x) {
      sq[static_cast<std::size_t>(y) * w + x] = rout[x];
    }
  }

  std::vector<double> meters(sq.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    meters[i] = std::sqrt(sq[i]) * grid.resolution;
  }
  return meters;
}

void write_pgm(const OccupancyGrid& grid, std::ostream& os) {
  os << "P2\n" << grid.width << " " << grid.height << "\n255\n";
  for (int y = grid.height - 1; y >= 0; --y) {
    for (int x = 0; x < grid.width; ++x) {
      os << (grid.occupied({x, y}) ? 40 : 255);
      os << (x + 1 == grid.width ? '\n' : ' ');
    }
  }
}

}  // namespace portmission
