#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "portmission/geometry.hpp"
#include "portmission/result.hpp"

namespace portmission {

struct GridCoord {
  int x = 0;
  int y = 0;
  bool operator==(const GridCoord&) const = default;
};

struct OccupancyGrid {
  double resolution = 1.0;  // meters per cell
  int width = 0;
  int height = 0;
  Vec2 origin;  // world position of the lower-left grid corner
  double inflation_radius = 0.0;
  std::vector<std::uint8_t> cells;  // row-major, 1 = occupied

  bool in_bounds(GridCoord c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  }
  bool occupied(GridCoord c) const {
    return cells[static_cast<std::size_t>(c.y) * width + c.x] != 0;
  }
  Vec2 cell_center(GridCoord c) const {
    return {origin.x + (c.x + 0.5) * resolution,
            origin.y + (c.y + 0.5) * resolution};
  }
  std::optional<GridCoord> world_to_cell(const Vec2& p) const;

  bool operator==(const OccupancyGrid&) const = default;
};

enum class GridError { DegenerateBounds };

/// Rasterises obstacle footprints: a cell is occupied iff its center lies
/// inside a polygon or within `inflation` meters of one. Pure function of
/// its inputs and independent of polygon vertex order.
Result<OccupancyGrid, GridError> build_grid(const std::vector<Polygon>& obstacles,
                                            const Bounds3& bounds,
                                            double resolution,
                                            double inflation);

/// Meters from each cell center to the nearest occupied cell center
/// (exact Euclidean distance transform). Occupied cells map to 0.
std::vector<double> clearance_map(const OccupancyGrid& grid);

/// PGM (P2) raster: occupied cells dark, free cells white, row 0 at the top.
void write_pgm(const OccupancyGrid& grid, std::ostream& os);

}  // namespace portmission
