#pragma once

#include <map>
#include <string>
#include <vector>

#include "portmission/geometry.hpp"
#include "portmission/occupancy_grid.hpp"
#include "portmission/plan.hpp"
#include "portmission/result.hpp"
#include "portmission/vehicles.hpp"

namespace portmission {

struct StaticObstacle {
  std::string label;
  Polygon footprint;
  double height = 10.0;

  bool operator==(const StaticObstacle&) const = default;
};

/// Scripted mover: loops through its waypoints at constant speed.
struct Mover {
  std::string label;
  std::vector<Vec2> waypoints;
  double speed = 1.0;  // m/s
  Vec2 position;
  std::size_t target = 0;  // index of the waypoint currently steered for

  bool operator==(const Mover&) const = default;
};

struct CameraModel {
  double range = 60.0;
  double fov_deg = 90.0;

  bool operator==(const CameraModel&) const = default;
};

struct WorldState {
  Bounds3 bounds{{0, 0, 0}, {200, 160, 30}};
  std::vector<StaticObstacle> static_obstacles;
  std::vector<Mover> dynamic_obstacles;
  std::map<std::string, Vec3> landmarks;
  OccupancyGrid grid;
  double grid_resolution = 1.0;
  double grid_inflation = 2.0;
  UsvState usv;
  UavState uav;
  bool uav_on_deck = true;
  CameraModel camera;
  long tick = 0;
  double dt = 0.05;
  std::uint64_t rng_seed = 0;

  bool operator==(const WorldState&) const = default;
};

/// Rebuilds the occupancy grid from the static obstacle footprints.
Result<WorldState, GridError> with_grid(WorldState world);

/// Advances movers along their scripts and integrates both vehicles by one
/// tick. Pure: same inputs give a bitwise-identical successor. Boundary
/// violations clamp the offender and append a note to `events` when given.
WorldState step(const WorldState& world, const UsvCommand& usv_cmd,
                const UavCommand& uav_cmd,
                std::vector<std::string>* events = nullptr);

struct VisibleEntity {
  std::string label;
  double range = 0.0;    // m
  double bearing = 0.0;  // rad, relative to the observer's yaw
  bool operator==(const VisibleEntity&) const = default;
};

struct SceneObservation {
  Robot observer = Robot::UAV;
  Vec3 pose;
  double yaw = 0.0;
  std::vector<VisibleEntity> visible_entities;
  long frame_id = 0;
};

/// Deterministic visibility: within camera range and field of view, and the
/// sight line is not blocked by a static obstacle (height-aware, so a UAV
/// looking down past an obstacle top is not occluded by it).
SceneObservation observe(const WorldState& world, Robot robot);

Result<WorldState, ParseError> parse_world(std::string_view document);
std::string serialize_world(const WorldState& world);

}  // namespace portmission
