#include "portmission/world.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace portmission {

using nlohmann::json;

Result<WorldState, GridError> with_grid(WorldState world) {
  std::vector<Polygon> footprints;
  footprints.reserve(world.static_obstacles.size());
  for (const StaticObstacle& o : world.static_obstacles) {
    footprints.push_back(o.footprint);
  }
  auto grid = build_grid(footprints, world.bounds, world.grid_resolution,
                         world.grid_inflation);
  if (!grid) return grid.error();
  world.grid = std::move(grid.value());
  return world;
}

namespace {

Mover advance_mover(Mover m, double dt) {
  if (m.waypoints.size() < 2 || m.speed <= 0.0) return m;
  double remaining = m.speed * dt;
  std::size_t hops = 0;
  while (remaining > 1e-12 && hops <= m.waypoints.size() + 1) {
    const Vec2 tgt = m.waypoints[m.target];
    const Vec2 d = tgt - m.position;
    const double dist = d.norm();
    if (dist > remaining) {
      m.position = m.position + d * (remaining / dist);
      remaining = 0.0;
    } else {
      m.position = tgt;
      remaining -= dist;
      m.target = (m.target + 1) % m.waypoints.size();
      ++hops;
    }
  }
  return m;
}

void note(std::vector<std::string>* events, const std::string& what) {
  if (events) events->push_back(what);
}

}  // namespace

WorldState step(const WorldState& world, const UsvCommand& usv_cmd,
                const UavCommand& uav_cmd, std::vector<std::string>* events) {
  WorldState n = world;

  for (Mover& m : n.dynamic_obstacles) m = advance_mover(std::move(m), n.dt);

  n.usv = usv_step(world.usv, usv_cmd, n.dt);

  if (n.uav_on_deck) {
    // The UAV rides the carrier until Takeoff releases it.
    n.uav.p = {n.usv.x, n.usv.y, 0.5};
    n.uav.vel = {};
  } else {
    n.uav = uav_step(world.uav, uav_cmd, n.dt);
  }

  const Bounds3& b = n.bounds;
  if (!b.contains_xy(n.usv.position())) {
    n.usv.x = std::clamp(n.usv.x, b.min.x, b.max.x);
    n.usv.y = std::clamp(n.usv.y, b.min.y, b.max.y);
    note(events, "usv clamped to workspace bounds");
  }
  if (!b.contains_xy(n.uav.p.xy()) || n.uav.p.z > b.max.z) {
    n.uav.p.x = std::clamp(n.uav.p.x, b.min.x, b.max.x);
    n.uav.p.y = std::clamp(n.uav.p.y, b.min.y, b.max.y);
    n.uav.p.z = std::min(n.uav.p.z, b.max.z);
    note(events, "uav clamped to workspace bounds");
  }

  n.tick = world.tick + 1;
  return n;
}

namespace {

struct Entity {
  std::string label;
  Vec3 position;
  int self_obstacle = -1;  // index into static_obstacles when it is one
};

bool sight_line_clear(const WorldState& world, const Vec3& from, const Vec3& to,
                      int skip_obstacle) {
  for (std::size_t i = 0; i < world.static_obstacles.size(); ++i) {
    if (static_cast<int>(i) == skip_obstacle) continue;
    const StaticObstacle& o = world.static_obstacles[i];
    for (double t : segment_polygon_crossings(from.xy(), to.xy(), o.footprint)) {
      const double z = from.z + t * (to.z - from.z);
      if (z < o.height) return false;
    }
  }
  return true;
}

}  // namespace

SceneObservation observe(const WorldState& world, Robot robot) {
  SceneObservation obs;
  obs.observer = robot;
  obs.frame_id = world.tick;
  if (robot == Robot::USV) {
    obs.pose = {world.usv.x, world.usv.y, 1.0};
    obs.yaw = world.usv.psi;
  } else {
    obs.pose = world.uav.p;
    obs.yaw = world.uav.psi;
  }

  std::vector<Entity> entities;
  for (std::size_t i = 0; i < world.static_obstacles.size(); ++i) {
    const StaticObstacle& o = world.static_obstacles[i];
    const Vec2 c = polygon_centroid(o.footprint);
    entities.push_back({o.label, {c.x, c.y, o.height * 0.5}, static_cast<int>(i)});
  }
  for (const Mover& m : world.dynamic_obstacles) {
    entities.push_back({m.label, {m.position.x, m.position.y, 0.5}, -1});
  }
  if (robot == Robot::USV) {
    if (!world.uav_on_deck) entities.push_back({"uav", world.uav.p, -1});
  } else {
    entities.push_back({"usv", {world.usv.x, world.usv.y, 0.5}, -1});
  }

  const double half_fov = world.camera.fov_deg * M_PI / 360.0;
  for (const Entity& e : entities) {
    const Vec3 d3 = e.position - obs.pose;
    const double range = d3.norm();
    if (range > world.camera.range || range < 1e-9) continue;

    const Vec2 d = d3.xy();
    const double horiz = d.norm();
    double bearing = 0.0;
    if (horiz >= 1.0) {
      bearing = wrap_angle(std::atan2(d.y, d.x) - obs.yaw);
      if (std::abs(bearing) > half_fov) continue;
    }
    if (!sight_line_clear(world, obs.pose, e.position, e.self_obstacle)) {
      continue;
    }
    obs.visible_entities.push_back({e.label, range, bearing});
  }
  return obs;
}

// ---------------------------------------------------------------------------

namespace {

json vec2_json(const Vec2& v) { return json::array({v.x, v.y}); }
json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec2 vec2_of(const json& j) { return {j[0].get<double>(), j[1].get<double>()}; }
Vec3 vec3_of(const json& j) {
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

Result<WorldState, ParseError> parse_world(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    return ParseError{ParseErrorKind::MalformedDocument, e.byte, e.what()};
  }

  WorldState w;
  try {
    if (doc.contains("bounds")) {
      w.bounds.min = vec3_of(doc.at("bounds").at("min"));
      w.bounds.max = vec3_of(doc.at("bounds").at("max"));
    }
    w.dt = doc.value("dt", 0.05);
    w.rng_seed = doc.value("seed", 0ULL);
    w.tick = doc.value("tick", 0L);
    if (doc.contains("grid")) {
      w.grid_resolution = doc.at("grid").value("resolution", 1.0);
      w.grid_inflation = doc.at("grid").value("inflation", 2.0);
    }
    if (doc.contains("camera")) {
      w.camera.range = doc.at("camera").value("range", 60.0);
      w.camera.fov_deg = doc.at("camera").value("fov_deg", 90.0);
    }
    for (const json& o : doc.value("static_obstacles", json::array())) {
      StaticObstacle so;
      so.label = o.at("label").get<std::string>();
      for (const json& v : o.at("footprint")) so.footprint.push_back(vec2_of(v));
      so.height = o.value("height", 10.0);
      w.static_obstacles.push_back(std::move(so));
    }
    for (const json& m : doc.value("dynamic_obstacles", json::array())) {
      Mover mv;
      mv.label = m.at("label").get<std::string>();
      for (const json& v : m.at("waypoints")) mv.waypoints.push_back(vec2_of(v));
      mv.speed = m.value("speed", 1.0);
      mv.position = m.contains("position") ? vec2_of(m.at("position"))
                                           : mv.waypoints.at(0);
      mv.target = m.value("target", std::size_t{0});
      w.dynamic_obstacles.push_back(std::move(mv));
    }
    const json landmarks = doc.value("landmarks", json::object());
    for (const auto& [name, pos] : landmarks.items()) {
      w.landmarks[name] = {pos[0].get<double>(), pos[1].get<double>(),
                           pos.size() > 2 ? pos[2].get<double>() : 0.0};
    }
    if (doc.contains("usv")) {
      const json& u = doc.at("usv");
      w.usv = {u.value("x", 0.0), u.value("y", 0.0), u.value("psi", 0.0),
               u.value("v", 0.0)};
    }
    if (doc.contains("uav")) {
      const json& u = doc.at("uav");
      if (u.contains("p")) w.uav.p = vec3_of(u.at("p"));
      if (u.contains("vel")) w.uav.vel = vec3_of(u.at("vel"));
      w.uav.psi = u.value("psi", 0.0);
      w.uav_on_deck = u.value("on_deck", true);
    }
  } catch (const json::exception& e) {
    return ParseError{ParseErrorKind::MalformedDocument, 0, e.what()};
  }

  for (const StaticObstacle& o : w.static_obstacles) {
    for (const Vec2& v : o.footprint) {
      if (!w.bounds.contains_xy(v)) {
        return ParseError{ParseErrorKind::MalformedDocument, 0,
                          "obstacle '" + o.label + "' vertex outside bounds"};
      }
    }
  }
  if (!w.bounds.contains_xy(w.usv.position())) {
    return ParseError{ParseErrorKind::MalformedDocument, 0,
                      "usv position outside bounds"};
  }

  auto ready = with_grid(std::move(w));
  if (!ready) {
    return ParseError{ParseErrorKind::MalformedDocument, 0,
                      "degenerate bounds or grid resolution"};
  }
  const WorldState& built = ready.value();
  if (const auto cell = built.grid.world_to_cell(built.usv.position());
      cell && built.grid.occupied(*cell)) {
    return ParseError{ParseErrorKind::MalformedDocument, 0,
                      "usv starts inside an inflated obstacle"};
  }
  return ready.value();
}

std::string serialize_world(const WorldState& w) {
  json doc;
  doc["bounds"] = {{"min", vec3_json(w.bounds.min)},
                   {"max", vec3_json(w.bounds.max)}};
  doc["dt"] = w.dt;
  doc["seed"] = w.rng_seed;
  doc["tick"] = w.tick;
  doc["grid"] = {{"resolution", w.grid_resolution},
                 {"inflation", w.grid_inflation}};
  doc["camera"] = {{"range", w.camera.range}, {"fov_deg", w.camera.fov_deg}};

  json statics = json::array();
  for (const StaticObstacle& o : w.static_obstacles) {
    json footprint = json::array();
    for (const Vec2& v : o.footprint) footprint.push_back(vec2_json(v));
    statics.push_back({{"label", o.label},
                       {"footprint", footprint},
                       {"height", o.height}});
  }
  doc["static_obstacles"] = statics;

  json movers = json::array();
  for (const Mover& m : w.dynamic_obstacles) {
    json wps = json::array();
    for (const Vec2& v : m.waypoints) wps.push_back(vec2_json(v));
    movers.push_back({{"label", m.label},
                      {"waypoints", wps},
                      {"speed", m.speed},
                      {"position", vec2_json(m.position)},
                      {"target", m.target}});
  }
  doc["dynamic_obstacles"] = movers;

  json lms = json::object();
  for (const auto& [name, pos] : w.landmarks) lms[name] = vec3_json(pos);
  doc["landmarks"] = lms;

  doc["usv"] = {{"x", w.usv.x}, {"y", w.usv.y}, {"psi", w.usv.psi}, {"v", w.usv.v}};
  doc["uav"] = {{"p", vec3_json(w.uav.p)},
                {"vel", vec3_json(w.uav.vel)},
                {"psi", w.uav.psi},
                {"on_deck", w.uav_on_deck}};
  return doc.dump(2) + "\n";
}

}  // namespace portmission
