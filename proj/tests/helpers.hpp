#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "portmission/clients.hpp"
#include "portmission/plan.hpp"
#include "portmission/world.hpp"

namespace pmtest {

using namespace portmission;

inline std::string asset_path(const std::string& rel) {
  return std::string(PM_ASSETS) + "/" + rel;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Obstacle-free world with the USV/UAV docked at (15, 15).
inline WorldState open_water_world(double side = 120.0) {
  WorldState w;
  w.bounds = {{0, 0, 0}, {side, side, 30}};
  w.landmarks["PortDock"] = {15, 15, 0};
  w.usv = {15, 15, 0, 0};
  w.uav = {{15, 15, 0.5}, {}, 0};
  w.uav_on_deck = true;
  return with_grid(std::move(w)).value();
}

inline WorldState default_port_world() {
  auto w = parse_world(slurp(asset_path("worlds/port_default.json")));
  return w.value();
}

inline MissionRequest basic_request(const WorldState& w,
                                    std::string instruction) {
  MissionRequest req;
  req.instruction = std::move(instruction);
  req.environment.summary = "test water";
  req.environment.bounds = w.bounds;
  for (const auto& [name, pos] : w.landmarks) {
    req.environment.landmarks.push_back({name, pos});
  }
  req.knowledge = {"max_altitude: 20"};
  req.allowed_actions.insert(kAllActions.begin(), kAllActions.end());
  return req;
}

inline SymbolicAction act(int id, ActionKind kind, Robot robot,
                          std::initializer_list<int> pre = {}) {
  SymbolicAction s;
  s.id = id;
  s.action = kind;
  s.robot = robot;
  s.preconditions = pre;
  if (kind == ActionKind::Inspect) s.queries = {"Is there any boat here?"};
  return s;
}

inline void set_target(SymbolicAction& s, Vec2 target, double altitude = 0.0) {
  PointParams p;
  p.target = target;
  p.altitude = altitude;
  s.theta.geometry = p;
}

inline MissionPlan golden_plan() {
  return parse_plan(slurp(asset_path("plans/crane_inspection_golden.json")))
      .value();
}

/// Random structured plan: a UAV chain and a USV chain with optional extra
/// forward cross-edges. Always acyclic, always robot-consistent, targets in
/// free water near the start so execution stays quick.
inline MissionPlan fuzz_plan(std::mt19937& rng, const WorldState& world,
                             int max_steps = 20) {
  std::uniform_int_distribution<int> len_dist(1, std::max(1, max_steps / 2 - 1));
  std::uniform_real_distribution<double> offset(-18.0, 18.0);
  std::uniform_real_distribution<double> alt_dist(6.0, 16.0);
  std::uniform_int_distribution<int> coin(0, 1);

  const Vec2 home{world.usv.x, world.usv.y};
  const auto free_point = [&]() {
    for (int tries = 0; tries < 100; ++tries) {
      Vec2 p{home.x + 25.0 + offset(rng), home.y + 25.0 + offset(rng)};
      const auto cell = world.grid.world_to_cell(p);
      if (cell && !world.grid.occupied(*cell)) return p;
    }
    return home;
  };

  MissionPlan plan;
  plan.mission_id = "fuzz";
  int id = 0;

  const int uav_moves = len_dist(rng);
  const int usv_moves = len_dist(rng);

  // UAV chain: Takeoff then moves.
  std::vector<int> uav_chain;
  {
    SymbolicAction takeoff = act(id++, ActionKind::Takeoff, Robot::UAV);
    takeoff.theta.geometry = PointParams{std::nullopt, alt_dist(rng)};
    uav_chain.push_back(takeoff.id);
    plan.steps.push_back(takeoff);
    for (int i = 0; i < uav_moves; ++i) {
      SymbolicAction move =
          coin(rng) ? act(id, ActionKind::FlyTo, Robot::UAV)
                    : act(id, ActionKind::Hover, Robot::UAV);
      move.id = id;
      move.preconditions = {uav_chain.back()};
      if (move.action == ActionKind::FlyTo) {
        set_target(move, free_point(), alt_dist(rng));
      } else {
        move.theta.dwell_s = 0.5;
      }
      uav_chain.push_back(id);
      plan.steps.push_back(move);
      ++id;
    }
  }

  // USV chain: navigations and holds.
  std::vector<int> usv_chain;
  for (int i = 0; i < usv_moves; ++i) {
    SymbolicAction move = coin(rng) ? act(id, ActionKind::Navigate, Robot::USV)
                                    : act(id, ActionKind::Hover, Robot::USV);
    move.id = id;
    if (!usv_chain.empty()) move.preconditions = {usv_chain.back()};
    if (move.action == ActionKind::Navigate) {
      set_target(move, free_point());
    } else {
      move.theta.dwell_s = 0.5;
    }
    usv_chain.push_back(id);
    plan.steps.push_back(move);
    ++id;
  }

  // Extra forward cross-edges keep the graph a DAG.
  std::uniform_int_distribution<int> node(0, id - 1);
  const int extra = std::uniform_int_distribution<int>(0, 3)(rng);
  for (int i = 0; i < extra; ++i) {
    const int a = node(rng);
    const int b = node(rng);
    if (a < b) plan.steps[b].preconditions.insert(a);
    if (b < a) plan.steps[a].preconditions.insert(b);
  }
  return plan;
}

}  // namespace pmtest
