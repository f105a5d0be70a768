#include "portmission/executors.hpp"

#include <cmath>

#include "portmission/nav_planner.hpp"

namespace portmission {

namespace {

constexpr double kUsvRestSpeed = 0.02;       // m/s, "braked" threshold
constexpr double kNavProximityWeight = 1.0;  // A* obstacle-proximity penalty

std::optional<Vec2> resolve_usv_target(const SymbolicAction& step,
                                       const WorldState& world) {
  if (step.theta.pattern() == PatternTag::Point) {
    const auto& p = std::get<PointParams>(step.theta.geometry);
    if (p.target) return p.target;
  }
  // Dock and GoHome are Navigate specialisations onto the PortDock landmark.
  if (const auto it = world.landmarks.find("PortDock");
      it != world.landmarks.end()) {
    return Vec2{it->second.x, it->second.y};
  }
  return std::nullopt;
}

long dwell_ticks(const SymbolicAction& step, const ControlConfig& cfg,
                 double fallback_s) {
  const double secs = step.theta.dwell_s > 0.0 ? step.theta.dwell_s : fallback_s;
  return static_cast<long>(std::lround(secs / cfg.dt));
}

const char* nav_error_name(NavError e) {
  switch (e) {
    case NavError::NoPath: return "no_path";
    case NavError::StartOccupied: return "start_occupied";
    case NavError::GoalOccupied: return "goal_occupied";
  }
  return "nav_error";
}

/// Inspections frame the nearest structure: bearing from `from` to the
/// closest static obstacle centroid, when one is in camera reach.
std::optional<double> inspection_bearing(const WorldState& world,
                                         const Vec2& from) {
  double best = world.camera.range * 1.5;
  std::optional<double> bearing;
  for (const StaticObstacle& o : world.static_obstacles) {
    const Vec2 c = polygon_centroid(o.footprint);
    const double d = (c - from).norm();
    if (d < best) {
      best = d;
      bearing = std::atan2(c.y - from.y, c.x - from.x);
    }
  }
  return bearing;
}

}  // namespace

UavCommand uav_hold_command(const UavState& state, const ControlConfig& cfg) {
  const UavLimits& lim = cfg.uav_limits;
  UavCommand cmd;
  cmd.u = {clamp_abs(-state.vel.x * cfg.uav_vel_kp, lim.u_max),
           clamp_abs(-state.vel.y * cfg.uav_vel_kp, lim.u_max),
           clamp_abs(-state.vel.z * cfg.uav_vel_kp, lim.u_max)};
  return cmd;
}

UsvCommand usv_hold_command(const UsvState& state, const ControlConfig& cfg) {
  return {clamp_abs(-state.v / cfg.dt, cfg.usv_limits.a_max), 0.0};
}

Result<std::unique_ptr<ActionExecutor>, std::string> ActionExecutor::create(
    const SymbolicAction& step, const WorldState& world,
    const ControlConfig& cfg) {
  std::unique_ptr<ActionExecutor> exec(new ActionExecutor(step, cfg));

  if (step.action == ActionKind::Record || step.action == ActionKind::Report) {
    exec->instantaneous_ = true;
    return exec;
  }

  if (step.robot == Robot::USV) {
    std::vector<Vec2> route;
    switch (step.action) {
      case ActionKind::Navigate:
      case ActionKind::Dock:
      case ActionKind::GoHome:
      case ActionKind::Inspect: {
        const auto target = resolve_usv_target(step, world);
        if (!target) return std::string("no navigation target");
        auto path = plan_path(world.grid, world.usv.position(), *target,
                              kNavProximityWeight);
        if (!path) return std::string(nav_error_name(path.error()));
        route = path.value().waypoints;
        break;
      }
      case ActionKind::Survey: {
        if (step.theta.pattern() == PatternTag::Orbit360) {
          return std::string("orbit survey is not supported for the USV");
        }
        std::vector<Vec2> pattern;
        if (step.theta.pattern() == PatternTag::Rectangle) {
          const auto& r = std::get<RectParams>(step.theta.geometry);
          pattern.assign(r.vertices.begin(), r.vertices.end());
          pattern.push_back(r.vertices.front());
        } else if (const auto t = resolve_usv_target(step, world)) {
          pattern.push_back(*t);
        }
        Vec2 from = world.usv.position();
        for (const Vec2& wp : pattern) {
          auto leg = plan_path(world.grid, from, wp, kNavProximityWeight);
          if (!leg) return std::string(nav_error_name(leg.error()));
          route.insert(route.end(), leg.value().waypoints.begin(),
                       leg.value().waypoints.end());
          from = wp;
        }
        break;
      }
      case ActionKind::Hover:
        break;  // station keeping only
      default:
        return std::string("action not executable by the USV");
    }
    exec->tracker_ = make_usv_tracker(std::move(route));
    if (step.action == ActionKind::Inspect) {
      exec->dwell_ticks_ = dwell_ticks(step, cfg, 1.0);
    } else if (step.action == ActionKind::Hover) {
      exec->dwell_ticks_ = dwell_ticks(step, cfg, 1.0);
    }
    return exec;
  }

  // UAV actions; guidance tasks that depend on the live pose are finished
  // lazily on the first tick.
  switch (step.action) {
    case ActionKind::Takeoff:
      break;
    case ActionKind::FlyTo: {
      const auto& p = std::get<PointParams>(step.theta.geometry);
      if (!p.target) return std::string("FlyTo requires a target");
      const double alt = p.altitude > 0.0 ? p.altitude : cfg.takeoff_altitude;
      exec->task_ = PointTask{{p.target->x, p.target->y, alt}};
      exec->task_ready_ = true;
      break;
    }
    case ActionKind::Survey: {
      if (step.theta.pattern() == PatternTag::Orbit360) {
        const auto& o = std::get<OrbitParams>(step.theta.geometry);
        exec->task_ = OrbitTask{o.center, o.radius,
                                o.altitude > 0.0 ? o.altitude : cfg.takeoff_altitude};
        exec->task_ready_ = true;
      } else if (step.theta.pattern() == PatternTag::Rectangle) {
        const auto& r = std::get<RectParams>(step.theta.geometry);
        RectTask task;
        task.corners = r.vertices;
        task.altitude = r.altitude > 0.0 ? r.altitude : cfg.takeoff_altitude;
        exec->task_ = task;
        exec->task_ready_ = true;
      } else {
        const auto& p = std::get<PointParams>(step.theta.geometry);
        if (!p.target) return std::string("Survey point requires a target");
        exec->task_ = PointTask{{p.target->x, p.target->y,
                                 p.altitude > 0.0 ? p.altitude : cfg.takeoff_altitude}};
        exec->task_ready_ = true;
        exec->dwell_ticks_ = dwell_ticks(step, cfg, 1.0);
      }
      break;
    }
    case ActionKind::Hover:
      exec->dwell_ticks_ = dwell_ticks(step, cfg, 1.0);
      break;
    case ActionKind::Inspect: {
      const auto& p = std::get<PointParams>(step.theta.geometry);
      if (p.target) {
        exec->task_ = PointTask{{p.target->x, p.target->y,
                                 p.altitude > 0.0 ? p.altitude : cfg.takeoff_altitude}};
        exec->task_ready_ = true;
      }
      exec->dwell_ticks_ = dwell_ticks(step, cfg, 1.0);
      break;
    }
    case ActionKind::LandOnUSV:
      break;
    default:
      return std::string("action not executable by the UAV");
  }
  return exec;
}

ExecTick ActionExecutor::tick(const WorldState& world) {
  if (instantaneous_) {
    ExecTick out;
    out.phase = ExecPhase::Done;
    if (step_.robot == Robot::USV) {
      out.usv_cmd = usv_hold_command(world.usv, cfg_);
    } else if (!world.uav_on_deck) {
      out.uav_cmd = uav_hold_command(world.uav, cfg_);
    }
    return out;
  }
  return step_.robot == Robot::USV ? tick_usv(world) : tick_uav(world);
}

ExecTick ActionExecutor::tick_usv(const WorldState& world) {
  ExecTick out;
  out.usv_cmd = usv_track(world.usv, tracker_, cfg_);
  if (!tracker_.complete) return out;
  if (std::abs(world.usv.v) > kUsvRestSpeed) return out;  // still braking

  if (step_.action == ActionKind::Inspect && !in_position_) {
    // Rotate in place until the camera frames the nearest structure.
    if (const auto bearing = inspection_bearing(world, world.usv.position())) {
      const double err = wrap_angle(*bearing - world.usv.psi);
      if (std::abs(err) > 0.1) {
        out.usv_cmd = {0.0, clamp_abs(cfg_.usv_yaw.kp * err,
                                      cfg_.usv_limits.r_max)};
        return out;
      }
    }
    in_position_ = true;
  }

  if (dwell_ticks_ > 0) {
    --dwell_ticks_;
    return out;
  }
  out.phase = ExecPhase::Done;
  return out;
}

ExecTick ActionExecutor::tick_uav(const WorldState& world) {
  ExecTick out;

  if (step_.action == ActionKind::LandOnUSV) {
    auto landing = land_on_usv(world.uav, world.usv, cfg_);
    if (!landing) {
      out.phase = ExecPhase::Failed;
      out.fail_reason = "carrier_moving";
      return out;
    }
    if (landing.value().landed) {
      out.phase = ExecPhase::Done;
      out.touch_down = true;
      return out;
    }
    out.uav_cmd = landing.value().cmd;
    return out;
  }

  if (!task_ready_) {
    // Pose-relative targets resolve on the first tick.
    if (step_.action == ActionKind::Takeoff) {
      double alt = cfg_.takeoff_altitude;
      if (step_.theta.pattern() == PatternTag::Point) {
        const auto& p = std::get<PointParams>(step_.theta.geometry);
        if (p.altitude > 0.0) alt = p.altitude;
      }
      task_ = PointTask{{world.uav.p.x, world.uav.p.y, alt}};
    } else {
      task_ = PointTask{world.uav.p};  // Hover / targetless Inspect hold here
    }
    task_ready_ = true;
  }

  if (world.uav_on_deck) out.release_deck = true;

  out.uav_cmd = uav_guidance(world.uav, task_, guidance_, cfg_);

  if (step_.action == ActionKind::Inspect) {
    if (const auto bearing = inspection_bearing(world, world.uav.p.xy())) {
      out.uav_cmd.yaw_rate =
          clamp_abs(cfg_.uav_yaw.kp * wrap_angle(*bearing - world.uav.psi),
                    cfg_.uav_limits.yaw_rate_max);
    }
  }

  if (!guidance_.complete) return out;

  if (step_.action == ActionKind::Inspect && !in_position_) {
    if (const auto bearing = inspection_bearing(world, world.uav.p.xy())) {
      if (std::abs(wrap_angle(*bearing - world.uav.psi)) > 0.1) return out;
    }
    in_position_ = true;
  }

  if (dwell_ticks_ > 0) {
    --dwell_ticks_;
    return out;
  }
  out.phase = ExecPhase::Done;
  return out;
}

}  // namespace portmission
