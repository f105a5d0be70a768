#include "portmission/control.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace portmission {

namespace {

using nlohmann::json;

json gains_json(const PidGains& g) {
  return {{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd},
          {"integral_clamp", g.integral_clamp}};
}

PidGains gains_of(const json& j, const PidGains& fallback) {
  PidGains g = fallback;
  g.kp = j.value("kp", g.kp);
  g.ki = j.value("ki", g.ki);
  g.kd = j.value("kd", g.kd);
  g.integral_clamp = j.value("integral_clamp", g.integral_clamp);
  return g;
}

}  // namespace

Result<ControlConfig, std::string> parse_control_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    return std::string(e.what());
  }
  ControlConfig c;
  try {
    c.dt = doc.value("dt", c.dt);
    if (doc.contains("usv_limits")) {
      const json& j = doc.at("usv_limits");
      c.usv_limits.v_max = j.value("v_max", c.usv_limits.v_max);
      c.usv_limits.a_max = j.value("a_max", c.usv_limits.a_max);
      c.usv_limits.r_max = j.value("r_max", c.usv_limits.r_max);
    }
    if (doc.contains("uav_limits")) {
      const json& j = doc.at("uav_limits");
      c.uav_limits.u_max = j.value("u_max", c.uav_limits.u_max);
      c.uav_limits.v_max = j.value("v_max", c.uav_limits.v_max);
      c.uav_limits.yaw_rate_max = j.value("yaw_rate_max", c.uav_limits.yaw_rate_max);
    }
    if (doc.contains("usv_surge")) c.usv_surge = gains_of(doc.at("usv_surge"), c.usv_surge);
    if (doc.contains("usv_yaw")) c.usv_yaw = gains_of(doc.at("usv_yaw"), c.usv_yaw);
    if (doc.contains("uav_yaw")) c.uav_yaw = gains_of(doc.at("uav_yaw"), c.uav_yaw);
    c.usv_capture_radius = doc.value("usv_capture_radius", c.usv_capture_radius);
    c.uav_pos_kp = doc.value("uav_pos_kp", c.uav_pos_kp);
    c.uav_vel_kp = doc.value("uav_vel_kp", c.uav_vel_kp);
    c.uav_capture_radius = doc.value("uav_capture_radius", c.uav_capture_radius);
    c.uav_settle_speed = doc.value("uav_settle_speed", c.uav_settle_speed);
    c.orbit_rate = doc.value("orbit_rate", c.orbit_rate);
    c.takeoff_altitude = doc.value("takeoff_altitude", c.takeoff_altitude);
    c.safe_return_altitude = doc.value("safe_return_altitude", c.safe_return_altitude);
    c.landing_stationary_speed =
        doc.value("landing_stationary_speed", c.landing_stationary_speed);
    c.landing_align_tolerance =
        doc.value("landing_align_tolerance", c.landing_align_tolerance);
    c.landing_descent_rate = doc.value("landing_descent_rate", c.landing_descent_rate);
    c.landing_touchdown_tolerance =
        doc.value("landing_touchdown_tolerance", c.landing_touchdown_tolerance);
    c.deck_height = doc.value("deck_height", c.deck_height);
  } catch (const json::exception& e) {
    return std::string(e.what());
  }
  return c;
}

std::string serialize_control_config(const ControlConfig& c) {
  json doc;
  doc["dt"] = c.dt;
  doc["usv_limits"] = {{"v_max", c.usv_limits.v_max},
                       {"a_max", c.usv_limits.a_max},
                       {"r_max", c.usv_limits.r_max}};
  doc["uav_limits"] = {{"u_max", c.uav_limits.u_max},
                       {"v_max", c.uav_limits.v_max},
                       {"yaw_rate_max", c.uav_limits.yaw_rate_max}};
  doc["usv_surge"] = gains_json(c.usv_surge);
  doc["usv_yaw"] = gains_json(c.usv_yaw);
  doc["uav_yaw"] = gains_json(c.uav_yaw);
  doc["usv_capture_radius"] = c.usv_capture_radius;
  doc["uav_pos_kp"] = c.uav_pos_kp;
  doc["uav_vel_kp"] = c.uav_vel_kp;
  doc["uav_capture_radius"] = c.uav_capture_radius;
  doc["uav_settle_speed"] = c.uav_settle_speed;
  doc["orbit_rate"] = c.orbit_rate;
  doc["takeoff_altitude"] = c.takeoff_altitude;
  doc["safe_return_altitude"] = c.safe_return_altitude;
  doc["landing_stationary_speed"] = c.landing_stationary_speed;
  doc["landing_align_tolerance"] = c.landing_align_tolerance;
  doc["landing_descent_rate"] = c.landing_descent_rate;
  doc["landing_touchdown_tolerance"] = c.landing_touchdown_tolerance;
  doc["deck_height"] = c.deck_height;
  return doc.dump(2) + "\n";
}

double pid_step(const PidGains& g, PidState& st, double error, double dt) {
  st.integral = clamp_abs(st.integral + error * dt, g.integral_clamp);
  double deriv = 0.0;
  if (st.primed && dt > 0.0) deriv = (error - st.prev_error) / dt;
  st.prev_error = error;
  st.primed = true;
  return g.kp * error + g.ki * st.integral + g.kd * deriv;
}

UsvTracker make_usv_tracker(std::vector<Vec2> path) {
  UsvTracker t;
  t.path = std::move(path);
  t.complete = t.path.empty();
  return t;
}

UsvCommand usv_track(const UsvState& s, UsvTracker& t, const ControlConfig& cfg) {
  const UsvLimits& lim = cfg.usv_limits;
  const Vec2 pos = s.position();

  while (!t.complete && t.active < t.path.size() &&
         (t.path[t.active] - pos).norm() <= cfg.usv_capture_radius) {
    ++t.active;
  }
  if (t.active >= t.path.size()) t.complete = true;

  if (t.complete) {
    // Brake to rest so the deck is stationary for landing.
    return {clamp_abs(-s.v / cfg.dt, lim.a_max), 0.0};
  }

  const Vec2 d = t.path[t.active] - pos;
  const double dist = d.norm();
  const double heading_err = wrap_angle(std::atan2(d.y, d.x) - s.psi);
  const double along_track = dist * std::cos(heading_err);

  UsvCommand cmd;
  cmd.a = clamp_abs(pid_step(cfg.usv_surge, t.surge_pid, along_track, cfg.dt),
                    lim.a_max);
  cmd.r = clamp_abs(pid_step(cfg.usv_yaw, t.yaw_pid, heading_err, cfg.dt),
                    lim.r_max);
  return cmd;
}

namespace {

UavCommand cascade(const UavState& s, const Vec3& p_ref, const Vec3& v_ref,
                   double yaw_ref, const ControlConfig& cfg) {
  const UavLimits& lim = cfg.uav_limits;
  Vec3 v_sp = (p_ref - s.p) * cfg.uav_pos_kp + v_ref;
  v_sp = {clamp_abs(v_sp.x, lim.v_max), clamp_abs(v_sp.y, lim.v_max),
          clamp_abs(v_sp.z, lim.v_max)};
  const Vec3 u = (v_sp - s.vel) * cfg.uav_vel_kp;

  UavCommand cmd;
  cmd.u = {clamp_abs(u.x, lim.u_max), clamp_abs(u.y, lim.u_max),
           clamp_abs(u.z, lim.u_max)};
  cmd.yaw_rate = clamp_abs(cfg.uav_yaw.kp * wrap_angle(yaw_ref - s.psi),
                           lim.yaw_rate_max);
  return cmd;
}

double bearing_or_hold(const UavState& s, const Vec2& toward) {
  const Vec2 d = toward - s.p.xy();
  return d.norm() > 1.0 ? std::atan2(d.y, d.x) : s.psi;
}

}  // namespace

UavCommand uav_guidance(const UavState& s, const GuidanceTask& task,
                        UavGuidance& st, const ControlConfig& cfg) {
  if (const auto* pt = std::get_if<PointTask>(&task)) {
    if ((s.p - pt->target).norm() <= cfg.uav_capture_radius &&
        s.vel.norm() <= cfg.uav_settle_speed) {
      st.complete = true;
    }
    return cascade(s, pt->target, {}, bearing_or_hold(s, pt->target.xy()), cfg);
  }

  if (const auto* orbit = std::get_if<OrbitTask>(&task)) {
    if (st.orbit_swept < 0.0) {
      const Vec2 rel = s.p.xy() - orbit->center;
      st.orbit_angle =
          rel.norm() > 1e-6 ? std::atan2(rel.y, rel.x) : 0.0;
      st.orbit_swept = 0.0;
    }
    st.orbit_angle += cfg.orbit_rate * cfg.dt;
    st.orbit_swept += cfg.orbit_rate * cfg.dt;
    if (st.orbit_swept >= 2.0 * M_PI) st.complete = true;

    const double ca = std::cos(st.orbit_angle);
    const double sa = std::sin(st.orbit_angle);
    const Vec3 p_ref{orbit->center.x + orbit->radius * ca,
                     orbit->center.y + orbit->radius * sa, orbit->altitude};
    // Feed the reference tangential velocity forward; pure position
    // feedback lags a moving reference.
    const double v_t = orbit->radius * cfg.orbit_rate;
    const Vec3 v_ref{-v_t * sa, v_t * ca, 0.0};
    const Vec2 to_center = orbit->center - s.p.xy();
    const double yaw_ref = std::atan2(to_center.y, to_center.x);
    return cascade(s, p_ref, v_ref, yaw_ref, cfg);
  }

  const auto& rect = std::get<RectTask>(task);
  const Vec2 corner = rect.corners[st.rect_leg % 4];
  const Vec3 target{corner.x, corner.y, rect.altitude};
  const bool last_leg = st.rect_leg >= 4;
  const bool captured =
      last_leg ? (s.p - target).norm() <= cfg.uav_capture_radius &&
                     s.vel.norm() <= cfg.uav_settle_speed
               : (s.p - target).norm() <= cfg.uav_capture_radius;
  if (captured) {
    if (last_leg) {
      st.complete = true;
    } else {
      ++st.rect_leg;
    }
  }
  return cascade(s, target, {}, bearing_or_hold(s, corner), cfg);
}

Result<LandingTick, LandingError> land_on_usv(const UavState& uav,
                                              const UsvState& usv,
                                              const ControlConfig& cfg) {
  if (std::abs(usv.v) > cfg.landing_stationary_speed) {
    return LandingError::CarrierMoving;
  }

  const Vec2 deck{usv.x, usv.y};
  const double horiz_err = (deck - uav.p.xy()).norm();
  const bool aligned = horiz_err <= cfg.landing_align_tolerance;

  if (aligned &&
      uav.p.z <= cfg.deck_height + cfg.landing_touchdown_tolerance) {
    return LandingTick{true, {}};
  }

  const UavLimits& lim = cfg.uav_limits;
  Vec3 v_sp{clamp_abs((deck.x - uav.p.x) * cfg.uav_pos_kp, lim.v_max),
            clamp_abs((deck.y - uav.p.y) * cfg.uav_pos_kp, lim.v_max), 0.0};
  if (aligned) {
    const double gap = std::max(0.0, uav.p.z - cfg.deck_height);
    v_sp.z = -std::min(cfg.landing_descent_rate, gap * cfg.uav_pos_kp);
  }

  const Vec3 u = (v_sp - uav.vel) * cfg.uav_vel_kp;
  LandingTick tick;
  tick.cmd.u = {clamp_abs(u.x, lim.u_max), clamp_abs(u.y, lim.u_max),
                clamp_abs(u.z, lim.u_max)};
  return tick;
}

}  // namespace portmission
