#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "portmission/geometry.hpp"
#include "portmission/result.hpp"
#include "portmission/vehicles.hpp"

namespace portmission {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double integral_clamp = 1.0;

  bool operator==(const PidGains&) const = default;
};

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool primed = false;
};

double pid_step(const PidGains& g, PidState& st, double error, double dt);

/// Frozen default gains and guidance parameters. The shipped config file
/// (assets/config/control_defaults.json) mirrors these values; a test keeps
/// the two in sync.
struct ControlConfig {
  double dt = 0.05;

  UsvLimits usv_limits;
  UavLimits uav_limits;

  PidGains usv_surge{0.25, 0.0, 1.0, 2.0};
  PidGains usv_yaw{2.0, 0.0, 0.3, 1.0};
  double usv_capture_radius = 1.5;

  double uav_pos_kp = 1.0;
  double uav_vel_kp = 2.0;
  PidGains uav_yaw{2.0, 0.0, 0.0, 1.0};
  double uav_capture_radius = 0.5;
  double uav_settle_speed = 0.5;  // m/s, "arrived" velocity gate

  double orbit_rate = 0.2;       // rad/s parameter advance for Orbit360
  double takeoff_altitude = 15.0;
  double safe_return_altitude = 8.0;

  double landing_stationary_speed = 0.05;  // m/s USV must be slower than this
  double landing_align_tolerance = 0.3;    // m horizontal
  double landing_descent_rate = 0.5;       // m/s
  double landing_touchdown_tolerance = 0.1;
  double deck_height = 0.5;

  bool operator==(const ControlConfig&) const = default;
};

/// The shipped gain/limit file round-trips through these; a test pins the
/// file to the compiled defaults.
Result<ControlConfig, std::string> parse_control_config(std::string_view text);
std::string serialize_control_config(const ControlConfig& cfg);

// ---------------------------------------------------------------------------
// USV waypoint tracking (surge PID on along-track distance, yaw-rate PID on
// line-of-sight heading error, capture-radius waypoint advance).

struct UsvTracker {
  std::vector<Vec2> path;
  std::size_t active = 0;
  PidState surge_pid;
  PidState yaw_pid;
  bool complete = false;
};

UsvTracker make_usv_tracker(std::vector<Vec2> path);

/// One control tick. After the final waypoint is captured the tracker brakes
/// the vehicle to rest; `complete` stays true.
UsvCommand usv_track(const UsvState& s, UsvTracker& tracker,
                     const ControlConfig& cfg);

// ---------------------------------------------------------------------------
// UAV guidance: cascaded position -> velocity -> acceleration loops over a
// point target or a survey pattern.

struct PointTask {
  Vec3 target;
};

struct OrbitTask {
  Vec2 center;
  double radius = 0.0;
  double altitude = 0.0;
};

struct RectTask {
  std::array<Vec2, 4> corners{};
  double altitude = 0.0;
};

using GuidanceTask = std::variant<PointTask, OrbitTask, RectTask>;

struct UavGuidance {
  double orbit_angle = 0.0;
  double orbit_swept = -1.0;  // <0 until the first tick initialises the angle
  std::size_t rect_leg = 0;   // 0..4, leg 4 returns to corner 0
  bool complete = false;
};

UavCommand uav_guidance(const UavState& s, const GuidanceTask& task,
                        UavGuidance& st, const ControlConfig& cfg);

// ---------------------------------------------------------------------------
// Landing on a stationary USV: align above the deck, capped-rate descent,
// touchdown detection.

struct LandingTick {
  bool landed = false;
  UavCommand cmd;
};

enum class LandingError { CarrierMoving };

Result<LandingTick, LandingError> land_on_usv(const UavState& uav,
                                              const UsvState& usv,
                                              const ControlConfig& cfg);

}  // namespace portmission
