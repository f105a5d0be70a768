#pragma once

#include "portmission/geometry.hpp"

namespace portmission {

struct UsvLimits {
  double v_max = 3.0;   // m/s surge
  double a_max = 1.0;   // m/s^2
  double r_max = 0.6;   // rad/s yaw rate

  bool operator==(const UsvLimits&) const = default;
};

struct UavLimits {
  double u_max = 2.0;        // m/s^2 per axis
  double v_max = 4.0;        // m/s velocity-setpoint clamp per axis
  double yaw_rate_max = 1.0;  // rad/s

  bool operator==(const UavLimits&) const = default;
};

/// Differential-drive surface vehicle state [x, y, psi, v].
struct UsvState {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;  // wrapped to (-pi, pi]
  double v = 0.0;

  Vec2 position() const { return {x, y}; }
  bool operator==(const UsvState&) const = default;
};

struct UsvCommand {
  double a = 0.0;  // surge acceleration
  double r = 0.0;  // yaw rate

  bool operator==(const UsvCommand&) const = default;
};

/// Point-mass aerial vehicle: position, velocity, independent yaw.
struct UavState {
  Vec3 p;
  Vec3 vel;
  double psi = 0.0;

  bool operator==(const UavState&) const = default;
};

struct UavCommand {
  Vec3 u;               // commanded accelerations, NED convention
  double yaw_rate = 0.0;

  bool operator==(const UavCommand&) const = default;
};

/// Semi-implicit Euler update of the unicycle model: velocity and heading
/// first, position with the updated values. Saturates surge speed, wraps yaw.
UsvState usv_step(const UsvState& s, const UsvCommand& cmd, double dt,
                  const UsvLimits& lim = {});

/// Semi-implicit Euler double integrator per axis; yaw integrates its own
/// rate command. Altitude is clamped at ground level.
UavState uav_step(const UavState& s, const UavCommand& cmd, double dt,
                  const UavLimits& lim = {});

}  // namespace portmission
