#include "portmission/vehicles.hpp"

namespace portmission {

UsvState usv_step(const UsvState& s, const UsvCommand& cmd, double dt,
                  const UsvLimits& lim) {
  const double a = clamp_abs(cmd.a, lim.a_max);
  const double r = clamp_abs(cmd.r, lim.r_max);

  UsvState n = s;
  n.v = clamp_abs(s.v + a * dt, lim.v_max);
  n.psi = wrap_angle(s.psi + r * dt);
  n.x = s.x + n.v * std::cos(n.psi) * dt;
  n.y = s.y + n.v * std::sin(n.psi) * dt;
  return n;
}

UavState uav_step(const UavState& s, const UavCommand& cmd, double dt,
                  const UavLimits& lim) {
  const Vec3 u{clamp_abs(cmd.u.x, lim.u_max), clamp_abs(cmd.u.y, lim.u_max),
               clamp_abs(cmd.u.z, lim.u_max)};

  UavState n = s;
  n.vel = s.vel + u * dt;
  n.p = s.p + n.vel * dt;
  n.psi = wrap_angle(s.psi + clamp_abs(cmd.yaw_rate, lim.yaw_rate_max) * dt);
  if (n.p.z < 0.0) {
    n.p.z = 0.0;
    if (n.vel.z < 0.0) n.vel.z = 0.0;
  }
  return n;
}

}  // namespace portmission
