#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace portmission {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }

  bool operator==(const Vec2&) const = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Vec2 xy() const { return {x, y}; }

  bool operator==(const Vec3&) const = default;
};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

inline double clamp_abs(double v, double limit) {
  if (v > limit) return limit;
  if (v < -limit) return -limit;
  return v;
}

using Polygon = std::vector<Vec2>;

bool point_in_polygon(const Vec2& p, const Polygon& poly);
double distance_point_segment(const Vec2& p, const Vec2& a, const Vec2& b);

/// Distance from p to the polygon boundary/interior; 0 when p lies inside.
double distance_to_polygon(const Vec2& p, const Polygon& poly);

Vec2 polygon_centroid(const Polygon& poly);

/// Parameters t in [0,1] along a->b where the segment crosses a polygon edge,
/// sorted ascending.
std::vector<double> segment_polygon_crossings(const Vec2& a, const Vec2& b,
                                              const Polygon& poly);

struct Bounds3 {
  Vec3 min;
  Vec3 max;

  bool contains_xy(const Vec2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  bool contains(const Vec3& p) const {
    return contains_xy({p.x, p.y}) && p.z >= min.z && p.z <= max.z;
  }
  bool operator==(const Bounds3&) const = default;
};

}  // namespace portmission
