#include "portmission/geometry.hpp"

#include <algorithm>
#include <limits>

namespace portmission {

double wrap_angle(double a) {
  if (a > -M_PI && a <= M_PI) return a;  // already in range, bit-exact
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a <= 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
  // Even-odd ray cast; points on an edge count as inside.
  const std::size_t n = poly.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[j];
    const Vec2& b = poly[i];
    if (distance_point_segment(p, a, b) < 1e-12) return true;
    const bool crosses = (b.y > p.y) != (a.y > p.y);
    if (crosses) {
      const double x_at = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < x_at) inside = !inside;
    }
  }
  return inside;
}

double distance_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 <= 0.0) return (p - a).norm();
  double t = (p - a).dot(ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

double distance_to_polygon(const Vec2& p, const Polygon& poly) {
  if (poly.size() < 2) return std::numeric_limits<double>::infinity();
  if (point_in_polygon(p, poly)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    best = std::min(best, distance_point_segment(p, poly[j], poly[i]));
  }
  return best;
}

Vec2 polygon_centroid(const Polygon& poly) {
  // Area-weighted centroid; falls back to vertex mean for degenerate area.
  if (poly.empty()) return {};
  double area2 = 0.0;
  Vec2 acc;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const double w = poly[j].cross(poly[i]);
    area2 += w;
    acc.x += (poly[j].x + poly[i].x) * w;
    acc.y += (poly[j].y + poly[i].y) * w;
  }
  if (std::abs(area2) < 1e-12) {
    Vec2 mean;
    for (const auto& v : poly) mean = mean + v;
    return mean * (1.0 / static_cast<double>(poly.size()));
  }
  return acc * (1.0 / (3.0 * area2));
}

std::vector<double> segment_polygon_crossings(const Vec2& a, const Vec2& b,
                                              const Polygon& poly) {
  std::vector<double> ts;
  const Vec2 d = b - a;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 p = poly[j];
    const Vec2 r = poly[i] - poly[j];
    const double denom = d.cross(r);
    if (std::abs(denom) < 1e-12) continue;  // parallel
    const double t = (p - a).cross(r) / denom;
    const double u = (p - a).cross(d) / denom;
    if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  return ts;
}

}  // namespace portmission
