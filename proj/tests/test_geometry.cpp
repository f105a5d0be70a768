#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "portmission/geometry.hpp"

using namespace portmission;

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(3.0 * M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(2.0 * M_PI + 0.25) == doctest::Approx(0.25));
  for (double a = -20.0; a < 20.0; a += 0.137) {
    const double w = wrap_angle(a);
    CHECK(w > -M_PI - 1e-12);
    CHECK(w <= M_PI + 1e-12);
    CHECK(std::abs(std::sin(w) - std::sin(a)) < 1e-9);
    CHECK(std::abs(std::cos(w) - std::cos(a)) < 1e-9);
  }
}

TEST_CASE("point_in_polygon on a square") {
  const Polygon sq{{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  CHECK(point_in_polygon({5, 5}, sq));
  CHECK(point_in_polygon({0, 5}, sq));  // boundary counts as inside
  CHECK_FALSE(point_in_polygon({-1, 5}, sq));
  CHECK_FALSE(point_in_polygon({11, 5}, sq));
  CHECK_FALSE(point_in_polygon({5, 10.01}, sq));
}

TEST_CASE("distance_to_polygon is zero inside, positive outside") {
  const Polygon sq{{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  CHECK(distance_to_polygon({5, 5}, sq) == doctest::Approx(0.0));
  CHECK(distance_to_polygon({12, 5}, sq) == doctest::Approx(2.0));
  CHECK(distance_to_polygon({13, 14}, sq) == doctest::Approx(5.0));
}

TEST_CASE("segment_polygon_crossings finds both edges of a square") {
  const Polygon sq{{4, 4}, {6, 4}, {6, 6}, {4, 6}};
  const auto ts = segment_polygon_crossings({0, 5}, {10, 5}, sq);
  REQUIRE(ts.size() == 2);
  CHECK(ts[0] == doctest::Approx(0.4));
  CHECK(ts[1] == doctest::Approx(0.6));
  CHECK(segment_polygon_crossings({0, 0}, {10, 0}, sq).empty());
}

TEST_CASE("polygon centroid of a rectangle") {
  const Polygon r{{2, 2}, {8, 2}, {8, 6}, {2, 6}};
  const Vec2 c = polygon_centroid(r);
  CHECK(c.x == doctest::Approx(5.0));
  CHECK(c.y == doctest::Approx(4.0));
}
