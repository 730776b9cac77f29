#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "isoalloc/polygon.hpp"

using namespace isoalloc;
using std::numbers::pi;

TEST_CASE("unit square metrics") {
  const Polygon sq({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const auto met = polygon_metrics(sq);
  CHECK(met.perimeter == 4.0);
  CHECK(met.area == 1.0);
  CHECK(met.lambda == 1.0 / 16.0);

  // Clockwise order gives the same metrics.
  const auto cw = polygon_metrics(Polygon({{0, 1}, {1, 1}, {1, 0}, {0, 0}}));
  CHECK(cw.area == 1.0);
}

TEST_CASE("invalid polygons are rejected") {
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {2, 2}}), std::invalid_argument);           // collinear
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), std::invalid_argument);   // bow tie
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}}), std::invalid_argument);                   // too short
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), std::invalid_argument);   // repeated vertex
  CHECK_THROWS_AS(Polygon({{0, 0}, {INFINITY, 0}, {0, 1}}), std::invalid_argument);
  // Non-convex but simple is fine.
  CHECK_NOTHROW(Polygon({{0, 0}, {2, 0}, {2, 2}, {1, 0.5}, {0, 2}}));
}

TEST_CASE("regular 96-gon approaches but stays below the disk") {
  const auto met = polygon_metrics(Polygon(regular_polygon_vertices(96, 1.0)));
  CHECK(std::abs(met.lambda - 1.0 / (std::tan(pi / 96) * 384.0)) < 1e-4);
  CHECK(met.lambda < 1.0 / (4.0 * pi));
}

TEST_CASE("lambda is scale invariant on regular polygons") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> scale(-6.0, 6.0);
  for (int m = 3; m <= 64; ++m) {
    const double radius = std::exp(scale(rng));
    const auto met = polygon_metrics(Polygon(regular_polygon_vertices(m, radius, scale(rng))));
    CAPTURE(m);
    CHECK(std::abs(met.lambda - lambda_regular_polygon(m).lambda()) / met.lambda < 1e-10);
  }
}

TEST_CASE("random convex polygons respect the isoperimetric bound") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
  std::uniform_int_distribution<int> count(3, 200);
  const double bound = 1.0 / (4.0 * pi) + 1e-12;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Point> pts;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const double t = angle(rng);
      pts.push_back({std::cos(t), std::sin(t)});
    }
    auto hull = convex_hull(pts);
    if (hull.size() < 3) continue;
    REQUIRE(polygon_metrics(Polygon(hull)).lambda <= bound);
  }
}

TEST_CASE("convex hull drops interior and collinear points") {
  const auto hull = convex_hull({{0, 0}, {2, 0}, {1, 0}, {2, 2}, {0, 2}, {1, 1}, {0, 1}});
  CHECK(hull.size() == 4);
  CHECK(signed_area(hull) == 4.0);
}

TEST_CASE("lambda_polygon carries provenance") {
  const auto c = lambda_polygon(Polygon({{0, 0}, {3, 0}, {3, 1}, {0, 1}}));
  CHECK(c.dimension() == 2);
  CHECK(c.lambda() == doctest::Approx(3.0 / 64.0));
  const auto* d = std::get_if<descriptor::PolygonDerived>(&c.descriptor());
  REQUIRE(d != nullptr);
  CHECK(d->vertex_count == 4);
  CHECK_FALSE(c.is_tangential());
}
