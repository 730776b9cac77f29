#include "isoalloc/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace isoalloc {

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int orientation(const Point& a, const Point& b, const Point& c) {
  const double v = cross(a, b, c);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool is_simple(std::span<const Point> v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    if (a.x == b.x && a.y == b.y) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      // Adjacent edges share a vertex by construction.
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(a, b, v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

}  // namespace

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) {
    throw std::invalid_argument("polygon needs at least 3 vertices");
  }
  for (const auto& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("polygon vertex is not finite");
    }
  }
  if (signed_area(vertices_) == 0.0) {
    throw std::invalid_argument("polygon is degenerate (zero area)");
  }
  if (!is_simple(vertices_)) {
    throw std::invalid_argument("polygon is self-intersecting");
  }
}

double signed_area(std::span<const Point> pts) {
  const std::size_t n = pts.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = pts[i];
    const Point& b = pts[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

PolygonMetrics polygon_metrics(const Polygon& p) {
  const auto v = p.vertices();
  double perimeter = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    perimeter += std::hypot(b.x - a.x, b.y - a.y);
  }
  const double area = std::abs(signed_area(v));
  return {perimeter, area, area / (perimeter * perimeter)};
}

ShapeClass lambda_polygon(const Polygon& p) {
  const auto met = polygon_metrics(p);
  return ShapeClass(2, met.lambda, descriptor::PolygonDerived{p.size(), met.perimeter, met.area});
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return pts;

  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Point> regular_polygon_vertices(int sides, double circumradius, double phase) {
  if (sides < 3) {
    throw std::invalid_argument("regular polygon needs at least 3 sides");
  }
  std::vector<Point> v;
  v.reserve(sides);
  for (int i = 0; i < sides; ++i) {
    const double t = phase + 2.0 * std::numbers::pi * i / sides;
    v.push_back({circumradius * std::cos(t), circumradius * std::sin(t)});
  }
  return v;
}

}  // namespace isoalloc
