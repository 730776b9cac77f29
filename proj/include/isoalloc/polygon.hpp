#pragma once

// Explicit planar polygons: the empirical ground truth for the catalog's
// closed-form lambda values.

#include <cstddef>
#include <span>
#include <vector>

#include "isoalloc/shape_catalog.hpp"

namespace isoalloc {

struct Point {
  double x;
  double y;
};

/// Simple polygon with nonzero signed area. The simplicity check is an
/// O(n^2) pairwise segment test, fine for hand-sized inputs but not for
/// large meshes.
class Polygon {
 public:
  /// Throws std::invalid_argument if fewer than 3 vertices, non-finite
  /// coordinates, zero area or self-intersection.
  explicit Polygon(std::vector<Point> vertices);

  std::span<const Point> vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }

 private:
  std::vector<Point> vertices_;
};

struct PolygonMetrics {
  double perimeter;
  double area;
  double lambda;
};

PolygonMetrics polygon_metrics(const Polygon& p);

/// Class of an explicit polygon (descriptor PolygonDerived).
ShapeClass lambda_polygon(const Polygon& p);

/// Signed shoelace area; positive for counter-clockwise order.
double signed_area(std::span<const Point> pts);

/// Andrew monotone chain. Returns the hull counter-clockwise without
/// collinear points.
std::vector<Point> convex_hull(std::vector<Point> pts);

/// Vertices of the regular polygon with the given circumradius, starting at
/// angle `phase`.
std::vector<Point> regular_polygon_vertices(int sides, double circumradius, double phase = 0.0);

}  // namespace isoalloc
