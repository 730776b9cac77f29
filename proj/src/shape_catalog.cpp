#include "isoalloc/shape_catalog.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace isoalloc {

namespace {

void require_dimension(int m) {
  if (m < 2) {
    throw std::invalid_argument("dimension must be >= 2, got " + std::to_string(m));
  }
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::string_view to_string(PlatonicSolid solid) {
  switch (solid) {
    case PlatonicSolid::tetrahedron:
      return "tetrahedron";
    case PlatonicSolid::cube:
      return "cube";
    case PlatonicSolid::octahedron:
      return "octahedron";
    case PlatonicSolid::dodecahedron:
      return "dodecahedron";
    case PlatonicSolid::icosahedron:
      return "icosahedron";
  }
  return "?";
}

PlatonicSolid platonic_from_string(std::string_view name) {
  for (auto s : {PlatonicSolid::tetrahedron, PlatonicSolid::cube, PlatonicSolid::octahedron,
                 PlatonicSolid::dodecahedron, PlatonicSolid::icosahedron}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown Platonic solid '" + std::string(name) + "'");
}

std::string_view descriptor_kind(const Descriptor& d) {
  return std::visit(overloaded{
                        [](const descriptor::Ball&) { return std::string_view("ball"); },
                        [](const descriptor::RegularPolygon&) {
                          return std::string_view("regular_polygon");
                        },
                        [](const descriptor::Tangential&) { return std::string_view("tangential"); },
                        [](const descriptor::Platonic&) { return std::string_view("platonic"); },
                        [](const descriptor::Hypercube&) { return std::string_view("hypercube"); },
                        [](const descriptor::Custom&) { return std::string_view("custom"); },
                        [](const descriptor::PolygonDerived&) { return std::string_view("polygon"); },
                    },
                    d);
}

ShapeClass::ShapeClass(int dimension, double lambda, Descriptor descriptor)
    : dimension_(dimension), lambda_(lambda), descriptor_(descriptor) {
  require_dimension(dimension);
  if (!std::isfinite(lambda) || !(lambda > 0.0)) {
    throw std::invalid_argument("lambda must be positive and finite");
  }
  const double bound = ball_lambda_value(dimension);
  if (lambda > bound * (1.0 + kBoundTolerance)) {
    throw BoundViolation("lambda " + std::to_string(lambda) + " exceeds the isoperimetric bound " +
                         std::to_string(bound) + " in dimension " + std::to_string(dimension));
  }
}

bool ShapeClass::is_tangential() const noexcept {
  return !std::holds_alternative<descriptor::Custom>(descriptor_) &&
         !std::holds_alternative<descriptor::PolygonDerived>(descriptor_);
}

double ShapeClass::enclosed_exponent() const noexcept {
  return static_cast<double>(dimension_) / static_cast<double>(dimension_ - 1);
}

double half_integer_gamma(int two_x) {
  if (two_x <= 0) {
    throw std::invalid_argument("half_integer_gamma: argument must be positive");
  }
  // Start from Gamma(1/2) or Gamma(1) and climb with Gamma(z+1) = z Gamma(z).
  double z = (two_x % 2 == 1) ? 0.5 : 1.0;
  double value = (two_x % 2 == 1) ? std::sqrt(std::numbers::pi) : 1.0;
  const double target = 0.5 * two_x;
  while (z < target) {
    value *= z;
    z += 1.0;
  }
  return value;
}

double hyperball_surface(int m, double radius) {
  require_dimension(m);
  return m * std::pow(std::numbers::pi, 0.5 * m) * std::pow(radius, m - 1) /
         half_integer_gamma(m + 2);
}

double hyperball_volume(int m, double radius) {
  require_dimension(m);
  return std::pow(std::numbers::pi, 0.5 * m) * std::pow(radius, m) / half_integer_gamma(m + 2);
}

double ball_lambda_value(int m) {
  require_dimension(m);
  // Split m^m out of the root so large m does not overflow.
  const double inv = 1.0 / (m - 1);
  const double g = half_integer_gamma(m + 2) / std::pow(std::numbers::pi, 0.5 * m);
  const double value = std::pow(g, inv) / std::pow(static_cast<double>(m), m * inv);
  if (!std::isfinite(value) || value <= 0.0) {
    throw std::overflow_error("ball lambda not representable for dimension " + std::to_string(m));
  }
  return value;
}

ShapeClass lambda_ball(int m) { return ShapeClass(m, ball_lambda_value(m), descriptor::Ball{}); }

ShapeClass lambda_regular_polygon(int sides) {
  if (sides < 3) {
    throw std::invalid_argument("regular polygon needs at least 3 sides");
  }
  const double lambda = 1.0 / (4.0 * sides * std::tan(std::numbers::pi / sides));
  return ShapeClass(2, lambda, descriptor::RegularPolygon{sides});
}

ShapeClass lambda_tangential(int m, double inradius, double boundary_measure) {
  require_dimension(m);
  if (!(inradius > 0.0) || !(boundary_measure > 0.0) || !std::isfinite(inradius) ||
      !std::isfinite(boundary_measure)) {
    throw std::invalid_argument("tangential class needs positive inradius and boundary measure");
  }
  // Cone decomposition over the facets: enclosed = (r/m) * boundary.
  const double lambda = (inradius / m) * std::pow(boundary_measure, -1.0 / (m - 1));
  return ShapeClass(m, lambda, descriptor::Tangential{inradius, boundary_measure});
}

ShapeClass lambda_hypercube(int m) {
  require_dimension(m);
  const double lambda = std::pow(2.0 * m, -static_cast<double>(m) / (m - 1));
  return ShapeClass(m, lambda, descriptor::Hypercube{});
}

PlatonicMetrics platonic_unit_metrics(PlatonicSolid solid) {
  const double s2 = std::sqrt(2.0);
  const double s3 = std::sqrt(3.0);
  const double s5 = std::sqrt(5.0);
  const double s6 = std::sqrt(6.0);
  switch (solid) {
    case PlatonicSolid::tetrahedron:
      return {s3, s2 / 12.0, s6 / 12.0};
    case PlatonicSolid::cube:
      return {6.0, 1.0, 0.5};
    case PlatonicSolid::octahedron:
      return {2.0 * s3, s2 / 3.0, s6 / 6.0};
    case PlatonicSolid::dodecahedron:
      return {3.0 * std::sqrt(25.0 + 10.0 * s5), (15.0 + 7.0 * s5) / 4.0,
              0.5 * std::sqrt((25.0 + 11.0 * s5) / 10.0)};
    case PlatonicSolid::icosahedron:
      return {5.0 * s3, 5.0 * (3.0 + s5) / 12.0, s3 * (3.0 + s5) / 12.0};
  }
  throw std::invalid_argument("unknown Platonic solid");
}

ShapeClass lambda_platonic(PlatonicSolid solid) {
  const auto met = platonic_unit_metrics(solid);
  const double lambda = met.volume / std::pow(met.surface, 1.5);
  return ShapeClass(3, lambda, descriptor::Platonic{solid});
}

ShapeClass lambda_platonic(std::string_view name) { return lambda_platonic(platonic_from_string(name)); }

ShapeClass lambda_custom(int m, double lambda) { return ShapeClass(m, lambda, descriptor::Custom{}); }

double inradius_from_share(const ShapeClass& c, double boundary_share) {
  if (!c.is_tangential()) {
    throw std::invalid_argument("inradius is defined only for tangential or ball classes");
  }
  if (!(boundary_share > 0.0)) {
    throw std::invalid_argument("boundary share must be positive");
  }
  const int m = c.dimension();
  return m * c.lambda() * std::pow(boundary_share, 1.0 / (m - 1));
}

std::optional<double> characteristic_length(const ShapeClass& c, double boundary_share) {
  if (!(boundary_share >= 0.0)) {
    throw std::invalid_argument("boundary share must be nonnegative");
  }
  const int m = c.dimension();
  return std::visit(
      overloaded{
          [&](const descriptor::Ball&) -> std::optional<double> {
            // boundary = hyperball_surface(m, 1) * R^(m-1)
            return std::pow(boundary_share / hyperball_surface(m, 1.0), 1.0 / (m - 1));
          },
          [&](const descriptor::RegularPolygon& p) -> std::optional<double> {
            return boundary_share / p.sides;
          },
          [&](const descriptor::Hypercube&) -> std::optional<double> {
            return std::pow(boundary_share / (2.0 * m), 1.0 / (m - 1));
          },
          [&](const descriptor::Platonic& p) -> std::optional<double> {
            return std::sqrt(boundary_share / platonic_unit_metrics(p.solid).surface);
          },
          [](const auto&) -> std::optional<double> { return std::nullopt; },
      },
      c.descriptor());
}

}  // namespace isoalloc
