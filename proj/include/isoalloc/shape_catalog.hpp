#pragma once

// Shape efficiency classes.
//
// A class [lambda] in ambient dimension m collects closed boundaries whose
// enclosed measure equals lambda * boundary^(m/(m-1)): area = lambda * L^2 in
// the plane, volume = lambda * A^(3/2) in space. The isoperimetric inequality
// caps lambda at the value attained by the round ball.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace isoalloc {

/// Raised when a class would beat the round ball. Geometrically impossible.
class BoundViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class PlatonicSolid { tetrahedron, cube, octahedron, dodecahedron, icosahedron };

std::string_view to_string(PlatonicSolid solid);
/// Throws std::invalid_argument for an unknown name.
PlatonicSolid platonic_from_string(std::string_view name);

namespace descriptor {
struct Ball {};
struct RegularPolygon {
  int sides;
};
struct Tangential {
  double inradius;
  double boundary_measure;
};
struct Platonic {
  PlatonicSolid solid;
};
struct Hypercube {};
struct Custom {};
struct PolygonDerived {
  std::size_t vertex_count;
  double perimeter;
  double area;
};
}  // namespace descriptor

using Descriptor =
    std::variant<descriptor::Ball, descriptor::RegularPolygon, descriptor::Tangential,
                 descriptor::Platonic, descriptor::Hypercube, descriptor::Custom,
                 descriptor::PolygonDerived>;

/// Short provenance name: "ball", "regular_polygon", ...
std::string_view descriptor_kind(const Descriptor& d);

/// Relative slack allowed above the ball bound before a class is rejected.
inline constexpr double kBoundTolerance = 1e-12;

class ShapeClass {
 public:
  /// Validates dimension >= 2, 0 < lambda <= lambda_ball(dimension)*(1+1e-12).
  /// Throws std::invalid_argument or BoundViolation.
  ShapeClass(int dimension, double lambda, Descriptor descriptor);

  int dimension() const noexcept { return dimension_; }
  double lambda() const noexcept { return lambda_; }
  const Descriptor& descriptor() const noexcept { return descriptor_; }

  /// True when the class carries an inscribed ball: ball, regular polygon,
  /// hypercube, Platonic solid or caller-asserted tangential data.
  bool is_tangential() const noexcept;

  /// Boundary exponent m/(m-1) relating boundary measure to enclosed measure.
  double enclosed_exponent() const noexcept;

 private:
  int dimension_;
  double lambda_;
  Descriptor descriptor_;
};

/// Gamma(two_x / 2) by exact recursion from Gamma(1/2) = sqrt(pi), Gamma(1) = 1.
double half_integer_gamma(int two_x);

/// Surface measure and volume of the m-ball of radius R.
double hyperball_surface(int m, double radius);
double hyperball_volume(int m, double radius);

/// Isoperimetric maximum (Gamma(1+m/2) / (pi^(m/2) m^m))^(1/(m-1)) as a number.
double ball_lambda_value(int m);

ShapeClass lambda_ball(int m);
ShapeClass lambda_regular_polygon(int sides);
ShapeClass lambda_tangential(int m, double inradius, double boundary_measure);
ShapeClass lambda_hypercube(int m);
ShapeClass lambda_platonic(PlatonicSolid solid);
ShapeClass lambda_platonic(std::string_view name);
/// User-supplied lambda, bound-checked.
ShapeClass lambda_custom(int m, double lambda);

/// Edge-length-1 closed forms for a Platonic solid.
struct PlatonicMetrics {
  double surface;
  double volume;
  double inradius;
};
PlatonicMetrics platonic_unit_metrics(PlatonicSolid solid);

/// Inverse of lambda_tangential: r = m * lambda * share^(1/(m-1)).
/// Requires a tangential class; throws std::invalid_argument otherwise or for
/// a nonpositive share.
double inradius_from_share(const ShapeClass& c, double boundary_share);

/// Side length (regular polygon, hypercube, Platonic edge) or radius (ball)
/// of the shape realising `c` with the given boundary measure. Empty for
/// classes without a canonical size.
std::optional<double> characteristic_length(const ShapeClass& c, double boundary_share);

}  // namespace isoalloc
