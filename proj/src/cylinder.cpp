#include "isoalloc/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isoalloc {

namespace {

// Positive root of a x^2 + b x - c = 0 for a, b, c > 0 without cancellation.
double positive_root(double a, double b, double c) { return 2.0 * c / (b + std::sqrt(b * b + 4.0 * a * c)); }

}  // namespace

CylinderProblem::CylinderProblem(std::vector<ShapeClass> shapes, double height, double total_surface)
    : shapes_(std::move(shapes)), height_(height), total_surface_(total_surface) {
  if (shapes_.empty()) {
    throw std::invalid_argument("cylinder problem needs at least one base shape");
  }
  for (const auto& s : shapes_) {
    if (s.dimension() != 2) {
      throw std::invalid_argument("cylinder bases must be planar (dimension 2) classes");
    }
  }
  if (!std::isfinite(height_) || !(height_ > 0.0)) {
    throw std::invalid_argument("height must be positive and finite");
  }
  if (!std::isfinite(total_surface_) || !(total_surface_ > 0.0)) {
    throw std::invalid_argument("total surface must be positive and finite");
  }
}

double CylinderProblem::reciprocal_sum() const noexcept {
  double p = 0.0;
  for (const auto& s : shapes_) p += 1.0 / s.lambda();
  return p;
}

double equalized_root(double reciprocal_sum, double height, double total_surface) {
  return 2.0 * total_surface /
         (reciprocal_sum * (height + std::sqrt(height * height + 8.0 * total_surface / reciprocal_sum)));
}

double cylinder_volume(const CylinderProblem& p, std::span<const double> perimeters) {
  if (perimeters.size() != p.size()) throw std::invalid_argument("perimeter count mismatch");
  double area = 0.0;
  for (std::size_t i = 0; i < perimeters.size(); ++i) {
    area += p.shapes()[i].lambda() * perimeters[i] * perimeters[i];
  }
  return p.height() * area;
}

double constraint_residual(const CylinderProblem& p, std::span<const double> perimeters) {
  if (perimeters.size() != p.size()) throw std::invalid_argument("perimeter count mismatch");
  double lateral = 0.0;
  double caps = 0.0;
  for (std::size_t i = 0; i < perimeters.size(); ++i) {
    lateral += perimeters[i];
    caps += p.shapes()[i].lambda() * perimeters[i] * perimeters[i];
  }
  return std::abs(p.height() * lateral + 2.0 * caps - p.total_surface()) / p.total_surface();
}

double lagrange_multiplier(const CylinderProblem& p, std::span<const double> perimeters) {
  if (perimeters.size() != p.size()) throw std::invalid_argument("perimeter count mismatch");
  double t = 0.0;
  for (std::size_t i = 0; i < perimeters.size(); ++i) t += p.shapes()[i].lambda() * perimeters[i];
  t /= static_cast<double>(perimeters.size());
  return 2.0 * t / (p.height() + 4.0 * t);
}

double kkt_residual(const CylinderProblem& p, std::span<const double> perimeters) {
  const double gamma = lagrange_multiplier(p, perimeters);
  double worst = 0.0;
  for (std::size_t i = 0; i < perimeters.size(); ++i) {
    const double lt = p.shapes()[i].lambda() * perimeters[i];
    worst = std::max(worst, std::abs(2.0 * lt - gamma * (p.height() + 4.0 * lt)));
  }
  return worst;
}

double kkt_residual(CylinderSolution& sol, const CylinderProblem& p) {
  sol.kkt_residual = kkt_residual(p, sol.perimeters);
  return sol.kkt_residual;
}

CylinderSolution solve_cylinders(const CylinderProblem& p) {
  const double recip = p.reciprocal_sum();
  const double h = p.height();

  CylinderSolution sol;
  sol.equalized_t = equalized_root(recip, h, p.total_surface());
  sol.perimeters.reserve(p.size());
  for (const auto& s : p.shapes()) sol.perimeters.push_back(sol.equalized_t / s.lambda());
  sol.volume = h * sol.equalized_t * sol.equalized_t * recip;
  sol.multiplier = 2.0 * sol.equalized_t / (h + 4.0 * sol.equalized_t);
  sol.constraint_residual = constraint_residual(p, sol.perimeters);

  double eq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double lt = p.shapes()[i].lambda() * sol.perimeters[i];
    eq = std::max(eq, std::abs(lt - sol.equalized_t) / sol.equalized_t);
  }
  sol.equalization_residual = eq;
  kkt_residual(sol, p);
  return sol;
}

double bordered_hessian_2(double lambda1, double lambda2, double l1, double l2, double height) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0) || !(l1 > 0.0) || !(l2 > 0.0) || !(height > 0.0)) {
    throw std::invalid_argument("bordered Hessian inputs must be positive");
  }
  const double b1 = 4.0 * lambda1 * l1 + height;
  const double b2 = 4.0 * lambda2 * l2 + height;
  const double m[3][3] = {{0.0, b1, b2}, {b1, 2.0 * lambda1, 0.0}, {b2, 0.0, 2.0 * lambda2}};
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double bordered_hessian_2_textbook(double lambda1, double lambda2, double l1, double l2,
                                   double height) {
  const double b1 = 4.0 * lambda1 * l1 + height;
  const double b2 = 4.0 * lambda2 * l2 + height;
  return -lambda1 * b2 * b2 - lambda2 * b1 * b1;
}

double max_first_perimeter(double lambda1, double height, double total_surface) {
  return positive_root(2.0 * lambda1, height, total_surface);
}

double second_perimeter(double lambda1, double lambda2, double l1, double height,
                        double total_surface) {
  const double rest = total_surface - height * l1 - 2.0 * lambda1 * l1 * l1;
  if (!(rest > 0.0)) return 0.0;
  return positive_root(2.0 * lambda2, height, rest);
}

}  // namespace isoalloc
