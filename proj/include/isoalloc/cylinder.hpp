#pragma once

// Right cylinders D_i x [0, h] over planar classes [lambda_i] with a common
// height h and a fixed total surface S = h * sum L_i + 2 * sum lambda_i L_i^2
// (lateral plus both caps). The volume h * sum lambda_i L_i^2 is minimal
// exactly when lambda_i L_i takes one common value t for all i.

#include <cstddef>
#include <span>
#include <vector>

#include "isoalloc/shape_catalog.hpp"

namespace isoalloc {

class CylinderProblem {
 public:
  /// Throws std::invalid_argument for an empty list, a non-planar class or a
  /// nonpositive height / surface.
  CylinderProblem(std::vector<ShapeClass> shapes, double height, double total_surface);

  std::span<const ShapeClass> shapes() const noexcept { return shapes_; }
  double height() const noexcept { return height_; }
  double total_surface() const noexcept { return total_surface_; }
  std::size_t size() const noexcept { return shapes_.size(); }

  /// P = sum_i 1/lambda_i.
  double reciprocal_sum() const noexcept;

 private:
  std::vector<ShapeClass> shapes_;
  double height_;
  double total_surface_;
};

struct CylinderSolution {
  std::vector<double> perimeters;  // L_i
  double equalized_t = 0.0;        // common lambda_i L_i
  double volume = 0.0;
  double multiplier = 0.0;  // gamma in 2 lambda_i L_i = gamma (h + 4 lambda_i L_i)
  double constraint_residual = 0.0;
  double equalization_residual = 0.0;
  double kkt_residual = 0.0;
};

CylinderSolution solve_cylinders(const CylinderProblem& p);

/// Root t of 2 P t^2 + h P t - S = 0 in the cancellation-free form
/// 2S / (P (h + sqrt(h^2 + 8 S / P))).
double equalized_root(double reciprocal_sum, double height, double total_surface);

/// Total volume h * sum lambda_i L_i^2 for arbitrary perimeters.
double cylinder_volume(const CylinderProblem& p, std::span<const double> perimeters);

/// |h sum L_i + 2 sum lambda_i L_i^2 - S| / S.
double constraint_residual(const CylinderProblem& p, std::span<const double> perimeters);

/// gamma = 2t/(h+4t) with t the mean of lambda_i L_i.
double lagrange_multiplier(const CylinderProblem& p, std::span<const double> perimeters);

/// max_i |2 lambda_i L_i - gamma (h + 4 lambda_i L_i)| with gamma from
/// lagrange_multiplier. Stores the value in sol.kkt_residual.
double kkt_residual(CylinderSolution& sol, const CylinderProblem& p);
double kkt_residual(const CylinderProblem& p, std::span<const double> perimeters);

/// Determinant of the bordered matrix
///   [ 0            4l1 L1 + h   4l2 L2 + h ]
///   [ 4l1 L1 + h   2 l1         0          ]
///   [ 4l2 L2 + h   0            2 l2       ]
/// by cofactor expansion along the first row.
double bordered_hessian_2(double lambda1, double lambda2, double l1, double l2, double height);

/// The commonly quoted closed form -l1 (4 l2 L2 + h)^2 - l2 (4 l1 L1 + h)^2.
/// Note: the matrix above expands to exactly twice this value.
double bordered_hessian_2_textbook(double lambda1, double lambda2, double l1, double l2,
                                   double height);

/// Largest feasible L1 for n = 2: the positive root of h L + 2 lambda1 L^2 = S.
double max_first_perimeter(double lambda1, double height, double total_surface);

/// L2 on the constraint surface given L1 (positive root of
/// 2 lambda2 L2^2 + h L2 - (S - h L1 - 2 lambda1 L1^2) = 0). Returns 0 when
/// the remaining surface is not positive.
double second_perimeter(double lambda1, double lambda2, double l1, double height,
                        double total_surface);

}  // namespace isoalloc
