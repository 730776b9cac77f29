#pragma once

// Closed-form split of a boundary budget among shape classes.
//
// Minimising sum_i lambda_i * share_i^(m/(m-1)) subject to sum_i share_i = B
// forces lambda_i^(m-1) * share_i to be the same for every i, hence
//
//   share_i = B * lambda_i^-(m-1) / sum_j lambda_j^-(m-1).
//
// In the plane this is L_i = s_i L / (s_1 + ... + s_n) with s_i = 1/lambda_i
// and the minimal total area is L^2 / (s_1 + ... + s_n).

#include <cstddef>
#include <span>
#include <vector>

#include "isoalloc/shape_catalog.hpp"

namespace isoalloc {

class AllocationProblem {
 public:
  /// Throws std::invalid_argument for an empty list, mixed dimensions or a
  /// nonpositive / non-finite budget.
  AllocationProblem(std::vector<ShapeClass> shapes, double budget);

  std::span<const ShapeClass> shapes() const noexcept { return shapes_; }
  double budget() const noexcept { return budget_; }
  int dimension() const noexcept { return shapes_.front().dimension(); }
  std::size_t size() const noexcept { return shapes_.size(); }
  std::vector<double> lambdas() const;

 private:
  std::vector<ShapeClass> shapes_;
  double budget_;
};

struct Allocation {
  std::vector<double> shares;    // boundary measure per shape, sums to budget
  std::vector<double> enclosed;  // lambda_i * share_i^(m/(m-1))
  double objective = 0.0;        // total enclosed measure
  double equalized_value = 0.0;  // mean of lambda_i^(m-1) * share_i
  double residual = 0.0;         // max relative deviation from equalized_value
};

/// lambda * share^(m/(m-1)); throws std::invalid_argument for share < 0.
double enclosed_measure(const ShapeClass& c, double share);

/// Fills enclosed/objective/equalized_value/residual for arbitrary positive
/// shares (used both for the closed form and for candidate checking).
Allocation evaluate_allocation(const AllocationProblem& p, std::vector<double> shares);

Allocation optimal_allocation(const AllocationProblem& p);

double minimal_objective(const AllocationProblem& p);

/// Total enclosed measure for arbitrary nonnegative shares.
double total_enclosed(std::span<const ShapeClass> shapes, std::span<const double> shares);

/// max_i |lambda_i^(m-1) share_i - mean| / mean. Throws std::invalid_argument
/// on a nonpositive share or a size mismatch.
double equalization_residual(std::span<const double> shares, std::span<const ShapeClass> shapes);
double equalization_residual(const Allocation& a, std::span<const ShapeClass> shapes);

}  // namespace isoalloc
