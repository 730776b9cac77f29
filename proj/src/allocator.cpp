#include "isoalloc/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isoalloc {

AllocationProblem::AllocationProblem(std::vector<ShapeClass> shapes, double budget)
    : shapes_(std::move(shapes)), budget_(budget) {
  if (shapes_.empty()) {
    throw std::invalid_argument("allocation problem needs at least one shape");
  }
  const int m = shapes_.front().dimension();
  for (const auto& s : shapes_) {
    if (s.dimension() != m) {
      throw std::invalid_argument("all shapes in an allocation problem must share one dimension");
    }
  }
  if (!std::isfinite(budget_) || !(budget_ > 0.0)) {
    throw std::invalid_argument("budget must be positive and finite");
  }
}

std::vector<double> AllocationProblem::lambdas() const {
  std::vector<double> out;
  out.reserve(shapes_.size());
  for (const auto& s : shapes_) out.push_back(s.lambda());
  return out;
}

double enclosed_measure(const ShapeClass& c, double share) {
  if (!(share >= 0.0)) {
    throw std::invalid_argument("share must be nonnegative");
  }
  switch (c.dimension()) {
    case 2:
      return c.lambda() * share * share;
    case 3:
      return c.lambda() * share * std::sqrt(share);
    default:
      return c.lambda() * std::pow(share, c.enclosed_exponent());
  }
}

double total_enclosed(std::span<const ShapeClass> shapes, std::span<const double> shares) {
  if (shapes.size() != shares.size()) {
    throw std::invalid_argument("shape and share counts differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < shapes.size(); ++i) total += enclosed_measure(shapes[i], shares[i]);
  return total;
}

double equalization_residual(std::span<const double> shares, std::span<const ShapeClass> shapes) {
  if (shapes.size() != shares.size() || shares.empty()) {
    throw std::invalid_argument("shape and share counts differ");
  }
  std::vector<double> terms(shares.size());
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (!(shares[i] > 0.0)) {
      throw std::invalid_argument("equalization residual requires positive shares");
    }
    terms[i] = std::pow(shapes[i].lambda(), shapes[i].dimension() - 1) * shares[i];
  }
  double mean = 0.0;
  for (double t : terms) mean += t;
  mean /= static_cast<double>(terms.size());
  double worst = 0.0;
  for (double t : terms) worst = std::max(worst, std::abs(t - mean));
  return worst / mean;
}

double equalization_residual(const Allocation& a, std::span<const ShapeClass> shapes) {
  return equalization_residual(a.shares, shapes);
}

Allocation evaluate_allocation(const AllocationProblem& p, std::vector<double> shares) {
  if (shares.size() != p.size()) {
    throw std::invalid_argument("share count does not match the problem");
  }
  Allocation a;
  a.enclosed.reserve(shares.size());
  for (std::size_t i = 0; i < shares.size(); ++i) {
    a.enclosed.push_back(enclosed_measure(p.shapes()[i], shares[i]));
    a.objective += a.enclosed.back();
  }
  const int m = p.dimension();
  double eq = 0.0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    eq += std::pow(p.shapes()[i].lambda(), m - 1) * shares[i];
  }
  a.equalized_value = eq / static_cast<double>(shares.size());
  const bool positive = std::all_of(shares.begin(), shares.end(), [](double s) { return s > 0.0; });
  a.residual = positive ? equalization_residual(shares, p.shapes()) : HUGE_VAL;
  a.shares = std::move(shares);
  return a;
}

Allocation optimal_allocation(const AllocationProblem& p) {
  const auto shapes = p.shapes();
  const int m = p.dimension();
  double lambda_min = shapes.front().lambda();
  for (const auto& s : shapes) lambda_min = std::min(lambda_min, s.lambda());

  // Weights lambda_i^-(m-1) divided by the largest one, (lambda_min/lambda_i)^(m-1),
  // all in (0, 1]. In the plane this is s_i / s_max with s_i = 1/lambda_i.
  std::vector<double> weights(shapes.size());
  double total = 0.0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const double ratio = lambda_min / shapes[i].lambda();
    weights[i] = (m == 2) ? ratio : std::pow(ratio, m - 1);
    total += weights[i];
  }
  std::vector<double> shares(shapes.size());
  for (std::size_t i = 0; i < shapes.size(); ++i) shares[i] = p.budget() * (weights[i] / total);
  return evaluate_allocation(p, std::move(shares));
}

double minimal_objective(const AllocationProblem& p) { return optimal_allocation(p).objective; }

}  // namespace isoalloc
