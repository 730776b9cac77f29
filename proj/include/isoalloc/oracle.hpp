#pragma once

// Independent numerical checks of the closed forms: exhaustive simplex
// lattice search, projected gradient descent, golden-section search on the
// two-shape reduction, and a feasibility scan for the two-cylinder problem.
// None of these routes call into the closed-form solvers.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "isoalloc/allocator.hpp"
#include "isoalloc/cylinder.hpp"
#include "isoalloc/shape_catalog.hpp"

namespace isoalloc {

/// Euclidean projection onto {x >= 0, sum x = budget} (sort and threshold).
std::vector<double> project_to_simplex(std::span<const double> v, double budget);

// ---------------------------------------------------------------------------
// Lattice search

inline constexpr std::uint64_t kDefaultGridCap = 20'000'000;

class GridCapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// C(k + n - 1, n - 1), saturating at UINT64_MAX.
std::uint64_t grid_point_count(std::size_t n, std::size_t k);

/// Largest k <= k_max whose lattice has at most `cap` points (at least 1).
std::size_t max_resolution_within_cap(std::size_t n, std::size_t k_max,
                                      std::uint64_t cap = kDefaultGridCap);

struct GridResult {
  std::vector<double> shares;
  double objective = 0.0;
  std::uint64_t points = 0;
};

/// Enumerates every composition of k into n parts in lexicographic order,
/// scales by budget/k and keeps the first minimiser of the total enclosed
/// measure (ties go to the lexicographically smallest share vector). Throws
/// GridCapExceeded when the lattice is larger than `cap`.
GridResult simplex_grid_search(std::span<const ShapeClass> shapes, double budget, std::size_t k,
                               std::uint64_t cap = kDefaultGridCap);

// ---------------------------------------------------------------------------
// Projected gradient

/// grad_i = lambda_i * (m/(m-1)) * x_i^(1/(m-1)).
std::vector<double> objective_gradient(std::span<const ShapeClass> shapes,
                                       std::span<const double> shares);

struct GradientRun {
  std::vector<double> shares;
  double objective = 0.0;
  double step = 0.0;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  /// Largest relative increase f(x_{k+1}) - f(x_k) seen, over |f(x_k)|.
  double max_increase = 0.0;
};

/// x <- project(x - step * grad f(x)) from the uniform start, exactly
/// `iterations` times.
std::vector<double> projected_gradient(std::span<const ShapeClass> shapes, double budget,
                                       double step, std::size_t iterations);

/// Same iteration with bookkeeping. Stops early once an update moves no
/// coordinate by more than stop_tol * budget (0 disables early stopping).
GradientRun projected_gradient_run(std::span<const ShapeClass> shapes, double budget, double step,
                                   std::size_t iterations, double stop_tol = 0.0);

/// 0.5 * budget^(2-p) / (max_i lambda_i * p) with p = m/(m-1).
double default_gradient_step(std::span<const ShapeClass> shapes, double budget);

/// Fixed-step descent starting at default_gradient_step. Whenever an update
/// increases the objective the step is halved and the run restarts from the
/// uniform point.
GradientRun projected_gradient_auto(std::span<const ShapeClass> shapes, double budget,
                                    std::size_t max_iterations = 5'000'000,
                                    double stop_tol = 1e-13);

// ---------------------------------------------------------------------------
// Golden section

/// Minimiser of f on [lo, hi] to bracket width `width`, where
/// compare(a, b) < 0 iff f(a) < f(b). The comparator form lets callers
/// evaluate f(a) - f(b) without cancellation near the minimum.
template <class Compare>
double golden_section_minimize(Compare compare, double lo, double hi, double width);

/// Share of the first of exactly two shapes minimising the total enclosed
/// measure, searched on [0, budget] to bracket width 1e-10 * budget.
double golden_section_two(std::span<const ShapeClass> shapes, double budget);

// ---------------------------------------------------------------------------
// Cylinder feasibility scan (n = 2)

struct CylinderScan {
  double best_first_perimeter = 0.0;
  double best_volume = 0.0;
  double step = 0.0;
  std::size_t points = 0;
};

/// Evaluates the volume along the constraint curve at `points` evenly spaced
/// L1 in [0, L1_max], with L2 eliminated through the constraint.
CylinderScan scan_cylinder_pair(const CylinderProblem& p, std::size_t points);

// ---------------------------------------------------------------------------
// Random perturbation probes

/// Largest relative objective decrease (f(x) - f(y)) / f(x) over `count`
/// random feasible points y: x perturbed coordinate-wise by up to
/// `scale * budget` and projected back onto the simplex. At a minimiser the
/// result is <= 0 up to rounding.
double perturbation_probe(std::span<const ShapeClass> shapes, double budget,
                          std::span<const double> shares, std::size_t count, double scale,
                          std::uint64_t seed);

/// Same for cylinders: perimeters scaled by (1 + scale * u_i), u_i uniform in
/// [-1, 1], then rescaled by the common factor that restores the surface
/// constraint.
double cylinder_perturbation_probe(const CylinderProblem& p, std::span<const double> perimeters,
                                   std::size_t count, double scale, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Reports

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerificationReport {
  std::string summary;
  double closed_form_objective = 0.0;
  double oracle_objective = 0.0;
  double share_distance = 0.0;
  std::vector<Check> checks;
  bool passed = false;
};

struct AllocationOracleSettings {
  std::size_t grid_k = 0;  // 0: largest k <= 10^4 that fits grid_cap
  std::uint64_t grid_cap = kDefaultGridCap;
  double pg_step = 0.0;  // 0: projected_gradient_auto
  std::size_t pg_iters = 5'000'000;
  double pg_stop_tol = 1e-13;
  double share_tolerance = 1e-6;  // relative to budget, widened to 2/grid_k
  double equalization_tolerance = 1e-10;
  /// When set, adds a random perturbation probe seeded with this value.
  std::optional<std::uint64_t> probe_seed;
  std::size_t probe_count = 100;
  double probe_scale = 1e-2;
};

struct CylinderOracleSettings {
  std::size_t scan_points = 100'000;
  double constraint_tolerance = 1e-10;
  double kkt_tolerance = 1e-10;
  double equalization_tolerance = 1e-12;
  double scan_volume_tolerance = 1e-6;
  double inradius_tolerance = 1e-10;
  std::optional<std::uint64_t> probe_seed;
  std::size_t probe_count = 100;
  double probe_scale = 1e-2;
};

/// Resolution actually used for a problem of n shapes.
std::size_t effective_grid_k(const AllocationOracleSettings& s, std::size_t n);

VerificationReport verify_allocation(const AllocationProblem& p,
                                     const AllocationOracleSettings& settings = {});

/// Checks an arbitrary candidate against the oracles; residuals are
/// recomputed from candidate.shares.
VerificationReport verify_allocation_candidate(const AllocationProblem& p, const Allocation& candidate,
                                               const AllocationOracleSettings& settings = {});

VerificationReport verify_cylinder(const CylinderProblem& p,
                                   const CylinderOracleSettings& settings = {});

VerificationReport verify_cylinder_candidate(const CylinderProblem& p,
                                             const CylinderSolution& candidate,
                                             const CylinderOracleSettings& settings = {});

// ---------------------------------------------------------------------------

template <class Compare>
double golden_section_minimize(Compare compare, double lo, double hi, double width) {
  constexpr double inv_phi = 0.6180339887498948482;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  while (hi - lo > width) {
    if (compare(c, d) < 0.0) {
      hi = d;
      d = c;
      c = hi - inv_phi * (hi - lo);
    } else {
      lo = c;
      c = d;
      d = lo + inv_phi * (hi - lo);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace isoalloc
