#include "isoalloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "isoalloc/kernels.hpp"

namespace isoalloc {

std::vector<double> project_to_simplex(std::span<const double> v, double budget) {
  if (v.empty()) throw std::invalid_argument("project_to_simplex: empty input");
  if (!(budget > 0.0)) throw std::invalid_argument("project_to_simplex: budget must be positive");

  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    prefix += sorted[j];
    const double candidate = (prefix - budget) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

// ---------------------------------------------------------------------------

std::uint64_t grid_point_count(std::size_t n, std::size_t k) {
  if (n == 0) return 0;
  // C(k + r, r) with r = n - 1, built incrementally; each partial product is
  // itself a binomial so the division is exact.
  const std::uint64_t r = n - 1;
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    c = c * (k + i) / i;
    if (c > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(c);
}

std::size_t max_resolution_within_cap(std::size_t n, std::size_t k_max, std::uint64_t cap) {
  std::size_t lo = 1;
  std::size_t hi = std::max<std::size_t>(k_max, 1);
  if (grid_point_count(n, hi) <= cap) return hi;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (grid_point_count(n, mid) <= cap ? lo : hi) = mid;
  }
  return lo;
}

namespace {

void require_shapes(std::span<const ShapeClass> shapes) {
  if (shapes.empty()) throw std::invalid_argument("oracle needs at least one shape");
  for (const auto& s : shapes) {
    if (s.dimension() != shapes.front().dimension()) {
      throw std::invalid_argument("oracle shapes must share one dimension");
    }
  }
}

std::vector<double> lambdas_of(std::span<const ShapeClass> shapes) {
  std::vector<double> out;
  out.reserve(shapes.size());
  for (const auto& s : shapes) out.push_back(s.lambda());
  return out;
}

// Advances c to the next composition of its sum in lexicographic order.
bool next_composition(std::vector<std::size_t>& c) {
  const std::size_t n = c.size();
  if (n < 2) return false;
  if (c[n - 1] > 0) {
    ++c[n - 2];
    --c[n - 1];
    return true;
  }
  std::size_t j = n - 1;
  while (j > 0 && c[j] == 0) --j;
  if (j == 0) return false;
  const std::size_t tail = c[j];
  c[j] = 0;
  ++c[j - 1];
  c[n - 1] = tail - 1;
  return true;
}

}  // namespace

GridResult simplex_grid_search(std::span<const ShapeClass> shapes, double budget, std::size_t k,
                               std::uint64_t cap) {
  require_shapes(shapes);
  if (k == 0) throw std::invalid_argument("grid resolution must be positive");
  if (!(budget > 0.0)) throw std::invalid_argument("budget must be positive");
  const std::size_t n = shapes.size();
  const std::uint64_t total = grid_point_count(n, k);
  if (total > cap) {
    throw GridCapExceeded("simplex grid with n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                          " has " + std::to_string(total) + " points, cap is " + std::to_string(cap));
  }

  const int m = shapes.front().dimension();
  const auto weights = lambdas_of(shapes);
  const double exponent = static_cast<double>(m) / (m - 1);
  const auto kind = kernels::power_kind_for_dimension(m);
  const double cell = budget / static_cast<double>(k);

  constexpr std::size_t kBatch = 2048;
  std::vector<double> soa(n * kBatch);
  std::vector<double> values(kBatch);
  std::vector<std::size_t> comp(n, 0);
  comp[n - 1] = k;
  std::vector<std::size_t> best_comp = comp;
  double best = std::numeric_limits<double>::infinity();

  // Compositions of the current batch, kept to recover the winner.
  std::vector<std::size_t> batch_comps(n * kBatch);

  bool more = true;
  std::uint64_t visited = 0;
  while (more) {
    std::size_t count = 0;
    while (more && count < kBatch) {
      for (std::size_t i = 0; i < n; ++i) {
        batch_comps[count * n + i] = comp[i];
        soa[i * kBatch + count] = static_cast<double>(comp[i]) * cell;
      }
      ++count;
      more = next_composition(comp);
    }
    // Compact rows when the final batch is short.
    if (count < kBatch) {
      for (std::size_t i = 1; i < n; ++i) {
        std::copy_n(soa.begin() + i * kBatch, count, soa.begin() + i * count);
      }
    }
    const kernels::ObjectiveBatch batch{weights, std::span<const double>(soa.data(), n * count), count,
                                        kind, exponent};
    kernels::objective_batch(batch, std::span<double>(values.data(), count));
    const std::size_t j = kernels::first_argmin(std::span<const double>(values.data(), count));
    if (values[j] < best) {
      best = values[j];
      std::copy_n(batch_comps.begin() + j * n, n, best_comp.begin());
    }
    visited += count;
  }

  GridResult r;
  r.objective = best;
  r.points = visited;
  r.shares.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.shares[i] = static_cast<double>(best_comp[i]) * cell;
  return r;
}

// ---------------------------------------------------------------------------

std::vector<double> objective_gradient(std::span<const ShapeClass> shapes,
                                       std::span<const double> shares) {
  std::vector<double> g(shares.size());
  for (std::size_t i = 0; i < shares.size(); ++i) {
    const int m = shapes[i].dimension();
    const double x = std::max(shares[i], 0.0);
    const double root = (m == 2) ? x : (m == 3 ? std::sqrt(x) : std::pow(x, 1.0 / (m - 1)));
    g[i] = shapes[i].lambda() * shapes[i].enclosed_exponent() * root;
  }
  return g;
}

GradientRun projected_gradient_run(std::span<const ShapeClass> shapes, double budget, double step,
                                   std::size_t iterations, double stop_tol) {
  require_shapes(shapes);
  if (!(step > 0.0)) throw std::invalid_argument("gradient step must be positive");
  if (!(budget > 0.0)) throw std::invalid_argument("budget must be positive");
  const std::size_t n = shapes.size();

  GradientRun run;
  run.step = step;
  std::vector<double> x(n, budget / static_cast<double>(n));
  double f = total_enclosed(shapes, x);
  std::vector<double> trial(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    const auto g = objective_gradient(shapes, x);
    for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - step * g[i];
    auto next = project_to_simplex(trial, budget);
    const double fn = total_enclosed(shapes, next);
    if (f != 0.0) run.max_increase = std::max(run.max_increase, (fn - f) / std::abs(f));
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, std::abs(next[i] - x[i]));
    x = std::move(next);
    f = fn;
    run.iterations = it + 1;
    if (stop_tol > 0.0 && moved <= stop_tol * budget) break;
  }
  run.shares = std::move(x);
  run.objective = f;
  return run;
}

std::vector<double> projected_gradient(std::span<const ShapeClass> shapes, double budget,
                                       double step, std::size_t iterations) {
  return projected_gradient_run(shapes, budget, step, iterations).shares;
}

double default_gradient_step(std::span<const ShapeClass> shapes, double budget) {
  require_shapes(shapes);
  double lambda_max = 0.0;
  for (const auto& s : shapes) lambda_max = std::max(lambda_max, s.lambda());
  const double p = shapes.front().enclosed_exponent();
  return 0.5 * std::pow(budget, 2.0 - p) / (lambda_max * p);
}

GradientRun projected_gradient_auto(std::span<const ShapeClass> shapes, double budget,
                                    std::size_t max_iterations, double stop_tol) {
  // Objective noise near the optimum is a few ulps; anything larger is a
  // genuine overshoot.
  constexpr double kIncreaseSlack = 1e-15;
  constexpr std::size_t kMaxRestarts = 60;

  require_shapes(shapes);
  const std::size_t n = shapes.size();
  double step = default_gradient_step(shapes, budget);
  std::size_t restarts = 0;
  for (;;) {
    GradientRun run;
    run.step = step;
    std::vector<double> x(n, budget / static_cast<double>(n));
    double f = total_enclosed(shapes, x);
    std::vector<double> trial(n);
    bool overshoot = false;
    for (std::size_t it = 0; it < max_iterations; ++it) {
      const auto g = objective_gradient(shapes, x);
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - step * g[i];
      auto next = project_to_simplex(trial, budget);
      const double fn = total_enclosed(shapes, next);
      const double rise = (fn - f) / std::abs(f);
      if (rise > kIncreaseSlack && restarts < kMaxRestarts) {
        overshoot = true;
        break;
      }
      run.max_increase = std::max(run.max_increase, rise);
      double moved = 0.0;
      for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, std::abs(next[i] - x[i]));
      x = std::move(next);
      f = fn;
      run.iterations = it + 1;
      if (stop_tol > 0.0 && moved <= stop_tol * budget) break;
    }
    if (!overshoot) {
      run.shares = std::move(x);
      run.objective = f;
      run.restarts = restarts;
      return run;
    }
    step *= 0.5;
    ++restarts;
  }
}

// ---------------------------------------------------------------------------

namespace {

// (y + diff)^p - y^p for y, y + diff >= 0. Taking diff as an argument keeps
// it exact; recomputing it from two rounded endpoints adds noise of order
// eps * budget, which swamps the objective difference near the minimum.
double power_difference(double y, double diff, double p, int m) {
  if (diff == 0.0) return 0.0;
  if (m == 2) return diff * (2.0 * y + diff);
  if (y == 0.0) return std::pow(diff, p);
  if (y + diff <= 0.0) return -std::pow(y, p);
  return std::pow(y, p) * std::expm1(p * std::log1p(diff / y));
}

}  // namespace

double golden_section_two(std::span<const ShapeClass> shapes, double budget) {
  if (shapes.size() != 2) throw std::invalid_argument("golden_section_two needs exactly two shapes");
  require_shapes(shapes);
  if (!(budget > 0.0)) throw std::invalid_argument("budget must be positive");
  const int m = shapes[0].dimension();
  const double p = shapes[0].enclosed_exponent();
  const double l1 = shapes[0].lambda();
  const double l2 = shapes[1].lambda();
  auto compare = [&](double a, double b) {
    const double rb = std::max(budget - b, 0.0);
    return l1 * power_difference(b, a - b, p, m) + l2 * power_difference(rb, b - a, p, m);
  };
  return golden_section_minimize(compare, 0.0, budget, 1e-10 * budget);
}

// ---------------------------------------------------------------------------

CylinderScan scan_cylinder_pair(const CylinderProblem& p, std::size_t points) {
  if (p.size() != 2) throw std::invalid_argument("cylinder scan needs exactly two bases");
  if (points < 2) throw std::invalid_argument("cylinder scan needs at least two points");
  const double l1 = p.shapes()[0].lambda();
  const double l2 = p.shapes()[1].lambda();
  const double h = p.height();
  const double s = p.total_surface();
  const double hi = max_first_perimeter(l1, h, s);

  CylinderScan scan;
  scan.points = points;
  scan.step = hi / static_cast<double>(points - 1);

  // Base area sum l1 L1^2 + l2 L2^2 is the planar objective, batched.
  constexpr std::size_t kBatch = 4096;
  const double weights[2] = {l1, l2};
  std::vector<double> soa(2 * kBatch);
  std::vector<double> values(kBatch);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t start = 0; start < points; start += kBatch) {
    const std::size_t count = std::min(kBatch, points - start);
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t idx = start + j;
      const double a = (idx + 1 == points) ? hi : static_cast<double>(idx) * scan.step;
      soa[j] = a;
      soa[count + j] = second_perimeter(l1, l2, a, h, s);
    }
    const kernels::ObjectiveBatch batch{weights, std::span<const double>(soa.data(), 2 * count), count,
                                        kernels::PowerKind::square, 2.0};
    kernels::objective_batch(batch, std::span<double>(values.data(), count));
    const std::size_t j = kernels::first_argmin(std::span<const double>(values.data(), count));
    if (values[j] < best) {
      best = values[j];
      scan.best_first_perimeter = soa[j];
    }
  }
  scan.best_volume = h * best;
  return scan;
}

// ---------------------------------------------------------------------------

double perturbation_probe(std::span<const ShapeClass> shapes, double budget,
                          std::span<const double> shares, std::size_t count, double scale,
                          std::uint64_t seed) {
  require_shapes(shapes);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double base = total_enclosed(shapes, shares);
  std::vector<double> trial(shares.size());
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < count; ++t) {
    for (std::size_t i = 0; i < shares.size(); ++i) trial[i] = shares[i] + scale * budget * unit(rng);
    const auto y = project_to_simplex(trial, budget);
    worst = std::max(worst, (base - total_enclosed(shapes, y)) / base);
  }
  return worst;
}

double cylinder_perturbation_probe(const CylinderProblem& p, std::span<const double> perimeters,
                                   std::size_t count, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double base = cylinder_volume(p, perimeters);
  std::vector<double> trial(perimeters.size());
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < count; ++t) {
    double lateral = 0.0;
    double caps = 0.0;
    for (std::size_t i = 0; i < trial.size(); ++i) {
      trial[i] = perimeters[i] * (1.0 + scale * unit(rng));
      lateral += trial[i];
      caps += p.shapes()[i].lambda() * trial[i] * trial[i];
    }
    // Positive root c of 2 caps c^2 + h lateral c - S = 0.
    const double b = p.height() * lateral;
    const double c = 2.0 * p.total_surface() / (b + std::sqrt(b * b + 8.0 * caps * p.total_surface()));
    for (auto& v : trial) v *= c;
    worst = std::max(worst, (base - cylinder_volume(p, trial)) / base);
  }
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

void add_check(VerificationReport& r, std::string name, double value, double tolerance) {
  r.checks.push_back({std::move(name), value, tolerance, value <= tolerance});
}

double max_abs_difference(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

bool all_tangential(std::span<const ShapeClass> shapes) {
  return std::all_of(shapes.begin(), shapes.end(), [](const ShapeClass& s) { return s.is_tangential(); });
}

double inradius_spread(std::span<const ShapeClass> shapes, std::span<const double> shares) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (!(shares[i] > 0.0)) return std::numeric_limits<double>::infinity();
    const double r = inradius_from_share(shapes[i], shares[i]);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    mean += r;
  }
  mean /= static_cast<double>(shapes.size());
  return (hi - lo) / mean;
}

void finalize(VerificationReport& r) {
  r.passed = std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.passed; });
}

}  // namespace

std::size_t effective_grid_k(const AllocationOracleSettings& s, std::size_t n) {
  return s.grid_k != 0 ? s.grid_k : max_resolution_within_cap(n, 10'000, s.grid_cap);
}

VerificationReport verify_allocation(const AllocationProblem& p,
                                     const AllocationOracleSettings& settings) {
  return verify_allocation_candidate(p, optimal_allocation(p), settings);
}

VerificationReport verify_allocation_candidate(const AllocationProblem& p, const Allocation& candidate,
                                               const AllocationOracleSettings& settings) {
  const auto shapes = p.shapes();
  const double budget = p.budget();
  const std::size_t n = p.size();
  if (candidate.shares.size() != n) throw std::invalid_argument("candidate share count mismatch");

  VerificationReport r;
  {
    std::ostringstream os;
    os << "allocation: m=" << p.dimension() << ", n=" << n << ", budget=" << budget;
    r.summary = os.str();
  }
  const auto& shares = candidate.shares;
  const double objective = total_enclosed(shapes, shares);
  r.closed_form_objective = objective;

  const std::size_t k = effective_grid_k(settings, n);
  const double share_tol = std::max(settings.share_tolerance * budget, 2.0 * budget / static_cast<double>(k));

  const double sum = std::accumulate(shares.begin(), shares.end(), 0.0);
  add_check(r, "share_sum", std::abs(sum - budget) / budget, 1e-12);
  const bool positive = std::all_of(shares.begin(), shares.end(), [](double s) { return s > 0.0; });
  add_check(r, "equalization_residual",
            positive ? equalization_residual(shares, shapes) : std::numeric_limits<double>::infinity(),
            settings.equalization_tolerance);

  const auto grid = simplex_grid_search(shapes, budget, k, settings.grid_cap);
  add_check(r, "grid_share_distance", max_abs_difference(grid.shares, shares), share_tol);
  add_check(r, "grid_objective_gap", std::max(0.0, (objective - grid.objective) / grid.objective), 1e-12);
  double oracle_objective = grid.objective;
  double distance = max_abs_difference(grid.shares, shares);

  const GradientRun pg =
      settings.pg_step > 0.0
          ? projected_gradient_run(shapes, budget, settings.pg_step, settings.pg_iters, settings.pg_stop_tol)
          : projected_gradient_auto(shapes, budget, settings.pg_iters, settings.pg_stop_tol);
  add_check(r, "gradient_share_distance", max_abs_difference(pg.shares, shares), share_tol);
  add_check(r, "gradient_objective_gap", std::max(0.0, (objective - pg.objective) / pg.objective), 1e-12);
  oracle_objective = std::min(oracle_objective, pg.objective);
  distance = std::max(distance, max_abs_difference(pg.shares, shares));

  if (n == 2) {
    const double first = golden_section_two(shapes, budget);
    const double golden[2] = {first, budget - first};
    const double d = max_abs_difference(golden, shares);
    add_check(r, "golden_share_distance", d, share_tol);
    distance = std::max(distance, d);
    oracle_objective = std::min(oracle_objective, total_enclosed(shapes, golden));
  }
  if (all_tangential(shapes)) {
    add_check(r, "inradius_spread", inradius_spread(shapes, shares), 1e-10);
  }
  if (settings.probe_seed) {
    add_check(r, "perturbation_gain",
              perturbation_probe(shapes, budget, shares, settings.probe_count, settings.probe_scale,
                                 *settings.probe_seed),
              1e-12);
  }

  r.oracle_objective = oracle_objective;
  r.share_distance = distance;
  finalize(r);
  return r;
}

VerificationReport verify_cylinder(const CylinderProblem& p, const CylinderOracleSettings& settings) {
  return verify_cylinder_candidate(p, solve_cylinders(p), settings);
}

VerificationReport verify_cylinder_candidate(const CylinderProblem& p, const CylinderSolution& candidate,
                                             const CylinderOracleSettings& settings) {
  const auto shapes = p.shapes();
  const std::size_t n = p.size();
  const auto& perims = candidate.perimeters;
  if (perims.size() != n) throw std::invalid_argument("candidate perimeter count mismatch");

  VerificationReport r;
  {
    std::ostringstream os;
    os << "cylinders: n=" << n << ", height=" << p.height() << ", total_surface=" << p.total_surface();
    r.summary = os.str();
  }
  const double volume = cylinder_volume(p, perims);
  r.closed_form_objective = volume;
  r.oracle_objective = volume;

  add_check(r, "constraint_residual", constraint_residual(p, perims), settings.constraint_tolerance);
  add_check(r, "kkt_residual", kkt_residual(p, perims), settings.kkt_tolerance);

  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += shapes[i].lambda() * perims[i];
  mean /= static_cast<double>(n);
  double eq = 0.0;
  for (std::size_t i = 0; i < n; ++i) eq = std::max(eq, std::abs(shapes[i].lambda() * perims[i] - mean) / mean);
  add_check(r, "equalization_residual", eq, settings.equalization_tolerance);

  // Objective Hessian diag(2 lambda_i): every entry must be positive.
  double min_diag = std::numeric_limits<double>::infinity();
  for (const auto& s : shapes) min_diag = std::min(min_diag, 2.0 * s.lambda());
  r.checks.push_back({"hessian_min_diagonal", min_diag, 0.0, min_diag > 0.0});

  if (n == 2) {
    const bool pos = perims[0] > 0.0 && perims[1] > 0.0;
    const double det = pos ? bordered_hessian_2(shapes[0].lambda(), shapes[1].lambda(), perims[0],
                                                perims[1], p.height())
                           : std::numeric_limits<double>::infinity();
    // Strictly negative determinant certifies a constrained local minimum.
    r.checks.push_back({"bordered_hessian", det, 0.0, det < 0.0});

    const auto scan = scan_cylinder_pair(p, settings.scan_points);
    r.oracle_objective = scan.best_volume;
    add_check(r, "scan_volume_gap", std::max(0.0, (volume - scan.best_volume) / volume),
              settings.scan_volume_tolerance);
    const double dist = std::abs(scan.best_first_perimeter - perims[0]);
    r.share_distance = dist;
    add_check(r, "scan_argmin_distance", dist, scan.step * (1.0 + 1e-9));
  }
  if (all_tangential(shapes)) {
    bool pos = std::all_of(perims.begin(), perims.end(), [](double v) { return v > 0.0; });
    add_check(r, "inradius_spread",
              pos ? inradius_spread(shapes, perims) : std::numeric_limits<double>::infinity(),
              settings.inradius_tolerance);
  }
  if (settings.probe_seed) {
    add_check(r, "perturbation_gain",
              cylinder_perturbation_probe(p, perims, settings.probe_count, settings.probe_scale,
                                          *settings.probe_seed),
              1e-12);
  }
  finalize(r);
  return r;
}

}  // namespace isoalloc
