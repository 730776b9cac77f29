#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"
#include "isoalloc/allocator.hpp"
#include "isoalloc/oracle.hpp"
#include "random_problems.hpp"

using namespace isoalloc;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

AllocationProblem textbook(double length = 1.0) {
  return AllocationProblem({lambda_ball(2), lambda_regular_polygon(4)}, length);
}

}  // namespace

TEST_CASE("enclosed_measure") {
  CHECK(rel(enclosed_measure(lambda_ball(2), 2.0 * pi), pi) < 1e-15);
  CHECK(rel(enclosed_measure(lambda_regular_polygon(4), 4.0), 1.0) < 1e-15);
  CHECK(rel(enclosed_measure(lambda_ball(3), 4.0 * pi), 4.0 * pi / 3.0) < 1e-14);
  CHECK(enclosed_measure(lambda_ball(5), 0.0) == 0.0);
  CHECK(enclosed_measure(lambda_ball(5), 1e-200) > 0.0);
  CHECK_THROWS_AS(enclosed_measure(lambda_ball(2), -1.0), std::invalid_argument);
}

TEST_CASE("problem construction errors") {
  CHECK_THROWS_AS(AllocationProblem({}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(AllocationProblem({lambda_ball(2), lambda_ball(3)}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(AllocationProblem({lambda_ball(2)}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(AllocationProblem({lambda_ball(2)}, INFINITY), std::invalid_argument);
}

TEST_CASE("textbook wire: circle and square") {
  const auto p = textbook();
  const auto a = optimal_allocation(p);
  CHECK(rel(a.shares[0], pi / (pi + 4.0)) < 1e-14);
  CHECK(rel(a.shares[1], 4.0 / (pi + 4.0)) < 1e-14);
  const double side = a.shares[1] / 4.0;
  const double radius = a.shares[0] / (2.0 * pi);
  CHECK(std::abs(side - 1.0 / (pi + 4.0)) <= 1e-12);
  CHECK(std::abs(side - 2.0 * radius) <= 1e-12);
  CHECK(side == doctest::Approx(0.140024788377889).epsilon(1e-13));
  CHECK(rel(a.objective, 1.0 / (4.0 * pi + 16.0)) < 1e-12);
  CHECK(a.residual <= 1e-12);
}

TEST_CASE("closed-form examples") {
  SUBCASE("identical classes split evenly") {
    const auto c = lambda_regular_polygon(7);
    const auto a = optimal_allocation(AllocationProblem({c, c, c, c, c}, 3.5));
    for (double s : a.shares) CHECK(rel(s, 0.7) < 1e-15);
  }
  SUBCASE("sphere and cube") {
    const auto a = optimal_allocation(AllocationProblem({lambda_ball(3), lambda_platonic("cube")}, 1.0));
    // lambda_sphere^-2 = 36 pi, lambda_cube^-2 = 216.
    CHECK(rel(a.shares[1] / a.shares[0], 6.0 / pi) < 1e-13);
    CHECK(rel(a.shares[0], 0.343659225764793586) < 1e-13);
    CHECK(rel(a.shares[0], golden_section_two(std::vector{lambda_ball(3), lambda_platonic("cube")}, 1.0)) < 1e-8);
  }
  SUBCASE("single class takes the whole budget") {
    const auto a = optimal_allocation(AllocationProblem({lambda_hypercube(6)}, 12.5));
    CHECK(a.shares[0] == 12.5);
    CHECK(a.residual == 0.0);
  }
}

TEST_CASE("minimal_objective examples") {
  CHECK(rel(minimal_objective(textbook()), 1.0 / (4.0 * pi + 16.0)) < 1e-12);
  CHECK(rel(minimal_objective(AllocationProblem({lambda_ball(2)}, 2.0 * pi)), pi) < 1e-15);
  const auto sq = lambda_regular_polygon(4);
  CHECK(rel(minimal_objective(AllocationProblem({sq, sq}, 8.0)), 2.0) < 1e-15);
  // Confirmed on the lattice.
  const auto grid = simplex_grid_search(textbook().shapes(), 1.0, 10'000);
  CHECK(minimal_objective(textbook()) <= grid.objective);
  CHECK(grid.objective - minimal_objective(textbook()) < 1e-9);
}

TEST_CASE("equalization_residual") {
  const auto p = textbook();
  CHECK(equalization_residual(optimal_allocation(p), p.shapes()) <= 1e-12);
  const std::vector<double> half{0.5, 0.5};
  // lambda_i L_i = (1/(8 pi), 1/32); max deviation over the mean.
  CHECK(rel(equalization_residual(half, p.shapes()), 0.120198307023114752) < 1e-13);
  CHECK(equalization_residual(std::vector<double>{3.0}, std::vector{lambda_ball(4)}) == 0.0);
  CHECK_THROWS_AS(equalization_residual(std::vector<double>{1.0, 0.0}, p.shapes()), std::invalid_argument);
}

TEST_CASE("planar general formula reproduces the reciprocal-sum form") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> f(0.1, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<ShapeClass> shapes;
    const std::size_t n = 1 + t % 6;
    for (std::size_t i = 0; i < n; ++i) shapes.push_back(lambda_custom(2, f(rng) / (4.0 * pi)));
    const AllocationProblem p(shapes, 0.5 + t);
    const auto a = optimal_allocation(p);
    double s_total = 0.0;
    for (const auto& s : shapes) s_total += 1.0 / s.lambda();
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(rel(a.shares[i], (1.0 / shapes[i].lambda()) * p.budget() / s_total) < 1e-14);
    }
    REQUIRE(rel(a.objective, p.budget() * p.budget() / s_total) < 1e-12);
  }
}

TEST_CASE("allocation invariants on random problems") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 500; ++t) {
    const auto p = testing::random_allocation_problem(rng);
    const auto a = optimal_allocation(p);
    const double sum = std::accumulate(a.shares.begin(), a.shares.end(), 0.0);
    const double enc = std::accumulate(a.enclosed.begin(), a.enclosed.end(), 0.0);
    REQUIRE(rel(sum, p.budget()) <= 1e-12);
    REQUIRE(rel(enc, a.objective) <= 1e-12);
    REQUIRE(a.residual <= 1e-10);
    REQUIRE(std::all_of(a.shares.begin(), a.shares.end(), [](double s) { return s > 0.0; }));
  }
}

// The discrete minimiser of a separable convex sum under one equality
// constraint lies within n - 1 cells of the continuous one (one cell for
// n <= 2). Coarse lattices with n >= 4 do exceed one cell.
TEST_CASE("lattice oracle: never beaten, minimiser close to the closed form") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const auto p = testing::random_allocation_problem(rng);
    const std::size_t k = max_resolution_within_cap(p.size(), 400, 50'000);
    const auto grid = simplex_grid_search(p.shapes(), p.budget(), k);
    const auto a = optimal_allocation(p);
    CAPTURE(t);
    REQUIRE(a.objective <= grid.objective * (1.0 + 1e-12));
    const double cells = std::max<double>(1.0, static_cast<double>(p.size()) - 1.0);
    const double cell = p.budget() / static_cast<double>(k);
    for (std::size_t i = 0; i < p.size(); ++i) {
      REQUIRE(std::abs(grid.shares[i] - a.shares[i]) <= cells * cell * (1 + 1e-9));
    }
  }
}

TEST_CASE("random feasible perturbations never improve the closed form") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto p = testing::random_allocation_problem(rng);
    const auto a = optimal_allocation(p);
    REQUIRE(perturbation_probe(p.shapes(), p.budget(), a.shares, 100, 0.05, 1000 + t) <= 1e-12);
  }
}

TEST_CASE("scale laws") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const auto p = testing::random_allocation_problem(rng);
    std::vector<ShapeClass> shapes(p.shapes().begin(), p.shapes().end());
    const AllocationProblem q(shapes, 10.0 * p.budget());
    const auto a = optimal_allocation(p);
    const auto b = optimal_allocation(q);
    const double degree = static_cast<double>(p.dimension()) / (p.dimension() - 1);
    for (std::size_t i = 0; i < p.size(); ++i) REQUIRE(rel(b.shares[i], 10.0 * a.shares[i]) < 1e-13);
    REQUIRE(rel(b.objective, std::pow(10.0, degree) * a.objective) < 1e-12);
  }
}

TEST_CASE("equal inradii at the optimum") {
  std::mt19937_64 rng(5);
  for (int m : {2, 3, 4, 6}) {
    for (int t = 0; t < 50; ++t) {
      const auto p = testing::random_tangential_problem(rng, m);
      const auto a = optimal_allocation(p);
      std::vector<double> r;
      for (std::size_t i = 0; i < p.size(); ++i) r.push_back(inradius_from_share(p.shapes()[i], a.shares[i]));
      const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
      REQUIRE((*hi - *lo) / r.front() <= 1e-10);
    }
  }
}

TEST_CASE("two solids in space: derivative of V(A1)") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> f(0.1, 1.0);
  const double lb = ball_lambda_value(3);
  for (int t = 0; t < 50; ++t) {
    const double l1 = f(rng) * lb;
    const double l2 = f(rng) * lb;
    const double total = 0.5 + 20.0 * f(rng);
    const AllocationProblem p({lambda_custom(3, l1), lambda_custom(3, l2)}, total);
    auto volume = [&](double a1) { return l1 * std::pow(a1, 1.5) + l2 * std::pow(total - a1, 1.5); };
    auto derivative = [&](double a1) { return 1.5 * (l1 * std::sqrt(a1) - l2 * std::sqrt(total - a1)); };
    auto second = [&](double a1) { return 0.75 * (l1 / std::sqrt(a1) + l2 / std::sqrt(total - a1)); };

    const double opt = optimal_allocation(p).shares[0];
    REQUIRE(std::abs(derivative(opt)) <= 1e-10);
    const double h = 1e-6 * total;
    for (double x : {0.25, 0.5, 0.75}) {
      const double a1 = x * total;
      const double fd = (volume(a1 + h) - volume(a1 - h)) / (2.0 * h);
      REQUIRE(std::abs(fd - derivative(a1)) <= 1e-4 * std::abs(derivative(a1)) + 1e-12);
    }
    for (double x = 0.01; x < 1.0; x += 0.01) REQUIRE(second(x * total) > 0.0);
  }
}
