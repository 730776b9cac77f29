#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "isoalloc/kernels.hpp"

using namespace isoalloc::kernels;

namespace {

struct Fixture {
  std::vector<double> weights;
  std::vector<double> shares;
  std::size_t count;
};

Fixture random_batch(std::mt19937_64& rng, std::size_t rows, std::size_t count) {
  std::uniform_real_distribution<double> w(0.001, 0.1);
  std::uniform_real_distribution<double> x(0.0, 50.0);
  Fixture f{std::vector<double>(rows), std::vector<double>(rows * count), count};
  for (auto& v : f.weights) v = w(rng);
  for (auto& v : f.shares) v = x(rng);
  // Exact zeros exercise the boundary of the simplex.
  for (std::size_t j = 0; j < count; j += 7) f.shares[j] = 0.0;
  return f;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("power kinds per dimension") {
  CHECK(power_kind_for_dimension(2) == PowerKind::square);
  CHECK(power_kind_for_dimension(3) == PowerKind::three_halves);
  CHECK(power_kind_for_dimension(7) == PowerKind::general);
}

TEST_CASE("scalar objective batch against a direct loop") {
  const std::vector<double> w{0.5, 2.0};
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 0.0, 9.0};  // rows of 3
  std::vector<double> out(3);
  objective_batch_scalar({w, x, 3, PowerKind::square, 2.0}, out);
  CHECK(out[0] == 0.5 * 1 + 2.0 * 16);
  CHECK(out[1] == 0.5 * 4 + 0.0);
  CHECK(out[2] == 0.5 * 9 + 2.0 * 81);
  objective_batch_scalar({w, x, 3, PowerKind::three_halves, 1.5}, out);
  CHECK(out[2] == doctest::Approx(0.5 * std::pow(3.0, 1.5) + 2.0 * 27.0));
  objective_batch_scalar({w, x, 3, PowerKind::general, 1.25}, out);
  CHECK(out[0] == doctest::Approx(0.5 + 2.0 * std::pow(4.0, 1.25)));

  CHECK_THROWS_AS(objective_batch_scalar({w, x, 4, PowerKind::square, 2.0}, out), std::invalid_argument);
}

TEST_CASE("first_argmin picks the earliest minimum") {
  const std::vector<double> v{3, 1, 2, 1, 5, 1, 0.5, 0.5, 9};
  CHECK(first_argmin_scalar(v) == 6);
  CHECK(first_argmin_scalar(std::vector<double>{4.0}) == 0);
  CHECK_THROWS_AS(first_argmin_scalar(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
  if (!avx2_available()) {
    MESSAGE("AVX2 not available; equivalence test skipped");
    return;
  }
  std::mt19937_64 rng(99);
  for (std::size_t rows : {1u, 2u, 3u, 6u}) {
    for (std::size_t count : {1u, 3u, 4u, 5u, 17u, 1024u, 2049u}) {
      auto f = random_batch(rng, rows, count);
      for (auto kind : {PowerKind::square, PowerKind::three_halves, PowerKind::general}) {
        const double p = kind == PowerKind::square ? 2.0 : (kind == PowerKind::three_halves ? 1.5 : 7.0 / 6.0);
        const ObjectiveBatch batch{f.weights, f.shares, count, kind, p};
        std::vector<double> a(count), b(count);
        objective_batch_scalar(batch, a);
        objective_batch_avx2(batch, b);
        for (std::size_t j = 0; j < count; ++j) REQUIRE(bit_equal(a[j], b[j]));
        REQUIRE(first_argmin_scalar(a) == first_argmin_avx2(a));
      }
    }
  }
}

TEST_CASE("AVX2 argmin tie-breaking and tails") {
  if (!avx2_available()) return;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> small(0, 3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + trial % 37);
    for (auto& x : v) x = small(rng);  // many ties
    if (trial % 5 == 0) v[v.size() / 2] = -0.0;
    REQUIRE(first_argmin_scalar(v) == first_argmin_avx2(v));
  }
}

TEST_CASE("dispatch honours forced ISA") {
  force_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  if (avx2_available()) {
    force_isa(Isa::avx2);
    CHECK(active_isa() == Isa::avx2);
  } else {
    CHECK_THROWS_AS(force_isa(Isa::avx2), std::runtime_error);
  }
  force_isa(std::nullopt);
  CHECK(active_isa() == (avx2_available() ? Isa::avx2 : Isa::scalar));
}
