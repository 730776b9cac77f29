// Compiled with -mavx2 (and without -mfma) when the target is x86-64.

#include <array>
#include <cmath>
#include <stdexcept>

#include "isoalloc/kernels.hpp"
#include "kernels/check.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace isoalloc::kernels {

#if defined(__AVX2__)

namespace {

constexpr std::size_t kLanes = 4;

template <class Power4, class Power1>
void accumulate_row(double w, const double* row, double* out, std::size_t count, Power4 pow4,
                    Power1 pow1) {
  const __m256d wv = _mm256_set1_pd(w);
  std::size_t j = 0;
  for (; j + kLanes <= count; j += kLanes) {
    const __m256d x = _mm256_loadu_pd(row + j);
    const __m256d acc = _mm256_loadu_pd(out + j);
    _mm256_storeu_pd(out + j, _mm256_add_pd(acc, _mm256_mul_pd(wv, pow4(x))));
  }
  for (; j < count; ++j) out[j] += w * pow1(row[j]);
}

}  // namespace

void objective_batch_avx2(const ObjectiveBatch& batch, std::span<double> out) {
  detail::check_batch(batch, out);
  const std::size_t count = batch.count;
  double* dst = out.data();
  for (std::size_t j = 0; j < count; ++j) dst[j] = 0.0;

  for (std::size_t i = 0; i < batch.weights.size(); ++i) {
    const double w = batch.weights[i];
    const double* row = batch.shares.data() + i * count;
    switch (batch.kind) {
      case PowerKind::square:
        accumulate_row(
            w, row, dst, count, [](__m256d x) { return _mm256_mul_pd(x, x); },
            [](double x) { return x * x; });
        break;
      case PowerKind::three_halves:
        accumulate_row(
            w, row, dst, count, [](__m256d x) { return _mm256_mul_pd(x, _mm256_sqrt_pd(x)); },
            [](double x) { return x * std::sqrt(x); });
        break;
      case PowerKind::general: {
        const double p = batch.exponent;
        accumulate_row(
            w, row, dst, count,
            [p](__m256d x) {
              alignas(32) std::array<double, kLanes> lane;
              _mm256_store_pd(lane.data(), x);
              for (auto& v : lane) v = std::pow(v, p);
              return _mm256_load_pd(lane.data());
            },
            [p](double x) { return std::pow(x, p); });
        break;
      }
    }
  }
}

std::size_t first_argmin_avx2(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("first_argmin of an empty span");
  const double* v = values.data();
  const std::size_t n = values.size();

  double best = v[0];
  std::size_t j = 0;
  if (n >= kLanes) {
    __m256d m = _mm256_loadu_pd(v);
    for (j = kLanes; j + kLanes <= n; j += kLanes) m = _mm256_min_pd(m, _mm256_loadu_pd(v + j));
    alignas(32) std::array<double, kLanes> lane;
    _mm256_store_pd(lane.data(), m);
    for (double x : lane) best = x < best ? x : best;
  }
  for (; j < n; ++j) best = v[j] < best ? v[j] : best;

  const __m256d target = _mm256_set1_pd(best);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(v + k), target, _CMP_EQ_OQ));
    if (mask != 0) return k + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  for (; k < n; ++k) {
    if (v[k] == best) return k;
  }
  return 0;
}

bool avx2_compiled() { return true; }

#else

void objective_batch_avx2(const ObjectiveBatch&, std::span<double>) {
  throw std::runtime_error("AVX2 kernels were not compiled for this target");
}

std::size_t first_argmin_avx2(std::span<const double>) {
  throw std::runtime_error("AVX2 kernels were not compiled for this target");
}

bool avx2_compiled() { return false; }

#endif

}  // namespace isoalloc::kernels
