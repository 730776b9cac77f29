#include <cmath>
#include <limits>
#include <stdexcept>

#include "isoalloc/kernels.hpp"
#include "kernels/check.hpp"

namespace isoalloc::kernels {

PowerKind power_kind_for_dimension(int m) {
  if (m == 2) return PowerKind::square;
  if (m == 3) return PowerKind::three_halves;
  return PowerKind::general;
}

void objective_batch_scalar(const ObjectiveBatch& batch, std::span<double> out) {
  detail::check_batch(batch, out);
  const std::size_t count = batch.count;
  for (std::size_t j = 0; j < count; ++j) out[j] = 0.0;

  for (std::size_t i = 0; i < batch.weights.size(); ++i) {
    const double w = batch.weights[i];
    const double* row = batch.shares.data() + i * count;
    switch (batch.kind) {
      case PowerKind::square:
        for (std::size_t j = 0; j < count; ++j) out[j] += w * (row[j] * row[j]);
        break;
      case PowerKind::three_halves:
        for (std::size_t j = 0; j < count; ++j) out[j] += w * (row[j] * std::sqrt(row[j]));
        break;
      case PowerKind::general:
        for (std::size_t j = 0; j < count; ++j) out[j] += w * std::pow(row[j], batch.exponent);
        break;
    }
  }
}

std::size_t first_argmin_scalar(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("first_argmin of an empty span");
  std::size_t best = 0;
  for (std::size_t j = 1; j < values.size(); ++j) {
    if (values[j] < values[best]) best = j;
  }
  return best;
}

}  // namespace isoalloc::kernels
