#pragma once

#include <stdexcept>

#include "isoalloc/kernels.hpp"

namespace isoalloc::kernels::detail {

inline void check_batch(const ObjectiveBatch& batch, std::span<double> out) {
  if (batch.shares.size() != batch.weights.size() * batch.count) {
    throw std::invalid_argument("objective batch: shares size does not match rows * count");
  }
  if (out.size() < batch.count) {
    throw std::invalid_argument("objective batch: output span too small");
  }
}

}  // namespace isoalloc::kernels::detail
