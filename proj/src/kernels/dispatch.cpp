#include <atomic>
#include <stdexcept>

#include "isoalloc/kernels.hpp"

namespace isoalloc::kernels {

bool avx2_compiled();  // objective_avx2.cpp

namespace {

Isa detect() {
#if defined(__x86_64__) || defined(__i386__)
  if (avx2_compiled() && __builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_available() { return detect() == Isa::avx2; }

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

void force_isa(std::optional<Isa> isa) {
  if (isa == Isa::avx2 && !avx2_available()) {
    throw std::runtime_error("AVX2 requested but not available on this CPU/build");
  }
  selected().store(isa.value_or(detect()), std::memory_order_relaxed);
}

void objective_batch(const ObjectiveBatch& batch, std::span<double> out) {
  if (active_isa() == Isa::avx2) {
    objective_batch_avx2(batch, out);
  } else {
    objective_batch_scalar(batch, out);
  }
}

std::size_t first_argmin(std::span<const double> values) {
  return active_isa() == Isa::avx2 ? first_argmin_avx2(values) : first_argmin_scalar(values);
}

}  // namespace isoalloc::kernels
