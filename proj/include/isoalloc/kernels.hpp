#pragma once

// Batched inner loops of the numerical oracles.
//
// Every kernel has a scalar reference and, on x86-64, an AVX2 variant built
// in its own translation unit with -mavx2. The dispatching entry points pick
// the widest variant the running CPU supports. Variants are bit-identical:
// lanes run the same per-row operation sequence as the scalar loop (no FMA
// contraction, IEEE sqrt, std::pow per lane for general exponents).

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace isoalloc::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// x^p evaluation strategy. `square` is x*x, `three_halves` is x*sqrt(x),
/// `general` is std::pow(x, p).
enum class PowerKind { square, three_halves, general };

/// Picks the exact strategy for p = m/(m-1).
PowerKind power_kind_for_dimension(int m);

/// Batch of `count` candidate points laid out row-major by shape:
/// shares[i * count + j] is the share of shape i in candidate j.
struct ObjectiveBatch {
  std::span<const double> weights;  // lambda_i, one per row
  std::span<const double> shares;   // weights.size() * count
  std::size_t count;
  PowerKind kind;
  double exponent;  // used for PowerKind::general
};

/// out[j] = sum_i weights[i] * shares[i][j]^p, rows summed in index order.
void objective_batch_scalar(const ObjectiveBatch& batch, std::span<double> out);
void objective_batch_avx2(const ObjectiveBatch& batch, std::span<double> out);
void objective_batch(const ObjectiveBatch& batch, std::span<double> out);

/// Index of the first minimum (smallest index among ties). Requires a
/// non-empty span without NaN.
std::size_t first_argmin_scalar(std::span<const double> values);
std::size_t first_argmin_avx2(std::span<const double> values);
std::size_t first_argmin(std::span<const double> values);

/// Whether the AVX2 variants were compiled in and the CPU runs them.
bool avx2_available();

/// Variant currently used by the dispatching entry points.
Isa active_isa();

/// Pins dispatch to `isa` (nullopt restores auto-detection). Requesting an
/// unavailable ISA throws std::runtime_error. Not thread-safe; meant for
/// tests and benchmarking.
void force_isa(std::optional<Isa> isa);

}  // namespace isoalloc::kernels
