#pragma once

#include <cstddef>
#include <cstdint>

#include "qagarch/types.hpp"

namespace qagarch {

/// Σα_i + Σβ_j < 1 (strict). Assumes theta.satisfies_invariants().
[[nodiscard]] bool is_stationary(const ParamVector& theta) noexcept;

/// Membership in Θ₀ = {ω > 0, α, β >= 0, Σα + Σβ < 1}.
/// Throws InvalidInput if theta's dimension does not match `order`.
[[nodiscard]] bool in_stationarity_set(const ParamVector& theta, GarchOrder order);
[[nodiscard]] bool in_stationarity_set(const ParamVector& theta) noexcept;

/// ω / (1 − Σα − Σβ). Throws InvalidInput for non-stationary theta.
[[nodiscard]] double unconditional_variance(const ParamVector& theta);

inline constexpr std::size_t kDefaultBurnIn = 500;

/// Simulates n observations of X_t = σ_t ε_t, σ_t² = ω + Σα_i X²_{t−i} + Σβ_j σ²_{t−j}
/// with ε_t i.i.d. N(0,1) drawn from NormalSource(seed).
///
/// Pre-sample X² and σ² start at the unconditional variance and the first
/// burn_in draws are discarded. Output depends only on the arguments.
/// Throws InvalidInput if theta is outside Θ₀ or n == 0.
[[nodiscard]] TimeSeries simulate(const ParamVector& theta, std::size_t n, std::uint64_t seed,
                                  std::size_t burn_in = kDefaultBurnIn);

}  // namespace qagarch
