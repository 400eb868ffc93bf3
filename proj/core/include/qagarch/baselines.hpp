#pragma once

#include <span>
#include <vector>

#include "qagarch/estimation.hpp"
#include "qagarch/likelihood.hpp"
#include "qagarch/optimizers.hpp"

namespace qagarch {

/// Upper limit of α_i, β_j in the unconstrained BFGS parameterization.
inline constexpr double kCoefficientCeiling = 0.9999;

/// ω = exp(u₀), α_i, β_j = 0.9999·logistic(u_k). Bijective between the open set
/// {ω > 0, 0 < α, β < 0.9999} and R^d.
[[nodiscard]] std::vector<double> to_unconstrained(std::span<const double> theta);
[[nodiscard]] std::vector<double> from_unconstrained(std::span<const double> u);

/// ω = max(0.5·sample variance, 1e-4), every α_i, β_j = 0.1/(p+q).
[[nodiscard]] std::vector<double> default_start(const TimeSeries& series, GarchOrder order);

/// Baseline estimation of θ by minimizing quasi_nll.
///
/// NelderMead works on θ directly with +∞ outside {ω > 0, α, β >= 0}.
/// Bfgs works in the unconstrained parameterization above. Non-stationary and
/// boundary estimates are flagged. Throws InvalidInput for Method::QuadFit;
/// optimizer failures propagate as OptimizerError.
[[nodiscard]] EstimationResult estimate_with(Method method, const TimeSeries& series,
                                             GarchOrder order, const OptimizerConfig& config = {},
                                             const InitPolicy& policy = {});

}  // namespace qagarch
