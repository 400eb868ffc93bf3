#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qagarch/types.hpp"

namespace qagarch {

/// How an unobserved pre-sample quantity (t <= 0) is filled in.
struct PresampleRule {
  enum class Kind { Zero, SampleVariance, Fixed };
  Kind kind = Kind::Zero;
  double value = 0.0;  // used only for Kind::Fixed

  static PresampleRule zero() { return {Kind::Zero, 0.0}; }
  static PresampleRule sample_variance() { return {Kind::SampleVariance, 0.0}; }
  static PresampleRule fixed(double v) { return {Kind::Fixed, v}; }

  [[nodiscard]] double resolve(const TimeSeries& series) const;
};

/// Pre-sample conventions of the quasi-likelihood.
///
/// Defaults: X_t = 0 and σ_t² = sample variance for t <= 0, and the first
/// max(p, q) terms are left out of the objective sum.
struct InitPolicy {
  PresampleRule presample_x = PresampleRule::zero();
  PresampleRule presample_sigma2 = PresampleRule::sample_variance();
  std::optional<std::size_t> skip_count;

  [[nodiscard]] std::size_t resolved_skip(GarchOrder order) const {
    return skip_count.value_or(order.max_lag());
  }
};

/// Quasi negative log-likelihood Σ_t [log σ̂_t² + X_t²/σ̂_t²] over the included terms.
/// Smaller is better.
struct Objective {
  double value = 0.0;
  /// Per-term q̂_t for t = skip+1..n; filled only when requested.
  std::vector<double> terms;
};

/// σ̂_t² for t = 1..n (index 0 holds t = 1).
[[nodiscard]] std::vector<double> conditional_variances(const TimeSeries& series,
                                                        const ParamVector& theta,
                                                        const InitPolicy& policy = {});

/// Throws InvalidInput if skip_count >= n.
[[nodiscard]] Objective quasi_nll(const TimeSeries& series, const ParamVector& theta,
                                  const InitPolicy& policy = {}, bool keep_terms = false);

/// Analytic gradient of quasi_nll in flattening order.
///
/// Uses ∂σ̂_t²/∂θ_i = s_{t,i} + Σ_j β_j ∂σ̂²_{t−j}/∂θ_i with s = 1 for ω,
/// X²_{t−i} for α_i, σ̂²_{t−j} for β_j, and zero pre-sample derivatives.
[[nodiscard]] std::vector<double> quasi_nll_gradient(const TimeSeries& series,
                                                     const ParamVector& theta,
                                                     const InitPolicy& policy = {});

/// Central finite differences of the analytic gradient, symmetrized as (H + Hᵀ)/2.
///
/// Without an explicit step, coordinate i uses h_i = 1e-4·max(1, |θ_i|), shrunk
/// to θ_i/2 where needed so every probe stays in the positive orthant. An
/// explicit step that leaves the orthant throws InvalidInput.
[[nodiscard]] Eigen::MatrixXd numeric_hessian(const TimeSeries& series, const ParamVector& theta,
                                              const InitPolicy& policy = {},
                                              std::optional<double> step = std::nullopt);

/// Type-erased objective on flattened parameter vectors. Localization and the
/// quadratic estimator only see this, so they can be driven by test stubs.
struct ObjectiveFunctions {
  std::size_t dimension = 0;
  std::function<double(std::span<const double>)> value;
  std::function<std::vector<double>(std::span<const double>)> gradient;
};

/// Binds quasi_nll / quasi_nll_gradient to a copy of `series`.
[[nodiscard]] ObjectiveFunctions make_quasi_nll(const TimeSeries& series, GarchOrder order,
                                                const InitPolicy& policy = {});

}  // namespace qagarch
