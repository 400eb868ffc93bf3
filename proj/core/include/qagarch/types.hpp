#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qagarch {

/// Lag orders of a GARCH(p,q) model: p ARCH lags on X², q GARCH lags on σ².
/// ARCH(q') in the usual notation is GarchOrder{q', 0} here.
struct GarchOrder {
  std::size_t p = 1;
  std::size_t q = 0;

  /// Length of the flattened parameter vector, p + q + 1.
  [[nodiscard]] std::size_t dimension() const noexcept { return p + q + 1; }
  /// Number of leading observations that only condition the recursion.
  [[nodiscard]] std::size_t max_lag() const noexcept { return p > q ? p : q; }

  /// Throws InvalidInput unless p + q >= 1.
  void validate() const;

  friend bool operator==(const GarchOrder&, const GarchOrder&) = default;
};

/// θ = (ω, α₁..α_p, β₁..β_q).
///
/// This is a plain value: the constructor does not enforce positivity so that
/// membership tests such as in_stationarity_set() can be asked about any
/// candidate. Use satisfies_invariants() to check ω > 0, α, β >= 0.
struct ParamVector {
  double omega = 1.0;
  std::vector<double> alphas;
  std::vector<double> betas;

  ParamVector() = default;
  ParamVector(double omega_, std::vector<double> alphas_, std::vector<double> betas_ = {})
      : omega(omega_), alphas(std::move(alphas_)), betas(std::move(betas_)) {}

  [[nodiscard]] GarchOrder order() const noexcept { return {alphas.size(), betas.size()}; }
  [[nodiscard]] std::size_t dimension() const noexcept { return 1 + alphas.size() + betas.size(); }

  [[nodiscard]] bool satisfies_invariants() const noexcept;
  /// Σα + Σβ.
  [[nodiscard]] double persistence() const noexcept;

  /// Flattened as (ω, α₁..α_p, β₁..β_q); every module indexes coordinates this way.
  [[nodiscard]] std::vector<double> flatten() const;
  static ParamVector from_flat(GarchOrder order, std::span<const double> flat);

  friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

/// Coordinate names in flattening order: omega, alpha1.., beta1..
std::vector<std::string> coordinate_names(GarchOrder order);

struct SeriesMeta {
  std::optional<std::uint64_t> seed;
  std::optional<ParamVector> true_theta;
  std::size_t burn_in = 0;
};

/// An observed or simulated realization x_1..x_n (n >= 1, all finite).
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values, std::optional<SeriesMeta> meta = std::nullopt);

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
  [[nodiscard]] const std::optional<SeriesMeta>& meta() const noexcept { return meta_; }

  [[nodiscard]] double mean() const noexcept;
  /// Unbiased sample variance; 0 for n == 1.
  [[nodiscard]] double sample_variance() const noexcept;

 private:
  std::vector<double> values_;
  std::optional<SeriesMeta> meta_;
};

}  // namespace qagarch
