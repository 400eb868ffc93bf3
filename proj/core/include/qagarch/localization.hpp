#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qagarch/likelihood.hpp"
#include "qagarch/types.hpp"

namespace qagarch {

/// Per-coordinate box Π [lower_i, upper_i] in flattening order.
struct SearchBox {
  std::vector<double> lower;
  std::vector<double> upper;

  SearchBox() = default;
  /// Throws InvalidInput on size mismatch or lower_i >= upper_i.
  SearchBox(std::vector<double> lower_, std::vector<double> upper_);

  [[nodiscard]] std::size_t dimension() const noexcept { return lower.size(); }
  [[nodiscard]] double width(std::size_t i) const noexcept { return upper[i] - lower[i]; }
  [[nodiscard]] double max_width() const noexcept;
  [[nodiscard]] std::vector<double> center() const;
  /// Closed-box membership.
  [[nodiscard]] bool contains(std::span<const double> point) const noexcept;
  [[nodiscard]] std::vector<double> clamp(std::span<const double> point) const;
};

struct LocalizationConfig {
  double omega_scan_step = 0.2;
  double width_tol = 0.05;
  double lower_floor = 1e-4;
  double alpha_beta_ceiling = 0.9999;
  /// Value of every α, β coordinate while scanning for ω̄.
  double probe_value = 0.5;
  /// Cap on ω scan steps and on bisection sweeps.
  std::size_t max_iterations = 200;

  void validate() const;
};

struct ScanPoint {
  double omega;
  double derivative;
};

struct OmegaScan {
  double omega_bar = 0.0;
  /// Every evaluated (ω, ∂/∂ω) pair, in scan order; the last has positive derivative.
  std::vector<ScanPoint> table;
  /// Set when the derivative is already positive at the floor (e.g. an all-zero series).
  bool degenerate = false;
};

/// Scans ω = floor, floor + step, ... at (ω, probe, ..., probe) and returns the
/// first ω where ∂/∂ω of the objective is positive.
/// Throws LocalizationError if no positive derivative is found in max_iterations steps.
[[nodiscard]] OmegaScan find_omega_bar(const ObjectiveFunctions& objective,
                                       const LocalizationConfig& config = {});
[[nodiscard]] OmegaScan find_omega_bar(const TimeSeries& series, GarchOrder order,
                                       const LocalizationConfig& config = {},
                                       const InitPolicy& policy = {});

struct LocalizationResult {
  SearchBox box;
  std::size_t sweeps = 0;
  bool converged = false;
};

/// Derivative-sign dichotomy starting from [floor, ω̄] × [floor, ceiling]^{d−1}.
///
/// Each sweep visits ω, then α₁..α_p, then β₁..β_q. For coordinate i the i-th
/// partial is evaluated at the current lower corner and at the same point with
/// coordinate i moved to the interval midpoint. Differing signs (a zero counts
/// as differing) move upper_i to the midpoint, otherwise lower_i moves up.
/// Every coordinate is halved once per sweep until all widths are <= width_tol
/// or max_iterations sweeps have run (converged == false).
/// Throws InvalidInput if omega_bar <= floor.
[[nodiscard]] LocalizationResult localize(const ObjectiveFunctions& objective, double omega_bar,
                                          const LocalizationConfig& config = {});
[[nodiscard]] LocalizationResult localize(const TimeSeries& series, GarchOrder order,
                                          double omega_bar, const LocalizationConfig& config = {},
                                          const InitPolicy& policy = {});

/// Bisection on an explicit starting box (the general form used by localize()).
[[nodiscard]] LocalizationResult bisect_box(const ObjectiveFunctions& objective, SearchBox box,
                                            const LocalizationConfig& config = {});

}  // namespace qagarch
