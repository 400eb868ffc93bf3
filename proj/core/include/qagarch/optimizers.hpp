#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace qagarch {

using ScalarFn = std::function<double(std::span<const double>)>;
using VectorFn = std::function<std::vector<double>(std::span<const double>)>;

struct OptimizerConfig {
  std::size_t max_evals = 20000;
  double f_tol = 1e-8;
  double x_tol = 1e-8;
  /// BFGS stops once the gradient sup-norm drops below this.
  double grad_tol = 1e-6;
  /// Starting point for estimate_with(); empty selects the fixed heuristic.
  std::optional<std::vector<double>> initial_point;

  void validate() const;
};

struct OptimizerResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  /// BFGS: number of line searches performed.
  std::size_t line_searches = 0;
  bool converged = false;
  /// Best objective value after each iteration.
  std::vector<double> best_trace;
};

/// Nelder–Mead simplex with reflection 1, expansion 2, contraction 0.5, shrink 0.5.
/// Stops when the simplex diameter < x_tol or the value spread < f_tol, or after
/// max_evals evaluations. Non-finite values are treated as +∞.
/// Throws OptimizerError if the objective is not finite at `start`.
[[nodiscard]] OptimizerResult nelder_mead(const ScalarFn& objective, std::span<const double> start,
                                          const OptimizerConfig& config = {});

/// BFGS on the inverse Hessian with Armijo backtracking (c1 = 1e-4, halving).
/// The update is skipped when sᵀy <= 1e-10. Throws OptimizerError when 60
/// halvings fail to produce a decrease, or when the start is not finite.
[[nodiscard]] OptimizerResult bfgs(const ScalarFn& objective, const VectorFn& gradient,
                                   std::span<const double> start,
                                   const OptimizerConfig& config = {});

}  // namespace qagarch
