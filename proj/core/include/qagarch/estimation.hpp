#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qagarch/localization.hpp"
#include "qagarch/types.hpp"

namespace qagarch {

enum class Method { QuadFit, NelderMead, Bfgs };

[[nodiscard]] std::string_view method_name(Method method) noexcept;
/// Accepts "quadfit", "nelder-mead", "bfgs". Throws InvalidInput otherwise.
[[nodiscard]] Method parse_method(std::string_view name);

/// Least-squares parabola a0 + a1·x + a2·x² fitted to one projected cut.
struct QuadraticFit {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double rss = 0.0;
  std::size_t coordinate_index = 0;

  [[nodiscard]] bool convex() const noexcept { return a2 > 0.0; }
  [[nodiscard]] double operator()(double x) const noexcept { return a0 + x * (a1 + x * a2); }
};

/// Objective sampled along the box diagonal.
struct DiagonalCut {
  std::vector<std::vector<double>> points;
  std::vector<double> values;
};

/// Output shared by every estimation method. Quad-fit specific members are
/// empty for the baselines.
struct EstimationResult {
  Method method = Method::QuadFit;
  ParamVector theta_hat;
  double objective_at_estimate = 0.0;
  std::vector<std::string> flags;

  std::optional<OmegaScan> scan;
  std::optional<SearchBox> box;
  std::optional<DiagonalCut> cut;
  std::vector<QuadraticFit> fits;

  std::size_t evaluations = 0;

  [[nodiscard]] bool has_flag(std::string_view prefix) const;
};

}  // namespace qagarch
