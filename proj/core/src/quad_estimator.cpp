#include "qagarch/quad_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "qagarch/errors.hpp"

namespace qagarch {

std::string_view method_name(Method method) noexcept {
  switch (method) {
    case Method::QuadFit:
      return "quadfit";
    case Method::NelderMead:
      return "nelder-mead";
    case Method::Bfgs:
      return "bfgs";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "quadfit") return Method::QuadFit;
  if (name == "nelder-mead") return Method::NelderMead;
  if (name == "bfgs") return Method::Bfgs;
  throw InvalidInput("unknown method '" + std::string(name) +
                     "' (expected quadfit, nelder-mead or bfgs)");
}

bool EstimationResult::has_flag(std::string_view prefix) const {
  return std::any_of(flags.begin(), flags.end(),
                     [&](const std::string& f) { return f.starts_with(prefix); });
}

std::vector<std::vector<double>> diagonal_cut(const SearchBox& box, std::size_t m) {
  if (m < 3) throw InvalidInput("diagonal cut needs m >= 3");
  for (std::size_t i = 0; i < box.dimension(); ++i) {
    if (!(box.width(i) > 0.0)) {
      throw InvalidInput("diagonal cut of a degenerate box (coordinate " + std::to_string(i) + ")");
    }
  }
  std::vector<std::vector<double>> points(m, std::vector<double>(box.dimension()));
  for (std::size_t j = 0; j < m; ++j) {
    const double frac = static_cast<double>(j) / static_cast<double>(m - 1);
    for (std::size_t i = 0; i < box.dimension(); ++i) {
      // Pin the last point to the corner exactly.
      points[j][i] = j + 1 == m ? box.upper[i] : box.lower[i] + frac * box.width(i);
    }
  }
  return points;
}

QuadraticFit fit_quadratic(std::span<const double> xs, std::span<const double> ys,
                           std::size_t coordinate_index) {
  if (xs.size() != ys.size()) throw InvalidInput("fit_quadratic: xs and ys differ in length");
  if (xs.size() < 3) throw InvalidInput("fit_quadratic needs at least 3 points");
  const auto k = static_cast<Eigen::Index>(xs.size());

  double center = 0.0;
  for (double x : xs) center += x;
  center /= static_cast<double>(xs.size());
  double scale = 0.0;
  for (double x : xs) scale = std::max(scale, std::fabs(x - center));
  if (!(scale > 0.0)) throw InvalidInput("fit_quadratic: all abscissae are equal");

  Eigen::MatrixXd design(k, 3);
  Eigen::VectorXd rhs(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const double z = (xs[static_cast<std::size_t>(r)] - center) / scale;
    design(r, 0) = 1.0;
    design(r, 1) = z;
    design(r, 2) = z * z;
    rhs(r) = ys[static_cast<std::size_t>(r)];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) throw InvalidInput("fit_quadratic: rank-deficient design");
  const Eigen::Vector3d b = qr.solve(rhs);

  QuadraticFit fit;
  fit.coordinate_index = coordinate_index;
  fit.a2 = b(2) / (scale * scale);
  fit.a1 = b(1) / scale - 2.0 * b(2) * center / (scale * scale);
  fit.a0 = b(0) - b(1) * center / scale + b(2) * center * center / (scale * scale);
  fit.rss = (rhs - design * b).squaredNorm();
  return fit;
}

double vertex(const QuadraticFit& fit) {
  if (!fit.convex()) {
    throw EstimationError("quadratic fit for coordinate " + std::to_string(fit.coordinate_index) +
                          " is not convex (a2 <= 0)");
  }
  return -fit.a1 / (2.0 * fit.a2);
}

EstimationResult estimate(const ObjectiveFunctions& objective, GarchOrder order,
                          const QuadFitConfig& config) {
  order.validate();
  if (objective.dimension != order.dimension()) {
    throw InvalidInput("objective dimension does not match the GARCH order");
  }
  const auto names = coordinate_names(order);

  EstimationResult result;
  result.method = Method::QuadFit;

  auto scan = find_omega_bar(objective, config.localization);
  if (scan.degenerate) {
    throw EstimationError("omega scan stopped at the floor; the objective decreases as omega -> 0");
  }
  auto located = localize(objective, scan.omega_bar, config.localization);
  if (!located.converged) {
    result.flags.push_back("not-converged: localization hit max_iterations");
  }
  const SearchBox& box = located.box;

  DiagonalCut cut;
  cut.points = diagonal_cut(box, config.m);
  cut.values.reserve(cut.points.size());
  for (const auto& pt : cut.points) cut.values.push_back(objective.value(pt));
  result.evaluations = cut.points.size();

  std::vector<double> theta(order.dimension());
  std::vector<double> xs(cut.points.size());
  for (std::size_t i = 0; i < order.dimension(); ++i) {
    for (std::size_t j = 0; j < cut.points.size(); ++j) xs[j] = cut.points[j][i];
    const QuadraticFit fit = fit_quadratic(xs, cut.values, i);
    if (!fit.convex()) {
      throw EstimationError("quadratic fit for " + names[i] + " is not convex (a2 = " +
                            std::to_string(fit.a2) + ")");
    }
    const double v = vertex(fit);
    theta[i] = std::clamp(v, box.lower[i], box.upper[i]);
    if (theta[i] != v) {
      std::ostringstream msg;
      msg << "clamped: " << names[i] << " vertex " << v << " outside [" << box.lower[i] << ", "
          << box.upper[i] << "]";
      result.flags.push_back(msg.str());
    }
    result.fits.push_back(fit);
  }

  result.theta_hat = ParamVector::from_flat(order, theta);
  if (!(result.theta_hat.persistence() < 1.0)) {
    std::ostringstream msg;
    msg << "non-stationary: sum(alpha) + sum(beta) = " << result.theta_hat.persistence();
    result.flags.push_back(msg.str());
  }
  result.objective_at_estimate = objective.value(theta);
  result.evaluations += 1;
  result.scan = std::move(scan);
  result.box = box;
  result.cut = std::move(cut);
  return result;
}

EstimationResult estimate(const TimeSeries& series, GarchOrder order, const QuadFitConfig& config) {
  auto result = estimate(make_quasi_nll(series, order, config.policy), order, config);
  if (series.size() <= 10 * order.dimension()) {
    result.flags.insert(result.flags.begin(),
                        "short-series: n = " + std::to_string(series.size()) + " <= 10*d");
  }
  return result;
}

}  // namespace qagarch
