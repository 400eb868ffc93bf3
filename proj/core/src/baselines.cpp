#include "qagarch/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qagarch/errors.hpp"
#include "qagarch/model.hpp"

namespace qagarch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundaryOmega = 1e-6;
// Below this the ω-derivative of the objective overflows.
constexpr double kBfgsOmegaFloor = 1e-250;

double logistic(double u) {
  return u >= 0.0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u));
}

bool feasible(std::span<const double> theta) {
  if (!(theta[0] > 0.0)) return false;
  for (std::size_t k = 1; k < theta.size(); ++k) {
    if (!(theta[k] >= 0.0)) return false;
  }
  return true;
}

// Points the transformed objective can evaluate; large steps in u can still
// overflow exp or produce NaN.
bool in_bfgs_domain(std::span<const double> theta) {
  if (!(theta[0] > kBfgsOmegaFloor && std::isfinite(theta[0]))) return false;
  return feasible(theta);
}

void add_common_flags(EstimationResult& result) {
  const double persistence = result.theta_hat.persistence();
  if (!(persistence < 1.0)) {
    std::ostringstream msg;
    msg << "non-stationary: sum(alpha) + sum(beta) = " << persistence;
    result.flags.push_back(msg.str());
  }
  if (result.theta_hat.omega < kBoundaryOmega) {
    std::ostringstream msg;
    msg << "boundary: omega = " << result.theta_hat.omega << " (objective decreasing as omega -> 0)";
    result.flags.push_back(msg.str());
  }
}

}  // namespace

std::vector<double> to_unconstrained(std::span<const double> theta) {
  if (theta.empty() || !(theta[0] > 0.0)) {
    throw InvalidInput("to_unconstrained needs omega > 0");
  }
  std::vector<double> u(theta.size());
  u[0] = std::log(theta[0]);
  for (std::size_t k = 1; k < theta.size(); ++k) {
    const double r = theta[k] / kCoefficientCeiling;
    if (!(r > 0.0 && r < 1.0)) {
      throw InvalidInput("to_unconstrained needs 0 < alpha, beta < 0.9999");
    }
    u[k] = std::log(r) - std::log1p(-r);
  }
  return u;
}

std::vector<double> from_unconstrained(std::span<const double> u) {
  std::vector<double> theta(u.size());
  if (u.empty()) return theta;
  theta[0] = std::exp(u[0]);
  for (std::size_t k = 1; k < u.size(); ++k) theta[k] = kCoefficientCeiling * logistic(u[k]);
  return theta;
}

std::vector<double> default_start(const TimeSeries& series, GarchOrder order) {
  order.validate();
  std::vector<double> start(order.dimension());
  start[0] = std::max(0.5 * series.sample_variance(), 1e-4);
  const double coef = 0.1 / static_cast<double>(order.p + order.q);
  for (std::size_t k = 1; k < start.size(); ++k) start[k] = coef;
  return start;
}

EstimationResult estimate_with(Method method, const TimeSeries& series, GarchOrder order,
                               const OptimizerConfig& config, const InitPolicy& policy) {
  order.validate();
  if (method == Method::QuadFit) {
    throw InvalidInput("estimate_with handles the baseline optimizers only");
  }
  const std::vector<double> start = config.initial_point.value_or(default_start(series, order));
  if (start.size() != order.dimension()) {
    throw InvalidInput("initial point does not match the GARCH order");
  }
  const auto nll = make_quasi_nll(series, order, policy);

  EstimationResult result;
  result.method = method;
  std::vector<double> theta;
  OptimizerResult opt;

  if (method == Method::NelderMead) {
    const ScalarFn penalized = [&](std::span<const double> x) {
      return feasible(x) ? nll.value(x) : kInf;
    };
    opt = nelder_mead(penalized, start, config);
    theta = opt.x;
  } else {
    const ScalarFn value = [&](std::span<const double> u) {
      const auto x = from_unconstrained(u);
      return in_bfgs_domain(x) ? nll.value(x) : kInf;
    };
    const VectorFn grad = [&](std::span<const double> u) {
      const auto x = from_unconstrained(u);
      if (!in_bfgs_domain(x)) return std::vector<double>(u.size(), std::numeric_limits<double>::quiet_NaN());
      auto g = nll.gradient(x);
      g[0] *= x[0];
      for (std::size_t k = 1; k < g.size(); ++k) {
        const double s = x[k] / kCoefficientCeiling;
        g[k] *= kCoefficientCeiling * s * (1.0 - s);
      }
      return g;
    };
    std::vector<double> clipped = start;
    for (std::size_t k = 1; k < clipped.size(); ++k) {
      clipped[k] = std::clamp(clipped[k], 1e-8, kCoefficientCeiling * (1.0 - 1e-8));
    }
    opt = bfgs(value, grad, to_unconstrained(clipped), config);
    theta = from_unconstrained(opt.x);
  }

  result.theta_hat = ParamVector::from_flat(order, theta);
  result.objective_at_estimate = opt.value;
  result.evaluations = opt.evaluations;
  if (!opt.converged) result.flags.push_back("not-converged: max_evals reached");
  add_common_flags(result);
  return result;
}

}  // namespace qagarch
