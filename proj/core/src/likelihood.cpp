#include "qagarch/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "qagarch/errors.hpp"
#include "qagarch/summation.hpp"

namespace qagarch {

namespace {

void check_theta(const ParamVector& theta) {
  if (!theta.satisfies_invariants()) {
    throw InvalidInput("likelihood needs omega > 0 and non-negative alpha, beta");
  }
}

struct Recursion {
  std::vector<double> sigma2;
  // Row-major n × d derivatives ∂σ̂_t²/∂θ_k; empty unless requested.
  std::vector<double> dsigma2;
};

// σ̂_t² for t = 1..n, optionally with the derivative recursion alongside.
Recursion run_recursion(const TimeSeries& series, const ParamVector& theta,
                        const InitPolicy& policy, bool with_derivatives) {
  const std::size_t n = series.size();
  const std::size_t p = theta.alphas.size();
  const std::size_t q = theta.betas.size();
  const std::size_t d = theta.dimension();
  const double x0 = policy.presample_x.resolve(series);
  const double x0_sq = x0 * x0;
  const double s0 = policy.presample_sigma2.resolve(series);
  const auto x = series.values();

  Recursion r;
  r.sigma2.resize(n);
  if (with_derivatives) r.dsigma2.assign(n * d, 0.0);

  for (std::size_t t = 0; t < n; ++t) {
    double s = theta.omega;
    for (std::size_t i = 1; i <= p; ++i) {
      const double lag_sq = t >= i ? x[t - i] * x[t - i] : x0_sq;
      s += theta.alphas[i - 1] * lag_sq;
    }
    for (std::size_t j = 1; j <= q; ++j) {
      s += theta.betas[j - 1] * (t >= j ? r.sigma2[t - j] : s0);
    }
    r.sigma2[t] = s;

    if (with_derivatives) {
      double* row = &r.dsigma2[t * d];
      row[0] = 1.0;
      for (std::size_t i = 1; i <= p; ++i) {
        row[i] = t >= i ? x[t - i] * x[t - i] : x0_sq;
      }
      for (std::size_t j = 1; j <= q; ++j) {
        row[p + j] = t >= j ? r.sigma2[t - j] : s0;
      }
      for (std::size_t j = 1; j <= q && j <= t; ++j) {
        const double* prev = &r.dsigma2[(t - j) * d];
        const double b = theta.betas[j - 1];
        for (std::size_t k = 0; k < d; ++k) row[k] += b * prev[k];
      }
    }
  }
  return r;
}

std::size_t checked_skip(const TimeSeries& series, const ParamVector& theta,
                         const InitPolicy& policy) {
  const std::size_t skip = policy.resolved_skip(theta.order());
  if (skip >= series.size()) {
    throw InvalidInput("skip_count (" + std::to_string(skip) + ") must be below n (" +
                       std::to_string(series.size()) + ")");
  }
  return skip;
}

}  // namespace

double PresampleRule::resolve(const TimeSeries& series) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::SampleVariance:
      return series.sample_variance();
    case Kind::Fixed:
      return value;
  }
  return 0.0;
}

std::vector<double> conditional_variances(const TimeSeries& series, const ParamVector& theta,
                                          const InitPolicy& policy) {
  check_theta(theta);
  return run_recursion(series, theta, policy, false).sigma2;
}

Objective quasi_nll(const TimeSeries& series, const ParamVector& theta, const InitPolicy& policy,
                    bool keep_terms) {
  check_theta(theta);
  const std::size_t skip = checked_skip(series, theta, policy);
  const auto sigma2 = run_recursion(series, theta, policy, false).sigma2;
  const auto x = series.values();

  Objective obj;
  if (keep_terms) obj.terms.reserve(series.size() - skip);
  CompensatedSum sum;
  for (std::size_t t = skip; t < series.size(); ++t) {
    const double term = std::log(sigma2[t]) + x[t] * x[t] / sigma2[t];
    sum += term;
    if (keep_terms) obj.terms.push_back(term);
  }
  obj.value = sum.value();
  return obj;
}

std::vector<double> quasi_nll_gradient(const TimeSeries& series, const ParamVector& theta,
                                       const InitPolicy& policy) {
  check_theta(theta);
  const std::size_t skip = checked_skip(series, theta, policy);
  const std::size_t d = theta.dimension();
  const auto rec = run_recursion(series, theta, policy, true);
  const auto x = series.values();

  std::vector<CompensatedSum> sums(d);
  for (std::size_t t = skip; t < series.size(); ++t) {
    const double s = rec.sigma2[t];
    const double weight = (1.0 - x[t] * x[t] / s) / s;
    const double* row = &rec.dsigma2[t * d];
    for (std::size_t k = 0; k < d; ++k) sums[k] += weight * row[k];
  }
  std::vector<double> grad(d);
  for (std::size_t k = 0; k < d; ++k) grad[k] = sums[k].value();
  return grad;
}

Eigen::MatrixXd numeric_hessian(const TimeSeries& series, const ParamVector& theta,
                                const InitPolicy& policy, std::optional<double> step) {
  check_theta(theta);
  const auto center = theta.flatten();
  const std::size_t d = center.size();
  const GarchOrder order = theta.order();

  std::vector<double> h(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double xi = center[i];
    if (step) {
      const double hi = *step;
      if (!(hi > 0.0)) throw InvalidInput("Hessian step must be positive");
      const bool exits = i == 0 ? xi - hi <= 0.0 : xi - hi < 0.0;
      if (exits) {
        throw InvalidInput("Hessian step leaves the positive orthant in coordinate " +
                           std::to_string(i));
      }
      h[i] = hi;
    } else {
      double hi = 1e-4 * std::max(1.0, std::fabs(xi));
      if (xi - hi <= 0.0) hi = 0.5 * xi;
      if (!(hi > 0.0)) {
        throw InvalidInput("Hessian needs an interior point; coordinate " + std::to_string(i) +
                           " is on the boundary");
      }
      h[i] = hi;
    }
  }

  Eigen::MatrixXd hess(d, d);
  auto probe = center;
  for (std::size_t i = 0; i < d; ++i) {
    probe[i] = center[i] + h[i];
    const auto g_plus = quasi_nll_gradient(series, ParamVector::from_flat(order, probe), policy);
    probe[i] = center[i] - h[i];
    const auto g_minus = quasi_nll_gradient(series, ParamVector::from_flat(order, probe), policy);
    probe[i] = center[i];
    for (std::size_t k = 0; k < d; ++k) {
      hess(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) =
          (g_plus[k] - g_minus[k]) / (2.0 * h[i]);
    }
  }
  return 0.5 * (hess + hess.transpose());
}

ObjectiveFunctions make_quasi_nll(const TimeSeries& series, GarchOrder order,
                                  const InitPolicy& policy) {
  order.validate();
  auto shared = std::make_shared<const TimeSeries>(series);
  ObjectiveFunctions fns;
  fns.dimension = order.dimension();
  fns.value = [shared, order, policy](std::span<const double> flat) {
    return quasi_nll(*shared, ParamVector::from_flat(order, flat), policy).value;
  };
  fns.gradient = [shared, order, policy](std::span<const double> flat) {
    return quasi_nll_gradient(*shared, ParamVector::from_flat(order, flat), policy);
  };
  return fns;
}

}  // namespace qagarch
