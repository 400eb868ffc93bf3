#include "qagarch/model.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <string>

#include "qagarch/errors.hpp"
#include "qagarch/rng.hpp"

namespace qagarch {

void GarchOrder::validate() const {
  if (p + q < 1) {
    throw InvalidInput("GARCH order needs p + q >= 1");
  }
}

bool ParamVector::satisfies_invariants() const noexcept {
  if (!(omega > 0.0) || !std::isfinite(omega)) return false;
  const auto non_negative = [](double v) { return v >= 0.0 && std::isfinite(v); };
  return std::all_of(alphas.begin(), alphas.end(), non_negative) &&
         std::all_of(betas.begin(), betas.end(), non_negative);
}

double ParamVector::persistence() const noexcept {
  return std::accumulate(alphas.begin(), alphas.end(), 0.0) +
         std::accumulate(betas.begin(), betas.end(), 0.0);
}

std::vector<double> ParamVector::flatten() const {
  std::vector<double> flat;
  flat.reserve(dimension());
  flat.push_back(omega);
  flat.insert(flat.end(), alphas.begin(), alphas.end());
  flat.insert(flat.end(), betas.begin(), betas.end());
  return flat;
}

ParamVector ParamVector::from_flat(GarchOrder order, std::span<const double> flat) {
  if (flat.size() != order.dimension()) {
    throw InvalidInput("parameter vector has " + std::to_string(flat.size()) +
                       " coordinates, order needs " + std::to_string(order.dimension()));
  }
  ParamVector theta;
  theta.omega = flat[0];
  theta.alphas.assign(flat.begin() + 1, flat.begin() + 1 + static_cast<std::ptrdiff_t>(order.p));
  theta.betas.assign(flat.begin() + 1 + static_cast<std::ptrdiff_t>(order.p), flat.end());
  return theta;
}

std::vector<std::string> coordinate_names(GarchOrder order) {
  std::vector<std::string> names{"omega"};
  for (std::size_t i = 1; i <= order.p; ++i) names.push_back("alpha" + std::to_string(i));
  for (std::size_t j = 1; j <= order.q; ++j) names.push_back("beta" + std::to_string(j));
  return names;
}

TimeSeries::TimeSeries(std::vector<double> values, std::optional<SeriesMeta> meta)
    : values_(std::move(values)), meta_(std::move(meta)) {
  if (values_.empty()) {
    throw InvalidInput("time series must contain at least one observation");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidInput("time series value at t=" + std::to_string(i + 1) + " is not finite");
    }
  }
}

double TimeSeries::mean() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(size());
}

double TimeSeries::sample_variance() const noexcept {
  if (size() < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (double v : values_) ss += (v - m) * (v - m);
  return ss / static_cast<double>(size() - 1);
}

bool is_stationary(const ParamVector& theta) noexcept { return theta.persistence() < 1.0; }

bool in_stationarity_set(const ParamVector& theta) noexcept {
  return theta.satisfies_invariants() && is_stationary(theta);
}

bool in_stationarity_set(const ParamVector& theta, GarchOrder order) {
  if (theta.order() != order) {
    throw InvalidInput("parameter vector does not match GARCH(" + std::to_string(order.p) + "," +
                       std::to_string(order.q) + ")");
  }
  return in_stationarity_set(theta);
}

double unconditional_variance(const ParamVector& theta) {
  if (!theta.satisfies_invariants() || !is_stationary(theta)) {
    throw InvalidInput("unconditional variance requires sum(alpha) + sum(beta) < 1");
  }
  return theta.omega / (1.0 - theta.persistence());
}

TimeSeries simulate(const ParamVector& theta, std::size_t n, std::uint64_t seed,
                    std::size_t burn_in) {
  if (n == 0) throw InvalidInput("simulate needs n >= 1");
  if (!in_stationarity_set(theta)) {
    throw InvalidInput("simulate needs theta in the stationarity set: omega > 0, "
                       "alpha, beta >= 0 and sum(alpha) + sum(beta) < 1");
  }
  const std::size_t p = theta.alphas.size();
  const std::size_t q = theta.betas.size();
  const double v0 = unconditional_variance(theta);

  // Ring buffers of the most recent X² and σ² (index 0 = most recent).
  std::vector<double> x2(std::max<std::size_t>(p, 1), v0);
  std::vector<double> s2(std::max<std::size_t>(q, 1), v0);

  NormalSource rng(seed);
  std::vector<double> out;
  out.reserve(n);
  const std::size_t total = n + burn_in;
  for (std::size_t t = 0; t < total; ++t) {
    double sigma2 = theta.omega;
    for (std::size_t i = 0; i < p; ++i) sigma2 += theta.alphas[i] * x2[i];
    for (std::size_t j = 0; j < q; ++j) sigma2 += theta.betas[j] * s2[j];
    assert(sigma2 >= theta.omega);

    const double x = std::sqrt(sigma2) * rng.standard_normal();
    std::rotate(x2.rbegin(), x2.rbegin() + 1, x2.rend());
    x2[0] = x * x;
    std::rotate(s2.rbegin(), s2.rbegin() + 1, s2.rend());
    s2[0] = sigma2;
    if (t >= burn_in) out.push_back(x);
  }
  return TimeSeries(std::move(out), SeriesMeta{seed, theta, burn_in});
}

}  // namespace qagarch
