#include "qagarch/localization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qagarch/errors.hpp"

namespace qagarch {

SearchBox::SearchBox(std::vector<double> lower_, std::vector<double> upper_)
    : lower(std::move(lower_)), upper(std::move(upper_)) {
  if (lower.size() != upper.size() || lower.empty()) {
    throw InvalidInput("search box bounds must be non-empty and of equal length");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) {
      throw InvalidInput("search box coordinate " + std::to_string(i) + " has lower >= upper");
    }
  }
}

double SearchBox::max_width() const noexcept {
  double w = 0.0;
  for (std::size_t i = 0; i < dimension(); ++i) w = std::max(w, width(i));
  return w;
}

std::vector<double> SearchBox::center() const {
  std::vector<double> c(dimension());
  for (std::size_t i = 0; i < dimension(); ++i) c[i] = 0.5 * (lower[i] + upper[i]);
  return c;
}

bool SearchBox::contains(std::span<const double> point) const noexcept {
  if (point.size() != dimension()) return false;
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (point[i] < lower[i] || point[i] > upper[i]) return false;
  }
  return true;
}

std::vector<double> SearchBox::clamp(std::span<const double> point) const {
  std::vector<double> out(point.begin(), point.end());
  for (std::size_t i = 0; i < out.size() && i < dimension(); ++i) {
    out[i] = std::clamp(out[i], lower[i], upper[i]);
  }
  return out;
}

void LocalizationConfig::validate() const {
  if (!(width_tol > 0.0)) throw InvalidInput("width_tol must be positive");
  if (!(omega_scan_step > 0.0)) throw InvalidInput("omega_scan_step must be positive");
  if (!(lower_floor > 0.0)) throw InvalidInput("lower_floor must be positive");
  if (!(alpha_beta_ceiling > lower_floor)) {
    throw InvalidInput("alpha_beta_ceiling must exceed lower_floor");
  }
  if (max_iterations == 0) throw InvalidInput("max_iterations must be positive");
}

namespace {

double partial(const ObjectiveFunctions& objective, std::span<const double> point, std::size_t i) {
  const double g = objective.gradient(point)[i];
  if (std::isnan(g)) {
    throw LocalizationError("gradient is NaN in coordinate " + std::to_string(i));
  }
  return g;
}

// Zero counts as a sign change.
bool signs_differ(double a, double b) noexcept {
  return a == 0.0 || b == 0.0 || std::signbit(a) != std::signbit(b);
}

}  // namespace

OmegaScan find_omega_bar(const ObjectiveFunctions& objective, const LocalizationConfig& config) {
  config.validate();
  std::vector<double> point(objective.dimension, config.probe_value);
  OmegaScan scan;
  for (std::size_t k = 0; k < config.max_iterations; ++k) {
    point[0] = config.lower_floor + static_cast<double>(k) * config.omega_scan_step;
    const double g = partial(objective, point, 0);
    scan.table.push_back({point[0], g});
    if (g > 0.0) {
      scan.omega_bar = point[0];
      scan.degenerate = k == 0;
      return scan;
    }
  }
  throw LocalizationError("no positive omega-derivative within " +
                          std::to_string(config.max_iterations) + " scan steps");
}

OmegaScan find_omega_bar(const TimeSeries& series, GarchOrder order,
                         const LocalizationConfig& config, const InitPolicy& policy) {
  return find_omega_bar(make_quasi_nll(series, order, policy), config);
}

LocalizationResult bisect_box(const ObjectiveFunctions& objective, SearchBox box,
                              const LocalizationConfig& config) {
  config.validate();
  if (box.dimension() != objective.dimension) {
    throw InvalidInput("search box dimension does not match the objective");
  }
  const auto done = [&] {
    for (std::size_t i = 0; i < box.dimension(); ++i) {
      if (box.width(i) > config.width_tol) return false;
    }
    return true;
  };

  LocalizationResult result;
  while (!done() && result.sweeps < config.max_iterations) {
    for (std::size_t i = 0; i < box.dimension(); ++i) {
      const double mid = 0.5 * (box.lower[i] + box.upper[i]);
      std::vector<double> probe = box.lower;
      const double at_lower = partial(objective, probe, i);
      probe[i] = mid;
      const double at_mid = partial(objective, probe, i);
      if (signs_differ(at_lower, at_mid)) {
        box.upper[i] = mid;
      } else {
        box.lower[i] = mid;
      }
    }
    ++result.sweeps;
  }
  result.converged = done();
  result.box = std::move(box);
  return result;
}

LocalizationResult localize(const ObjectiveFunctions& objective, double omega_bar,
                            const LocalizationConfig& config) {
  config.validate();
  if (!(omega_bar > config.lower_floor)) {
    throw InvalidInput("omega_bar must exceed the lower floor");
  }
  const std::size_t d = objective.dimension;
  std::vector<double> lower(d, config.lower_floor);
  std::vector<double> upper(d, config.alpha_beta_ceiling);
  upper[0] = omega_bar;
  return bisect_box(objective, SearchBox(std::move(lower), std::move(upper)), config);
}

LocalizationResult localize(const TimeSeries& series, GarchOrder order, double omega_bar,
                            const LocalizationConfig& config, const InitPolicy& policy) {
  return localize(make_quasi_nll(series, order, policy), omega_bar, config);
}

}  // namespace qagarch
