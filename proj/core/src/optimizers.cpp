#include "qagarch/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "qagarch/errors.hpp"

namespace qagarch {

void OptimizerConfig::validate() const {
  if (!(f_tol > 0.0) || !(x_tol > 0.0) || !(grad_tol > 0.0)) {
    throw InvalidInput("optimizer tolerances must be positive");
  }
  if (max_evals == 0) throw InvalidInput("max_evals must be positive");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double finite_or_inf(double v) { return std::isfinite(v) ? v : kInf; }

}  // namespace

OptimizerResult nelder_mead(const ScalarFn& objective, std::span<const double> start,
                            const OptimizerConfig& config) {
  config.validate();
  const std::size_t d = start.size();
  if (d == 0) throw InvalidInput("nelder_mead needs at least one coordinate");

  OptimizerResult result;
  const auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    return finite_or_inf(objective(x));
  };

  std::vector<std::vector<double>> simplex(d + 1, std::vector<double>(start.begin(), start.end()));
  std::vector<double> values(d + 1);
  values[0] = eval(simplex[0]);
  if (!std::isfinite(values[0])) {
    throw OptimizerError("nelder_mead: objective is not finite at the starting point");
  }
  for (std::size_t i = 0; i < d; ++i) {
    auto& x = simplex[i + 1];
    x[i] = x[i] != 0.0 ? 1.05 * x[i] : 0.00025;
    values[i + 1] = eval(x);
  }

  std::vector<std::size_t> idx(d + 1);
  std::vector<double> centroid(d);
  std::vector<double> trial(d);
  const auto along = [&](const std::vector<double>& from, double coef) {
    std::vector<double> out(d);
    for (std::size_t k = 0; k < d; ++k) out[k] = centroid[k] + coef * (from[k] - centroid[k]);
    return out;
  };

  while (true) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = idx.front();
    const std::size_t worst = idx.back();
    const std::size_t second_worst = idx[d - 1];
    result.best_trace.push_back(values[best]);

    double diameter = 0.0;
    for (std::size_t i = 0; i <= d; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        diameter = std::max(diameter, std::fabs(simplex[i][k] - simplex[best][k]));
      }
    }
    const double spread = values[worst] - values[best];
    if (diameter < config.x_tol || spread < config.f_tol) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= config.max_evals) break;
    ++result.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k];
    }
    for (double& c : centroid) c /= static_cast<double>(d);

    const auto reflected = along(simplex[worst], -1.0);
    const double f_reflected = eval(reflected);

    if (f_reflected < values[best]) {
      const auto expanded = along(simplex[worst], -2.0);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }

    bool accepted = false;
    if (f_reflected < values[worst]) {
      const auto outside = along(reflected, 0.5);
      const double f_outside = eval(outside);
      if (f_outside <= f_reflected) {
        simplex[worst] = outside;
        values[worst] = f_outside;
        accepted = true;
      }
    } else {
      const auto inside = along(simplex[worst], 0.5);
      const double f_inside = eval(inside);
      if (f_inside < values[worst]) {
        simplex[worst] = inside;
        values[worst] = f_inside;
        accepted = true;
      }
    }
    if (!accepted) {
      for (std::size_t i = 0; i <= d; ++i) {
        if (i == best) continue;
        for (std::size_t k = 0; k < d; ++k) {
          simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
        }
        values[i] = eval(simplex[i]);
      }
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best = static_cast<std::size_t>(best_it - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

OptimizerResult bfgs(const ScalarFn& objective, const VectorFn& gradient,
                     std::span<const double> start, const OptimizerConfig& config) {
  config.validate();
  const auto d = static_cast<Eigen::Index>(start.size());
  if (d == 0) throw InvalidInput("bfgs needs at least one coordinate");

  OptimizerResult result;
  const auto to_std = [](const Eigen::VectorXd& v) { return std::vector<double>(v.begin(), v.end()); };
  const auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    return objective(to_std(x));
  };
  const auto grad = [&](const Eigen::VectorXd& x) {
    const auto g = gradient(to_std(x));
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(g.data(), d));
  };

  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(start.data(), d);
  double f = eval(x);
  if (!std::isfinite(f)) throw OptimizerError("bfgs: objective is not finite at the starting point");
  Eigen::VectorXd g = grad(x);
  Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(d, d);
  bool scaled = false;
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxHalvings = 60;

  while (true) {
    result.best_trace.push_back(f);
    if (!g.allFinite()) throw OptimizerError("bfgs: gradient is not finite");
    if (g.lpNorm<Eigen::Infinity>() < config.grad_tol) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= config.max_evals) break;

    Eigen::VectorXd direction = -inv_hessian * g;
    double slope = g.dot(direction);
    if (!(slope < 0.0)) {
      inv_hessian.setIdentity();
      direction = -g;
      slope = -g.squaredNorm();
    }

    ++result.line_searches;
    double step = 1.0;
    Eigen::VectorXd x_new;
    double f_new = 0.0;
    bool found = false;
    for (int halvings = 0; halvings <= kMaxHalvings; ++halvings) {
      x_new = x + step * direction;
      if (x_new == x) break;
      f_new = eval(x_new);
      if (std::isfinite(f_new) && f_new <= f + kArmijo * step * slope) {
        found = true;
        break;
      }
      step *= 0.5;
    }
    if (!found) {
      throw OptimizerError("bfgs: line search found no decrease in 60 halvings");
    }
    ++result.iterations;

    const Eigen::VectorXd g_new = grad(x_new);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double f_old = f;
    x = x_new;
    f = f_new;
    g = g_new;

    const double sy = s.dot(y);
    if (sy > 1e-10) {
      if (!scaled) {
        inv_hessian *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd left = Eigen::MatrixXd::Identity(d, d) - rho * s * y.transpose();
      inv_hessian = left * inv_hessian * left.transpose() + rho * s * s.transpose();
    }

    const double scale_f = std::max(1.0, std::fabs(f));
    const double scale_x = std::max(1.0, x.lpNorm<Eigen::Infinity>());
    if (std::fabs(f_old - f) <= config.f_tol * scale_f &&
        s.lpNorm<Eigen::Infinity>() <= config.x_tol * scale_x) {
      // Stalled at floating-point resolution.
      result.converged = true;
      result.best_trace.push_back(f);
      break;
    }
  }

  result.x = to_std(x);
  result.value = f;
  return result;
}

}  // namespace qagarch
