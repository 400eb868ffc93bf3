#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "qagarch/errors.hpp"
#include "qagarch/optimizers.hpp"

namespace qagarch {
namespace {

double rosenbrock(std::span<const double> x) {
  return (1.0 - x[0]) * (1.0 - x[0]) + 100.0 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]);
}

std::vector<double> rosenbrock_gradient(std::span<const double> x) {
  return {-2.0 * (1.0 - x[0]) - 400.0 * x[0] * (x[1] - x[0] * x[0]),
          200.0 * (x[1] - x[0] * x[0])};
}

struct Quadratic3 {
  Eigen::Matrix3d a;
  Eigen::Vector3d b;

  Quadratic3() {
    a << 4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0;
    b << 1.0, -2.0, 0.5;
  }
  double value(std::span<const double> x) const {
    const Eigen::Map<const Eigen::Vector3d> v(x.data());
    return 0.5 * v.dot(a * v) - b.dot(v);
  }
  std::vector<double> gradient(std::span<const double> x) const {
    const Eigen::Map<const Eigen::Vector3d> v(x.data());
    const Eigen::Vector3d g = a * v - b;
    return {g(0), g(1), g(2)};
  }
  Eigen::Vector3d solution() const { return a.ldlt().solve(b); }
};

TEST(NelderMead, SeparableQuadratic) {
  const auto f = [](std::span<const double> x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + (x[1] - 2.0) * (x[1] - 2.0);
  };
  const std::vector<double> start{0.0, 0.0};
  const auto r = nelder_mead(f, start);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 2.0, 1e-4);
}

TEST(NelderMead, Rosenbrock) {
  const std::vector<double> start{-1.2, 1.0};
  const auto r = nelder_mead(rosenbrock, start);
  EXPECT_NEAR(r.x[0], 1.0, 1e-3);
  EXPECT_NEAR(r.x[1], 1.0, 1e-3);
}

TEST(NelderMead, BestValueNeverIncreases) {
  const std::vector<double> start{-1.2, 1.0};
  const auto r = nelder_mead(rosenbrock, start);
  ASSERT_GT(r.best_trace.size(), 10u);
  for (std::size_t k = 1; k < r.best_trace.size(); ++k) {
    EXPECT_LE(r.best_trace[k], r.best_trace[k - 1]);
  }
}

TEST(NelderMead, InfeasibleRegionIsAvoided) {
  const auto f = [](std::span<const double> x) {
    if (x[0] <= 0.0) return std::numeric_limits<double>::infinity();
    return x[0] - std::log(x[0]) + x[1] * x[1];
  };
  const std::vector<double> start{0.2, 0.3};
  const auto r = nelder_mead(f, start);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 0.0, 1e-4);
}

TEST(NelderMead, EvaluationBudget) {
  OptimizerConfig config;
  config.max_evals = 50;
  const std::vector<double> start{-1.2, 1.0};
  const auto r = nelder_mead(rosenbrock, start, config);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.evaluations, 50u + 2u);
}

TEST(NelderMead, NonFiniteStartThrows) {
  const auto f = [](std::span<const double>) { return std::numeric_limits<double>::quiet_NaN(); };
  const std::vector<double> start{1.0};
  EXPECT_THROW((void)nelder_mead(f, start), OptimizerError);
}

TEST(Bfgs, ConvexQuadratic) {
  const Quadratic3 q;
  OptimizerConfig config;
  config.grad_tol = 1e-10;
  const std::vector<double> start{0.0, 0.0, 0.0};
  const auto r = bfgs([&](auto x) { return q.value(x); }, [&](auto x) { return q.gradient(x); },
                      start, config);
  const Eigen::Vector3d want = q.solution();
  EXPECT_TRUE(r.converged);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.x[static_cast<std::size_t>(i)], want(i), 1e-8);
}

TEST(Bfgs, QuadraticLineSearchCount) {
  // Armijo halving is inexact, so finite termination after d+1 steps does not
  // apply; the count stays a small multiple of it.
  const Quadratic3 q;
  const std::vector<double> start{0.0, 0.0, 0.0};
  const auto r = bfgs([&](auto x) { return q.value(x); }, [&](auto x) { return q.gradient(x); },
                      start);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.line_searches, 3u * (3u + 1u));
}

TEST(Bfgs, Rosenbrock) {
  const std::vector<double> start{-1.2, 1.0};
  const auto r = bfgs(rosenbrock, rosenbrock_gradient, start);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], 1.0, 1e-6);
}

TEST(Bfgs, ValuesDecrease) {
  const std::vector<double> start{-1.2, 1.0};
  const auto r = bfgs(rosenbrock, rosenbrock_gradient, start);
  for (std::size_t k = 1; k < r.best_trace.size(); ++k) {
    EXPECT_LE(r.best_trace[k], r.best_trace[k - 1]);
  }
}

TEST(Bfgs, LineSearchFailureThrows) {
  // Finite only at the start, so no trial step is ever accepted.
  const auto f = [](std::span<const double> x) {
    return x[0] == 1.0 ? 1.0 : std::numeric_limits<double>::infinity();
  };
  const auto g = [](std::span<const double>) { return std::vector<double>{1.0}; };
  const std::vector<double> start{1.0};
  EXPECT_THROW((void)bfgs(f, g, start), OptimizerError);
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig config;
  config.f_tol = 0.0;
  EXPECT_THROW(config.validate(), InvalidInput);
  config = {};
  config.max_evals = 0;
  EXPECT_THROW(config.validate(), InvalidInput);
}

}  // namespace
}  // namespace qagarch
