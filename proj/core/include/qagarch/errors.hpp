#pragma once

#include <stdexcept>
#include <string>

namespace qagarch {

/// Input or configuration that violates an operation's preconditions.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The derivative-sign search could not bracket the optimum.
class LocalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stage of the quadratic-approximation estimator failed (e.g. non-convex fit).
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical optimizer failure (non-finite start, line search exhausted).
class OptimizerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qagarch
