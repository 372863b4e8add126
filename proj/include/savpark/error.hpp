#pragma once

#include <stdexcept>
#include <string>

namespace savpark {

/// Input outside a function's documented domain (non-finite values, probabilities at 0 or 1, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario failed validation before any solve was attempted.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Scenario parameters fall outside the regime where the planning model is convex and well posed
/// (non-positive objective coefficients, non-positive cubic discriminant, negative space density).
class RegimeError : public std::runtime_error {
public:
  RegimeError(std::string what_failed, const std::string& message)
      : std::runtime_error(message), what_failed_(std::move(what_failed)) {}

  /// Short machine-readable tag, e.g. "P1", "discriminant", "y_star".
  const std::string& what_failed() const noexcept { return what_failed_; }

private:
  std::string what_failed_;
};

/// No feasible point satisfies the level-of-service constraint.
class InfeasibleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Objective produced a non-finite value during numerical minimization.
class EvaluationError : public std::runtime_error {
public:
  EvaluationError(double u, double v, const std::string& message)
      : std::runtime_error(message), u_(u), v_(v) {}
  double u() const noexcept { return u_; }
  double v() const noexcept { return v_; }

private:
  double u_;
  double v_;
};

/// File could not be read, written or parsed.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace savpark
