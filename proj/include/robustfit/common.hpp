#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>

namespace robustfit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

//! Invalid arguments or malformed data.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

//! All observations identical (zero robust scale) or otherwise unusable.
class DegenerateData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Adaptive quadrature did not reach the requested tolerance.
//! Carries the last (best) estimate.
class QuadratureFailure : public std::runtime_error {
 public:
  QuadratureFailure(const std::string& what, double last_estimate)
      : std::runtime_error(what), last_estimate_(last_estimate) {}
  double last_estimate() const { return last_estimate_; }

 private:
  double last_estimate_;
};

//! Root finder could not make progress (persistently singular Jacobian or
//! stalled line search). Carries the last iterate.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, Vector last_iterate)
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)) {}
  const Vector& last_iterate() const { return last_iterate_; }

 private:
  Vector last_iterate_;
};

}  // namespace robustfit
