#pragma once

#include <optional>
#include <span>

#include "robustfit/model.hpp"
#include "robustfit/numerics.hpp"
#include "robustfit/weights.hpp"

namespace robustfit {

//! Outcome of a parametric fit: estimate, solver diagnostics, and the
//! plug-in sandwich covariance of sqrt(n) * (theta_hat - theta0).
struct FitResult {
  Vector theta;
  int iterations = 0;
  bool converged = false;
  double residual_norm = 0.0;
  Matrix sandwich;
};

//! Weighted L2 objective: integral of w f_theta^2 dx - (2/n) sum w(x_i) f_theta(x_i).
double q_objective(const Vector& theta, std::span<const double> data,
                   const WeightFunction& w, const UnivariateModel& model,
                   const QuadratureSpec& quad);

//! Estimating equation V_n(theta) = (1/n) sum w f_theta u - integral of
//! w f_theta^2 u dx. Equals -0.5 times the gradient of q_objective.
Vector v_score(const Vector& theta, std::span<const double> data,
               const WeightFunction& w, const UnivariateModel& model,
               const QuadratureSpec& quad);

//! Analytic Jacobian of v_score in theta, used by the Newton solver and as
//! the (negated) empirical plug-in J.
Matrix v_score_jacobian(const Vector& theta, std::span<const double> data,
                        const WeightFunction& w, const UnivariateModel& model,
                        const QuadratureSpec& quad);

//! Minimum weighted L2 fit: solves v_score = 0 by damped Newton from a
//! robust start (median, mad_scale) unless init is given.
FitResult fit_min_l2(std::span<const double> data, const UnivariateModel& model,
                     const WeightFunction& w,
                     const std::optional<Vector>& init = std::nullopt,
                     const SolverConfig& cfg = {},
                     const QuadratureSpec& quad = {});

}  // namespace robustfit
