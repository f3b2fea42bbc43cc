#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "robustfit/common.hpp"

namespace robustfit {

enum class QuadMethod { gauss_hermite, adaptive_truncated };

//! Quadrature over the real line. Gauss-Hermite for integrands of the form
//! polynomial x Gaussian, adaptive Simpson over a truncated window otherwise.
struct QuadratureSpec {
  QuadMethod method = QuadMethod::gauss_hermite;
  int node_count = 80;           // gauss_hermite, >= 20
  double abs_tol = 1e-13;        // adaptive
  double rel_tol = 1e-10;        // adaptive
  double truncation_radius = 12.0;  // adaptive window, in spread units
  int max_depth = 48;            // adaptive recursion limit

  static QuadratureSpec gauss_hermite(int nodes = 80);
  static QuadratureSpec adaptive(double rel_tol = 1e-10, double radius = 12.0);
  void validate() const;
};

//! Location/spread hint steering node placement.
struct ScaleHint {
  double center = 0.0;
  double spread = 1.0;
};

//! Combines Gaussian exponent factors exp(-precision_i (x - center_i)^2 / 2)
//! into the (center, spread) of the product. Total precision must be positive.
ScaleHint gaussian_product_hint(std::span<const std::pair<double, double>> center_precision);

double integrate(const std::function<double(double)>& f, const ScaleHint& hint,
                 const QuadratureSpec& spec);
Vector integrate_vector(const std::function<Vector(double)>& f, int dim,
                        const ScaleHint& hint, const QuadratureSpec& spec);
Matrix integrate_matrix(const std::function<Matrix(double)>& f, int rows, int cols,
                        const ScaleHint& hint, const QuadratureSpec& spec);

//! Gauss-Hermite rule mapped to plain dx integration: integral f dx
//! approximately sum_i weight_i f(node_i), for the standard exp(-t^2) weight
//! already folded in.
struct GaussHermiteRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // includes the exp(t^2) factor
};
const GaussHermiteRule& gauss_hermite_rule(int node_count);

struct SolverConfig {
  double grad_tol = 1e-8;
  int max_iter = 200;
  double damping = 0.5;  // backtracking factor, in (0,1)
  void validate() const;
};

struct SolverResult {
  Vector theta;
  int iterations = 0;
  bool converged = false;
  double residual_norm = 0.0;  // sup norm of g at theta
};

//! Damped Newton root finder for g(theta) = 0. Steps are backtracked until
//! the residual norm decreases (and the iterate stays inside the domain).
//! A singular Jacobian falls back to a gradient step on 0.5*||g||^2;
//! persistent singularity throws SolverFailure.
SolverResult newton_solve(const std::function<Vector(const Vector&)>& g,
                          const std::function<Matrix(const Vector&)>& g_jacobian,
                          Vector init, const SolverConfig& cfg,
                          const std::function<bool(const Vector&)>& in_domain = {});

//! Newton minimization of a smooth objective with finite-difference gradient
//! and Hessian.
SolverResult minimize_fd(const std::function<double(const Vector&)>& objective,
                         Vector init, const SolverConfig& cfg,
                         const std::function<bool(const Vector&)>& in_domain = {});

//! Sample median; midpoint of the two central order statistics for even n.
double median(std::span<const double> data);

//! 1.4826 * median(|x_i - median(x)|), consistent for sigma at the normal.
double mad_scale(std::span<const double> data);

}  // namespace robustfit
