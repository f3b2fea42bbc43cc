#pragma once

#include <functional>
#include <optional>
#include <span>

#include "robustfit/minl2.hpp"
#include "robustfit/model.hpp"
#include "robustfit/numerics.hpp"
#include "robustfit/weights.hpp"

namespace robustfit {

//! Local kernel-smoothed log likelihood around x0:
//! sum K_h(x_i - x0) log f(x_i, theta) - n * integral of K_h(t - x0) f(t, theta) dt.
double local_log_likelihood(const Vector& theta, double x0, const KernelSpec& kernel,
                            std::span<const double> data, const UnivariateModel& model,
                            const QuadratureSpec& quad);

//! Kernel-localized Kullback-Leibler distance from density f to f_theta:
//! integral of K_h(t - x0) [ f log(f/f_theta) - (f - f_theta) ] dt.
//! Nonnegative; the integrand limit f log(f/f_theta) -> 0 as f -> 0 is used.
double localized_kl_distance(const std::function<double(double)>& f, const Vector& theta,
                             double x0, const KernelSpec& kernel,
                             const UnivariateModel& model, const QuadratureSpec& quad,
                             const std::optional<ScaleHint>& f_hint = std::nullopt);

//! Normal-model criterion with normal kernel; minimizing it over (mu, sigma)
//! is equivalent to maximizing the local log likelihood.
double local_criterion(double mu, double sigma, double x0, double h,
                    std::span<const double> data);

//! Localization settings for the univariate robust KL fit.
struct LocalFitSpec {
  std::optional<double> x0;  // defaults to the preliminary location
  double k = 2.0;            // bandwidth multiple, h = k * sigma_tilde
  std::optional<NormalParams> prelim;  // (mu_tilde, sigma_tilde); median/MAD if absent
};

//! Robust KL fit of the normal: minimizes local_criterion with x0 at the robust
//! location. The sandwich comes from J_h, M_h at the fitted parameter.
FitResult fit_robust_kl(std::span<const double> data, const LocalFitSpec& spec,
                        const SolverConfig& cfg = {}, const QuadratureSpec& quad = {});

//! Multivariate localized-likelihood criterion with a normal kernel; the
//! 2*pi normalizers are deliberately dropped (they are theta-free).
double local_criterion_mvn(const Vector& mu, const Matrix& sigma, const Vector& mu_tilde,
                     const Matrix& sigma_tilde, double h, std::span<const Vector> data);

struct MvnLocalFitSpec {
  double h = 2.0;
  std::optional<Vector> mu_tilde;    // coordinatewise median if absent
  std::optional<Matrix> sigma_tilde;  // diag(mad_scale^2) if absent
};

struct MvnFitResult {
  MvnParams params;
  int iterations = 0;
  bool converged = false;
  double residual_norm = 0.0;
};

//! Robust location/scatter fit: minimizes local_criterion_mvn over (mu, log-Cholesky).
MvnFitResult fit_mvn_robust(std::span<const Vector> data, const MvnLocalFitSpec& spec,
                            const SolverConfig& cfg = {});

}  // namespace robustfit
