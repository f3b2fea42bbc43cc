#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "robustfit/model.hpp"
#include "robustfit/numerics.hpp"
#include "robustfit/weights.hpp"

namespace robustfit {

using DensityFn = std::function<double(double)>;

//! Curvature matrix J of the minimum weighted L2 estimating equation.
//! Without f_true (model conditions) J = integral of w f_theta^2 u u' dx.
Matrix l2_J(const Vector& theta, const WeightFunction& w, const UnivariateModel& model,
            const std::optional<DensityFn>& f_true, const QuadratureSpec& quad);

//! Noise matrix M = integral of w^2 f_theta^2 f u u' dx - xi0 xi0'.
Matrix l2_M(const Vector& theta, const WeightFunction& w, const UnivariateModel& model,
            const std::optional<DensityFn>& f_true, const QuadratureSpec& quad);

//! xi0 = integral of w f_theta f u dx (equals integral of w f_theta^2 u dx
//! under model conditions).
Vector l2_xi0(const Vector& theta, const WeightFunction& w, const UnivariateModel& model,
              const std::optional<DensityFn>& f_true, const QuadratureSpec& quad);

//! Influence function J^{-1} { w(x) f_theta(x) u(x) - xi0 } at model conditions.
Vector l2_influence(double x, const Vector& theta0, const WeightFunction& w,
                    const UnivariateModel& model, const QuadratureSpec& quad);

//! Model-condition J_h and M_h of the local kernel-smoothed likelihood.
std::pair<Matrix, Matrix> kl_Jh_Mh(const Vector& theta, double x0, const KernelSpec& kernel,
                                   const UnivariateModel& model, const QuadratureSpec& quad);

Vector kl_xi0(const Vector& theta, double x0, const KernelSpec& kernel,
              const UnivariateModel& model, const QuadratureSpec& quad);

//! Influence function J_h^{-1} { K_h(x - x0) u(x) - xi0 }.
Vector kl_influence(double x, const Vector& theta, double x0, const KernelSpec& kernel,
                    const UnivariateModel& model, const QuadratureSpec& quad);

//! Fisher information integral of f_theta u u' dx.
Matrix fisher_information(const UnivariateModel& model, const Vector& theta,
                          const QuadratureSpec& quad);

//! J^{-1} M J^{-1}, symmetrized against round-off.
Matrix sandwich(const Matrix& J, const Matrix& M);

//! Diagonal normal-model J and M components, closed form.
struct NormalDiagJM {
  double j_mu = 0.0, j_sigma = 0.0, m_mu = 0.0, m_sigma = 0.0;
  Matrix J() const;
  Matrix M() const;
};

//! Closed-form J, M for the L2 fit of the normal with the exp_delta weight
//! family; delta = 0 is the constant weight.
NormalDiagJM normal_l2_JM(double sigma, double delta = 0.0);

//! Closed-form J_h, M_h for the local-likelihood normal fit with normal
//! kernel, x0 = mu and h = k * sigma. The J_sigma component carries a 1/R
//! factor, R = sqrt(1 + 1/k^2); pass corrected_j_sigma = false to drop that
//! factor (the uncorrected variant is kept so the discrepancy against direct
//! quadrature stays testable).
NormalDiagJM normal_kl_JM(double sigma, double k, bool corrected_j_sigma = true);

//! (var_mu, var_sigma) of the normal L2 fit, as M/J^2 from normal_l2_JM.
std::pair<double, double> normal_l2_variances(double sigma, double delta = 0.0);

//! (kappa_mu^2, kappa_sigma^2) of the robust KL normal fit at h = k * sigma.
std::pair<double, double> normal_kl_variances(double sigma, double k,
                                              bool corrected_j_sigma = true);

struct AsymptoticReport {
  Matrix J;
  Matrix M;
  Matrix sandwich;
  Matrix fisher;
  Vector efficiency;  // fisher^{-1} diagonal over sandwich diagonal
  Vector theta0;
};

AsymptoticReport l2_report(const Vector& theta, const WeightFunction& w,
                           const UnivariateModel& model, const QuadratureSpec& quad);
AsymptoticReport kl_report(const Vector& theta, double x0, const KernelSpec& kernel,
                           const UnivariateModel& model, const QuadratureSpec& quad);

//! Plug-in J at a fitted theta: sample averages replace the f-integrals.
Matrix l2_J_empirical(const Vector& theta, std::span<const double> data,
                      const WeightFunction& w, const UnivariateModel& model,
                      const QuadratureSpec& quad);

//! Plug-in M at a fitted theta.
Matrix l2_M_empirical(const Vector& theta, std::span<const double> data,
                      const WeightFunction& w, const UnivariateModel& model,
                      const QuadratureSpec& quad);

}  // namespace robustfit
