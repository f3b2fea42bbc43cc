#include "robustfit/asymptotics.hpp"

#include <array>
#include <cmath>

namespace robustfit {

namespace {

constexpr double kSqrtTwoPi = 2.50662827463100050242;

ScaleHint weighted_density_hint(const UnivariateModel& model, const Vector& theta,
                                const WeightFunction& w, int density_power,
                                int weight_power) {
  const auto [center, spread] = model.location_scale(theta);
  const std::array<std::pair<double, double>, 2> terms = {
      std::pair{center, density_power / (spread * spread)},
      w.gaussian_exponent(weight_power)};
  return gaussian_product_hint(terms);
}

ScaleHint kernel_density_hint(const UnivariateModel& model, const Vector& theta,
                              double x0, double h, int kernel_power) {
  const auto [center, spread] = model.location_scale(theta);
  const std::array<std::pair<double, double>, 2> terms = {
      std::pair{center, 1.0 / (spread * spread)},
      std::pair{x0, kernel_power / (h * h)}};
  return gaussian_product_hint(terms);
}

}  // namespace

Matrix l2_J(const Vector& theta, const WeightFunction& w, const UnivariateModel& model,
            const std::optional<DensityFn>& f_true, const QuadratureSpec& quad) {
  model.validate(theta);
  const int dim = model.param_dim();
  Matrix j = integrate_matrix(
      [&](double x) -> Matrix {
        const double f = model.density(x, theta);
        const Vector u = model.score(x, theta);
        return (w(x) * f * f) * (u * u.transpose());
      },
      dim, dim, weighted_density_hint(model, theta, w, 2, 1), quad);
  if (f_true) {
    // Off-model correction term; integrand vanishes under model conditions.
    j -= integrate_matrix(
        [&](double x) -> Matrix {
          const double f = model.density(x, theta);
          const Vector u = model.score(x, theta);
          const Matrix us = model.score_deriv(x, theta);
          return (w(x) * f * ((*f_true)(x) - f)) * (u * u.transpose() + us);
        },
        dim, dim, weighted_density_hint(model, theta, w, 1, 1), quad);
  }
  return 0.5 * (j + j.transpose());
}

Vector l2_xi0(const Vector& theta, const WeightFunction& w, const UnivariateModel& model,
              const std::optional<DensityFn>& f_true, const QuadratureSpec& quad) {
  model.validate(theta);
  const int dim = model.param_dim();
  if (f_true) {
    return integrate_vector(
        [&](double x) -> Vector {
          return (w(x) * model.density(x, theta) * (*f_true)(x)) * model.score(x, theta);
        },
        dim, weighted_density_hint(model, theta, w, 1, 1), quad);
  }
  return integrate_vector(
      [&](double x) -> Vector {
        const double f = model.density(x, theta);
        return (w(x) * f * f) * model.score(x, theta);
      },
      dim, weighted_density_hint(model, theta, w, 2, 1), quad);
}

Matrix l2_M(const Vector& theta, const WeightFunction& w, const UnivariateModel& model,
            const std::optional<DensityFn>& f_true, const QuadratureSpec& quad) {
  model.validate(theta);
  const int dim = model.param_dim();
  Matrix second_moment;
  if (f_true) {
    second_moment = integrate_matrix(
        [&](double x) -> Matrix {
          const double wx = w(x);
          const double f = model.density(x, theta);
          const Vector u = model.score(x, theta);
          return (wx * wx * f * f * (*f_true)(x)) * (u * u.transpose());
        },
        dim, dim, weighted_density_hint(model, theta, w, 2, 2), quad);
  } else {
    second_moment = integrate_matrix(
        [&](double x) -> Matrix {
          const double wx = w(x);
          const double f = model.density(x, theta);
          const Vector u = model.score(x, theta);
          return (wx * wx * f * f * f) * (u * u.transpose());
        },
        dim, dim, weighted_density_hint(model, theta, w, 3, 2), quad);
  }
  const Vector xi0 = l2_xi0(theta, w, model, f_true, quad);
  Matrix m = second_moment - xi0 * xi0.transpose();
  return 0.5 * (m + m.transpose());
}

Vector l2_influence(double x, const Vector& theta0, const WeightFunction& w,
                    const UnivariateModel& model, const QuadratureSpec& quad) {
  const Matrix j = l2_J(theta0, w, model, std::nullopt, quad);
  const Vector xi0 = l2_xi0(theta0, w, model, std::nullopt, quad);
  Eigen::FullPivLU<Matrix> lu(j);
  if (!lu.isInvertible()) throw SolverFailure("J matrix is singular", theta0);
  return lu.solve(w(x) * model.density(x, theta0) * model.score(x, theta0) - xi0);
}

std::pair<Matrix, Matrix> kl_Jh_Mh(const Vector& theta, double x0, const KernelSpec& kernel,
                                   const UnivariateModel& model, const QuadratureSpec& quad) {
  model.validate(theta);
  kernel.validate();
  const int dim = model.param_dim();
  const double h = kernel.bandwidth;
  const Matrix jh = integrate_matrix(
      [&](double t) -> Matrix {
        const Vector u = model.score(t, theta);
        return (kernel.evaluate(t - x0) * model.density(t, theta)) * (u * u.transpose());
      },
      dim, dim, kernel_density_hint(model, theta, x0, h, 1), quad);
  const Matrix second = integrate_matrix(
      [&](double t) -> Matrix {
        const double k = kernel.evaluate(t - x0);
        const Vector u = model.score(t, theta);
        return (k * k * model.density(t, theta)) * (u * u.transpose());
      },
      dim, dim, kernel_density_hint(model, theta, x0, h, 2), quad);
  const Vector xi0 = kl_xi0(theta, x0, kernel, model, quad);
  Matrix mh = second - xi0 * xi0.transpose();
  return {0.5 * (jh + jh.transpose()), 0.5 * (mh + mh.transpose())};
}

Vector kl_xi0(const Vector& theta, double x0, const KernelSpec& kernel,
              const UnivariateModel& model, const QuadratureSpec& quad) {
  model.validate(theta);
  kernel.validate();
  return integrate_vector(
      [&](double t) -> Vector {
        return (kernel.evaluate(t - x0) * model.density(t, theta)) * model.score(t, theta);
      },
      model.param_dim(), kernel_density_hint(model, theta, x0, kernel.bandwidth, 1), quad);
}

Vector kl_influence(double x, const Vector& theta, double x0, const KernelSpec& kernel,
                    const UnivariateModel& model, const QuadratureSpec& quad) {
  const auto [jh, mh] = kl_Jh_Mh(theta, x0, kernel, model, quad);
  (void)mh;
  const Vector xi0 = kl_xi0(theta, x0, kernel, model, quad);
  Eigen::FullPivLU<Matrix> lu(jh);
  if (!lu.isInvertible()) throw SolverFailure("J_h matrix is singular", theta);
  return lu.solve(kernel.evaluate(x - x0) * model.score(x, theta) - xi0);
}

Matrix fisher_information(const UnivariateModel& model, const Vector& theta,
                          const QuadratureSpec& quad) {
  model.validate(theta);
  const int dim = model.param_dim();
  const auto [center, spread] = model.location_scale(theta);
  Matrix fi = integrate_matrix(
      [&](double x) -> Matrix {
        const Vector u = model.score(x, theta);
        return model.density(x, theta) * (u * u.transpose());
      },
      dim, dim, ScaleHint{center, spread}, quad);
  return 0.5 * (fi + fi.transpose());
}

Matrix sandwich(const Matrix& J, const Matrix& M) {
  Eigen::FullPivLU<Matrix> lu(J);
  if (!lu.isInvertible()) {
    throw SolverFailure("sandwich: J matrix is singular", Vector());
  }
  const Matrix jinv = lu.inverse();
  Matrix s = jinv * M * jinv.transpose();
  return 0.5 * (s + s.transpose());
}

Matrix NormalDiagJM::J() const {
  Matrix j = Matrix::Zero(2, 2);
  j(0, 0) = j_mu;
  j(1, 1) = j_sigma;
  return j;
}

Matrix NormalDiagJM::M() const {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = m_mu;
  m(1, 1) = m_sigma;
  return m;
}

NormalDiagJM normal_l2_JM(double sigma, double delta) {
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  if (!(delta >= 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in [0,1)");
  const double b = 2.0 - delta;      // exponent of w f^2
  const double a = 3.0 - 2.0 * delta;  // exponent of w^2 f^3
  const double s3 = sigma * sigma * sigma;
  const double s4 = s3 * sigma;
  NormalDiagJM r;
  r.j_mu = 1.0 / (s3 * kSqrtTwoPi) * std::pow(b, -1.5);
  r.j_sigma = 1.0 / (s3 * kSqrtTwoPi) / std::sqrt(b) * (1.0 - 2.0 / b + 3.0 / (b * b));
  r.m_mu = 1.0 / (s4 * 2.0 * M_PI) * std::pow(a, -1.5);
  r.m_sigma = 1.0 / (s4 * 2.0 * M_PI) *
              ((1.0 / std::sqrt(a)) * (1.0 - 2.0 / a + 3.0 / (a * a)) -
               (1.0 - delta) * (1.0 - delta) / (b * b * b));
  return r;
}

NormalDiagJM normal_kl_JM(double sigma, double k, bool corrected_j_sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  if (!(k > 0.0)) throw InvalidInput("k must be positive");
  const double h = k * sigma;
  const double r2 = 1.0 + 1.0 / (k * k);
  const double s2 = 1.0 + 2.0 / (k * k);
  const double R = std::sqrt(r2);
  const double S = std::sqrt(s2);
  const double s_sq = sigma * sigma;
  NormalDiagJM out;
  out.j_mu = 1.0 / (s_sq * kSqrtTwoPi * h) / (R * r2);
  out.m_mu = 1.0 / (s_sq * 2.0 * M_PI * h * h) / (S * s2);
  // Only the 1/R-corrected form reproduces the variance obtained by direct
  // quadrature of J_h; the uncorrected variant is kept for comparison.
  out.j_sigma = 1.0 / (s_sq * kSqrtTwoPi * h) * (corrected_j_sigma ? 1.0 / R : 1.0) *
                (1.0 - 2.0 / r2 + 3.0 / (r2 * r2));
  out.m_sigma = 1.0 / (s_sq * 2.0 * M_PI * h * h) *
                ((1.0 / S) * (1.0 - 2.0 / s2 + 3.0 / (s2 * s2)) -
                 (1.0 / r2) * (1.0 - 1.0 / r2) * (1.0 - 1.0 / r2));
  return out;
}

std::pair<double, double> normal_l2_variances(double sigma, double delta) {
  const NormalDiagJM jm = normal_l2_JM(sigma, delta);
  return {jm.m_mu / (jm.j_mu * jm.j_mu), jm.m_sigma / (jm.j_sigma * jm.j_sigma)};
}

std::pair<double, double> normal_kl_variances(double sigma, double k,
                                              bool corrected_j_sigma) {
  const NormalDiagJM jm = normal_kl_JM(sigma, k, corrected_j_sigma);
  return {jm.m_mu / (jm.j_mu * jm.j_mu), jm.m_sigma / (jm.j_sigma * jm.j_sigma)};
}

namespace {
AsymptoticReport make_report(Matrix j, Matrix m, const UnivariateModel& model,
                             const Vector& theta, const QuadratureSpec& quad) {
  AsymptoticReport report;
  report.J = std::move(j);
  report.M = std::move(m);
  report.sandwich = sandwich(report.J, report.M);
  report.fisher = fisher_information(model, theta, quad);
  Eigen::FullPivLU<Matrix> lu(report.fisher);
  if (!lu.isInvertible()) throw SolverFailure("Fisher information is singular", theta);
  const Matrix bound = lu.inverse();
  report.efficiency = bound.diagonal().cwiseQuotient(report.sandwich.diagonal());
  report.theta0 = theta;
  return report;
}
}  // namespace

AsymptoticReport l2_report(const Vector& theta, const WeightFunction& w,
                           const UnivariateModel& model, const QuadratureSpec& quad) {
  return make_report(l2_J(theta, w, model, std::nullopt, quad),
                     l2_M(theta, w, model, std::nullopt, quad), model, theta, quad);
}

AsymptoticReport kl_report(const Vector& theta, double x0, const KernelSpec& kernel,
                           const UnivariateModel& model, const QuadratureSpec& quad) {
  auto [jh, mh] = kl_Jh_Mh(theta, x0, kernel, model, quad);
  return make_report(std::move(jh), std::move(mh), model, theta, quad);
}

Matrix l2_J_empirical(const Vector& theta, std::span<const double> data,
                      const WeightFunction& w, const UnivariateModel& model,
                      const QuadratureSpec& quad) {
  model.validate(theta);
  if (data.empty()) throw InvalidInput("empirical plug-in needs data");
  const int dim = model.param_dim();
  const Matrix integral = integrate_matrix(
      [&](double x) -> Matrix {
        const double f = model.density(x, theta);
        const Vector u = model.score(x, theta);
        const Matrix us = model.score_deriv(x, theta);
        return (w(x) * f * f) * (2.0 * (u * u.transpose()) + us);
      },
      dim, dim, weighted_density_hint(model, theta, w, 2, 1), quad);
  Matrix emp = Matrix::Zero(dim, dim);
  for (double x : data) {
    const double f = model.density(x, theta);
    const Vector u = model.score(x, theta);
    emp += (w(x) * f) * (u * u.transpose() + model.score_deriv(x, theta));
  }
  emp /= static_cast<double>(data.size());
  Matrix j = integral - emp;
  return 0.5 * (j + j.transpose());
}

Matrix l2_M_empirical(const Vector& theta, std::span<const double> data,
                      const WeightFunction& w, const UnivariateModel& model,
                      const QuadratureSpec& quad) {
  (void)quad;
  model.validate(theta);
  if (data.empty()) throw InvalidInput("empirical plug-in needs data");
  const int dim = model.param_dim();
  Matrix second = Matrix::Zero(dim, dim);
  Vector xi = Vector::Zero(dim);
  for (double x : data) {
    const double wx = w(x);
    const double f = model.density(x, theta);
    const Vector u = model.score(x, theta);
    second += (wx * wx * f * f) * (u * u.transpose());
    xi += (wx * f) * u;
  }
  const double n = static_cast<double>(data.size());
  second /= n;
  xi /= n;
  Matrix m = second - xi * xi.transpose();
  return 0.5 * (m + m.transpose());
}

}  // namespace robustfit
