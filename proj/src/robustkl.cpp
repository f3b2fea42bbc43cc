#include "robustfit/robustkl.hpp"

#include <array>
#include <cmath>

#include "robustfit/asymptotics.hpp"

namespace robustfit {

namespace {

constexpr double kInvSqrtTwoPi = 0.39894228040143267794;

double std_normal_pdf(double z) { return kInvSqrtTwoPi * std::exp(-0.5 * z * z); }

void check_data(std::span<const double> data) {
  if (data.empty()) throw InvalidInput("data must be non-empty");
  for (double x : data) {
    if (!std::isfinite(x)) throw InvalidInput("data contains non-finite values");
  }
}

}  // namespace

double local_log_likelihood(const Vector& theta, double x0, const KernelSpec& kernel,
                            std::span<const double> data, const UnivariateModel& model,
                            const QuadratureSpec& quad) {
  check_data(data);
  model.validate(theta);
  kernel.validate();
  const double h = kernel.bandwidth;
  const auto [center, spread] = model.location_scale(theta);
  const std::array<std::pair<double, double>, 2> terms = {
      std::pair{center, 1.0 / (spread * spread)}, std::pair{x0, 1.0 / (h * h)}};
  const double integral = integrate(
      [&](double t) { return kernel.evaluate(t - x0) * model.density(t, theta); },
      gaussian_product_hint(terms), quad);
  double sum = 0.0;
  for (double x : data) sum += kernel.evaluate(x - x0) * model.log_density(x, theta);
  return sum - static_cast<double>(data.size()) * integral;
}

double localized_kl_distance(const std::function<double(double)>& f, const Vector& theta,
                             double x0, const KernelSpec& kernel,
                             const UnivariateModel& model, const QuadratureSpec& quad,
                             const std::optional<ScaleHint>& f_hint) {
  model.validate(theta);
  kernel.validate();
  const auto [center, spread] = model.location_scale(theta);
  ScaleHint hint{x0, std::max(std::max(spread, kernel.bandwidth),
                              std::abs(center - x0) + spread)};
  if (f_hint) {
    hint.spread = std::max(hint.spread, f_hint->spread + std::abs(f_hint->center - x0));
  }
  return integrate(
      [&](double t) {
        const double ft = f(t);
        const double gt = model.density(t, theta);
        double value = gt - ft;
        if (ft > 0.0) value += ft * (std::log(ft) - model.log_density(t, theta));
        return kernel.evaluate(t - x0) * value;
      },
      hint, quad);
}

double local_criterion(double mu, double sigma, double x0, double h,
                    std::span<const double> data) {
  check_data(data);
  if (!(sigma > 0.0) || !(h > 0.0)) {
    throw InvalidInput("local_criterion requires positive sigma and h");
  }
  if (!std::isfinite(mu) || !std::isfinite(x0)) {
    throw InvalidInput("local_criterion requires finite mu and x0");
  }
  double sum = 0.0;
  for (double x : data) {
    const double r = (x - mu) / sigma;
    sum += std_normal_pdf((x - x0) / h) / h * (std::log(sigma) + 0.5 * r * r);
  }
  const double tail_sd = std::sqrt(sigma * sigma + h * h);
  return sum / static_cast<double>(data.size()) +
         std_normal_pdf((x0 - mu) / tail_sd) / tail_sd;
}

FitResult fit_robust_kl(std::span<const double> data, const LocalFitSpec& spec,
                        const SolverConfig& cfg, const QuadratureSpec& quad) {
  check_data(data);
  if (!(spec.k > 0.0)) throw InvalidInput("bandwidth multiple k must be positive");
  NormalParams prelim;
  if (spec.prelim) {
    prelim = *spec.prelim;
    prelim.validate();
  } else {
    prelim.mu = median(data);
    prelim.sigma = mad_scale(data);
    if (!(prelim.sigma > 0.0)) {
      throw DegenerateData("all data points coincide; scale cannot be estimated");
    }
  }
  const double x0 = spec.x0.value_or(prelim.mu);
  const double h = spec.k * prelim.sigma;

  // Criterion values scale like the local kernel mass; normalize so the
  // gradient tolerance means the same thing for every bandwidth.
  double mass = std_normal_pdf(0.0) / std::sqrt(prelim.sigma * prelim.sigma + h * h);
  for (double x : data) mass += std_normal_pdf((x - x0) / h) / h / data.size();

  // Optimize over (mu, log sigma) so the domain is unconstrained.
  auto objective = [&](const Vector& t) {
    return local_criterion(t[0], std::exp(t[1]), x0, h, data) / mass;
  };
  Vector init(2);
  init << prelim.mu, std::log(prelim.sigma);
  const SolverResult sol = minimize_fd(objective, init, cfg);

  FitResult result;
  result.theta = Vector(2);
  result.theta << sol.theta[0], std::exp(sol.theta[1]);
  result.iterations = sol.iterations;
  result.converged = sol.converged;
  result.residual_norm = sol.residual_norm;

  const NormalModel model;
  const auto [jh, mh] = kl_Jh_Mh(result.theta, x0, KernelSpec{h}, model, quad);
  result.sandwich = sandwich(jh, mh);
  return result;
}

double local_criterion_mvn(const Vector& mu, const Matrix& sigma, const Vector& mu_tilde,
                     const Matrix& sigma_tilde, double h, std::span<const Vector> data) {
  const int p = static_cast<int>(mu.size());
  if (data.empty()) throw InvalidInput("data must be non-empty");
  if (mu_tilde.size() != p || sigma.rows() != p || sigma.cols() != p ||
      sigma_tilde.rows() != p || sigma_tilde.cols() != p) {
    throw InvalidInput("local_criterion_mvn dimension mismatch");
  }
  if (!(h > 0.0)) throw InvalidInput("h must be positive");

  Eigen::LLT<Matrix> llt_tilde(sigma_tilde);
  if (llt_tilde.info() != Eigen::Success) {
    throw InvalidInput("sigma_tilde is not symmetric positive definite");
  }
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw InvalidInput("sigma is not symmetric positive definite");
  }
  const Matrix lt = llt_tilde.matrixL();
  const Matrix l = llt.matrixL();
  double sqrt_det_tilde = 1.0;
  double log_det = 0.0;
  for (int i = 0; i < p; ++i) {
    sqrt_det_tilde *= lt(i, i);
    log_det += 2.0 * std::log(l(i, i));
  }
  const double weight_norm = std::pow(h, p) * sqrt_det_tilde;

  double sum = 0.0;
  for (const Vector& x : data) {
    if (x.size() != p) throw InvalidInput("observation dimension mismatch");
    const double q_tilde =
        lt.triangularView<Eigen::Lower>().solve(x - mu_tilde).squaredNorm();
    const double weight = std::exp(-0.5 * q_tilde / (h * h)) / weight_norm;
    const double q = l.triangularView<Eigen::Lower>().solve(x - mu).squaredNorm();
    sum += weight * 0.5 * (log_det + q);
  }
  sum /= static_cast<double>(data.size());

  const Matrix b = h * h * sigma_tilde + sigma;
  Eigen::LLT<Matrix> llt_b(b);
  const Matrix lb = llt_b.matrixL();
  double sqrt_det_b = 1.0;
  for (int i = 0; i < p; ++i) sqrt_det_b *= lb(i, i);
  const double qb = lb.triangularView<Eigen::Lower>().solve(mu - mu_tilde).squaredNorm();
  return sum + std::exp(-0.5 * qb) / sqrt_det_b;
}

MvnFitResult fit_mvn_robust(std::span<const Vector> data, const MvnLocalFitSpec& spec,
                            const SolverConfig& cfg) {
  if (data.empty()) throw InvalidInput("data must be non-empty");
  const int p = static_cast<int>(data.front().size());
  if (!(spec.h > 0.0)) throw InvalidInput("h must be positive");
  for (const Vector& x : data) {
    if (x.size() != p || !x.allFinite()) {
      throw InvalidInput("data rows must be finite and of equal dimension");
    }
  }

  Vector mu_tilde;
  Matrix sigma_tilde;
  if (spec.mu_tilde) {
    mu_tilde = *spec.mu_tilde;
    if (mu_tilde.size() != p) throw InvalidInput("mu_tilde dimension mismatch");
  } else {
    mu_tilde = Vector(p);
    std::vector<double> column(data.size());
    for (int j = 0; j < p; ++j) {
      for (std::size_t i = 0; i < data.size(); ++i) column[i] = data[i][j];
      mu_tilde[j] = median(column);
    }
  }
  if (spec.sigma_tilde) {
    sigma_tilde = *spec.sigma_tilde;
    if (sigma_tilde.rows() != p || sigma_tilde.cols() != p) {
      throw InvalidInput("sigma_tilde dimension mismatch");
    }
  } else {
    sigma_tilde = Matrix::Zero(p, p);
    std::vector<double> column(data.size());
    for (int j = 0; j < p; ++j) {
      for (std::size_t i = 0; i < data.size(); ++i) column[i] = data[i][j];
      const double scale = mad_scale(column);
      if (!(scale > 0.0)) {
        throw DegenerateData("a coordinate has zero robust scale");
      }
      sigma_tilde(j, j) = scale * scale;
    }
  }

  const MvnModel model(p);
  const MvnParams start = MvnParams::from_moments(mu_tilde, sigma_tilde);

  const double mass =
      std::abs(local_criterion_mvn(mu_tilde, sigma_tilde, mu_tilde, sigma_tilde, spec.h, data)) +
      std::pow(spec.h, -p);
  auto objective = [&](const Vector& theta) {
    const MvnParams params = model.unpack(theta);
    return local_criterion_mvn(params.mu, params.covariance(), mu_tilde, sigma_tilde, spec.h,
                         data) /
           mass;
  };
  const SolverResult sol = minimize_fd(objective, model.pack(start), cfg);

  MvnFitResult result;
  result.params = model.unpack(sol.theta);
  result.iterations = sol.iterations;
  result.converged = sol.converged;
  result.residual_norm = sol.residual_norm;
  return result;
}

}  // namespace robustfit
