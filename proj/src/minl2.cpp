#include "robustfit/minl2.hpp"

#include <array>
#include <cmath>

#include "robustfit/asymptotics.hpp"

namespace robustfit {

namespace {

ScaleHint integral_hint(const UnivariateModel& model, const Vector& theta,
                        const WeightFunction& w) {
  const auto [center, spread] = model.location_scale(theta);
  const std::array<std::pair<double, double>, 2> terms = {
      std::pair{center, 2.0 / (spread * spread)}, w.gaussian_exponent(1)};
  return gaussian_product_hint(terms);
}

void check_data(std::span<const double> data, int min_size) {
  if (static_cast<int>(data.size()) < min_size) {
    throw InvalidInput("not enough data points for the fit");
  }
  for (double x : data) {
    if (!std::isfinite(x)) throw InvalidInput("data contains non-finite values");
  }
}

}  // namespace

double q_objective(const Vector& theta, std::span<const double> data,
                   const WeightFunction& w, const UnivariateModel& model,
                   const QuadratureSpec& quad) {
  check_data(data, 1);
  model.validate(theta);
  const double integral = integrate(
      [&](double x) {
        const double f = model.density(x, theta);
        return w(x) * f * f;
      },
      integral_hint(model, theta, w), quad);
  double emp = 0.0;
  for (double x : data) emp += w(x) * model.density(x, theta);
  return integral - 2.0 * emp / static_cast<double>(data.size());
}

Vector v_score(const Vector& theta, std::span<const double> data,
               const WeightFunction& w, const UnivariateModel& model,
               const QuadratureSpec& quad) {
  check_data(data, 1);
  model.validate(theta);
  const int dim = model.param_dim();
  const Vector integral = integrate_vector(
      [&](double x) -> Vector {
        const double f = model.density(x, theta);
        return (w(x) * f * f) * model.score(x, theta);
      },
      dim, integral_hint(model, theta, w), quad);
  Vector emp = Vector::Zero(dim);
  for (double x : data) {
    emp += (w(x) * model.density(x, theta)) * model.score(x, theta);
  }
  emp /= static_cast<double>(data.size());
  return emp - integral;
}

Matrix v_score_jacobian(const Vector& theta, std::span<const double> data,
                        const WeightFunction& w, const UnivariateModel& model,
                        const QuadratureSpec& quad) {
  // d V_n / d theta = (1/n) sum w f (u u' + u*) - integral of w f^2 (2 u u' + u*) dx
  return -l2_J_empirical(theta, data, w, model, quad);
}

FitResult fit_min_l2(std::span<const double> data, const UnivariateModel& model,
                     const WeightFunction& w, const std::optional<Vector>& init,
                     const SolverConfig& cfg, const QuadratureSpec& quad) {
  check_data(data, model.param_dim() + 1);
  Vector start;
  if (init) {
    start = *init;
    model.validate(start);
  } else {
    if (model.param_dim() != 2) {
      throw InvalidInput("default initialization only exists for location-scale models; pass init");
    }
    const double scale = mad_scale(data);
    if (!(scale > 0.0)) {
      throw DegenerateData("all data points coincide; scale cannot be estimated");
    }
    start = Vector(2);
    start << median(data), scale;
  }

  auto residual = [&](const Vector& theta) { return v_score(theta, data, w, model, quad); };
  auto jacobian = [&](const Vector& theta) {
    return v_score_jacobian(theta, data, w, model, quad);
  };
  auto domain = [&](const Vector& theta) { return model.in_domain(theta); };

  const SolverResult sol = newton_solve(residual, jacobian, start, cfg, domain);

  FitResult result;
  result.theta = sol.theta;
  result.iterations = sol.iterations;
  result.converged = sol.converged;
  result.residual_norm = sol.residual_norm;
  result.sandwich = sandwich(l2_J_empirical(sol.theta, data, w, model, quad),
                             l2_M_empirical(sol.theta, data, w, model, quad));
  return result;
}

}  // namespace robustfit
