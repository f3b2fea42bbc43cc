#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "robustfit/minl2.hpp"
#include "robustfit/simharness.hpp"

using namespace robustfit;

namespace {

constexpr double kSqrtTwoPi = 2.50662827463100050242;

Vector theta_of(double mu, double sigma) {
  Vector t(2);
  t << mu, sigma;
  return t;
}

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * kSqrtTwoPi);
}

const std::vector<double> kData = {0.8, -0.3, 1.6, 0.1, -1.2, 0.5, 2.1, -0.7, 0.9, 0.2};

// Dense-trapezoid oracle for the integral part of the objective.
template <typename F>
double trapezoid(const F& f, double lo, double hi, int n = 400000) {
  const double step = (hi - lo) / n;
  double sum = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) sum += f(lo + i * step);
  return sum * step;
}

}  // namespace

TEST_CASE("objective matches a hand-assembled trapezoid oracle") {
  const NormalModel model;
  const Vector theta = theta_of(0.3, 1.1);
  SUBCASE("constant weight") {
    const WeightFunction w = WeightFunction::constant();
    double oracle = trapezoid(
        [&](double x) { return normal_pdf(x, 0.3, 1.1) * normal_pdf(x, 0.3, 1.1); }, -15.0,
        15.0);
    for (double x : kData) oracle -= 2.0 * normal_pdf(x, 0.3, 1.1) / kData.size();
    CHECK(q_objective(theta, kData, w, model, QuadratureSpec{}) ==
          doctest::Approx(oracle).epsilon(1e-9));
  }
  SUBCASE("exp-delta weight") {
    const double delta = 0.4, mu_t = 0.2, sigma_t = 1.3;
    const WeightFunction w = WeightFunction::exp_delta(delta, mu_t, sigma_t);
    auto weight = [&](double x) {
      const double z = (x - mu_t) / sigma_t;
      return std::exp(0.5 * delta * z * z);
    };
    double oracle = trapezoid(
        [&](double x) {
          const double f = normal_pdf(x, 0.3, 1.1);
          return weight(x) * f * f;
        },
        -20.0, 20.0);
    for (double x : kData) oracle -= 2.0 * weight(x) * normal_pdf(x, 0.3, 1.1) / kData.size();
    CHECK(q_objective(theta, kData, w, model, QuadratureSpec{}) ==
          doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("estimating equation is minus half the objective gradient") {
  const NormalModel model;
  const QuadratureSpec quad;
  const WeightFunction weights[] = {WeightFunction::constant(),
                                    WeightFunction::exp_delta(0.35, 0.0, 1.2)};
  for (const WeightFunction& w : weights) {
    for (const Vector& theta : {theta_of(0.0, 1.0), theta_of(0.4, 0.8), theta_of(-0.6, 1.7)}) {
      const Vector v = v_score(theta, kData, w, model, quad);
      const double step = 1e-6;
      for (int i = 0; i < 2; ++i) {
        Vector hi = theta, lo = theta;
        hi[i] += step;
        lo[i] -= step;
        const double grad = (q_objective(hi, kData, w, model, quad) -
                             q_objective(lo, kData, w, model, quad)) /
                            (2.0 * step);
        CHECK(v[i] == doctest::Approx(-0.5 * grad).epsilon(1e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("score jacobian matches finite differences of the score") {
  const NormalModel model;
  const QuadratureSpec quad;
  const WeightFunction w = WeightFunction::exp_delta(0.25, 0.1, 1.0);
  const Vector theta = theta_of(0.2, 1.3);
  const Matrix jac = v_score_jacobian(theta, kData, w, model, quad);
  const double step = 1e-6;
  for (int i = 0; i < 2; ++i) {
    Vector hi = theta, lo = theta;
    hi[i] += step;
    lo[i] -= step;
    const Vector col = (v_score(hi, kData, w, model, quad) -
                        v_score(lo, kData, w, model, quad)) /
                       (2.0 * step);
    CHECK(jac(0, i) == doctest::Approx(col[0]).epsilon(1e-5).scale(1.0));
    CHECK(jac(1, i) == doctest::Approx(col[1]).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("fit agrees with a grid search oracle over the objective") {
  const NormalModel model;
  const WeightFunction w = WeightFunction::constant();
  const FitResult fit = fit_min_l2(kData, model, w);
  REQUIRE(fit.converged);

  // Coarse-to-fine grid minimization, entirely independent of the solver.
  double best_mu = 0.0, best_sigma = 1.0, best = 1e300;
  double mu_lo = -1.0, mu_hi = 2.0, s_lo = 0.3, s_hi = 3.0;
  for (int round = 0; round < 4; ++round) {
    const int grid = 40;
    double round_mu = best_mu, round_sigma = best_sigma;
    for (int i = 0; i <= grid; ++i) {
      for (int j = 0; j <= grid; ++j) {
        const double mu = mu_lo + (mu_hi - mu_lo) * i / grid;
        const double sigma = s_lo + (s_hi - s_lo) * j / grid;
        const double value = q_objective(theta_of(mu, sigma), kData, w, model,
                                         QuadratureSpec{});
        if (value < best) {
          best = value;
          round_mu = mu;
          round_sigma = sigma;
        }
      }
    }
    best_mu = round_mu;
    best_sigma = round_sigma;
    const double mu_span = (mu_hi - mu_lo) / 10.0, s_span = (s_hi - s_lo) / 10.0;
    mu_lo = best_mu - mu_span;
    mu_hi = best_mu + mu_span;
    s_lo = std::max(0.05, best_sigma - s_span);
    s_hi = best_sigma + s_span;
  }
  // The grid oracle resolves the argmin to about 5e-4; compare at that scale.
  CHECK(fit.theta[0] == doctest::Approx(best_mu).epsilon(2e-3).scale(1.0));
  CHECK(fit.theta[1] == doctest::Approx(best_sigma).epsilon(2e-3));
  CHECK(fit.residual_norm < 1e-8);
}

TEST_CASE("fit is affine equivariant under the constant weight") {
  const NormalModel model;
  const WeightFunction w = WeightFunction::constant();
  const FitResult base = fit_min_l2(kData, model, w);
  const double a = 4.0, b = 2.5;
  std::vector<double> mapped;
  for (double x : kData) mapped.push_back(a + b * x);
  const FitResult shifted = fit_min_l2(mapped, model, w);
  REQUIRE(base.converged);
  REQUIRE(shifted.converged);
  CHECK(shifted.theta[0] == doctest::Approx(a + b * base.theta[0]).epsilon(1e-7));
  CHECK(shifted.theta[1] == doctest::Approx(b * base.theta[1]).epsilon(1e-7));
}

TEST_CASE("rescaling the weight function leaves the fit unchanged") {
  const NormalModel model;
  const WeightFunction w = WeightFunction::exp_delta(0.3, 0.2, 1.1);
  const FitResult base = fit_min_l2(kData, model, w);
  const FitResult scaled = fit_min_l2(kData, model, w.scaled_by(7.25));
  REQUIRE(base.converged);
  REQUIRE(scaled.converged);
  CHECK(scaled.theta[0] == doctest::Approx(base.theta[0]).epsilon(1e-9));
  CHECK(scaled.theta[1] == doctest::Approx(base.theta[1]).epsilon(1e-9));
}

TEST_CASE("zero tilt reduces to the constant weight") {
  const NormalModel model;
  const FitResult flat = fit_min_l2(kData, model, WeightFunction::constant());
  const FitResult tilt0 = fit_min_l2(kData, model, WeightFunction::exp_delta(0.0, 0.4, 0.9));
  REQUIRE(flat.converged);
  REQUIRE(tilt0.converged);
  CHECK(tilt0.theta[0] == doctest::Approx(flat.theta[0]).epsilon(1e-6));
  CHECK(tilt0.theta[1] == doctest::Approx(flat.theta[1]).epsilon(1e-6));
}

TEST_CASE("large sample fit recovers the truth") {
  Rng rng(20250823);
  std::vector<double> sample(4000);
  for (double& x : sample) x = 0.5 + 1.5 * rng.normal();
  const NormalModel model;
  const FitResult fit = fit_min_l2(sample, model, WeightFunction::constant());
  REQUIRE(fit.converged);
  CHECK(fit.theta[0] == doctest::Approx(0.5).epsilon(0.15));
  CHECK(fit.theta[1] == doctest::Approx(1.5).epsilon(0.1));
  // Plug-in sandwich should be near the theoretical constants scaled by sigma^2.
  CHECK(fit.sandwich(0, 0) == doctest::Approx(1.5396 * 1.5 * 1.5).epsilon(0.25));
  CHECK(fit.sandwich(1, 1) == doctest::Approx(0.9241 * 1.5 * 1.5).epsilon(0.25));
}

TEST_CASE("degenerate inputs are rejected") {
  const NormalModel model;
  const WeightFunction w = WeightFunction::constant();
  const std::vector<double> empty;
  CHECK_THROWS_AS(fit_min_l2(empty, model, w), InvalidInput);
  const std::vector<double> constant = {1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(fit_min_l2(constant, model, w), DegenerateData);
  const std::vector<double> non_finite = {0.0, std::nan(""), 1.0};
  CHECK_THROWS_AS(fit_min_l2(non_finite, model, w), InvalidInput);
}
