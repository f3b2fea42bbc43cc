#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "robustfit/numerics.hpp"

using namespace robustfit;

namespace {

constexpr double kSqrtTwoPi = 2.50662827463100050242;

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * kSqrtTwoPi);
}

// Composite-trapezoid oracle on a wide fixed window, for cross-checking the
// production quadratures with an unrelated method.
template <typename F>
double trapezoid(const F& f, double lo, double hi, int n = 200000) {
  const double step = (hi - lo) / n;
  double sum = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) sum += f(lo + i * step);
  return sum * step;
}

}  // namespace

TEST_CASE("quadrature spec validation") {
  CHECK_NOTHROW(QuadratureSpec{}.validate());
  QuadratureSpec bad = QuadratureSpec::gauss_hermite(10);
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  QuadratureSpec adaptive = QuadratureSpec::adaptive();
  CHECK(adaptive.method == QuadMethod::adaptive_truncated);
}

TEST_CASE("gauss hermite rule integrates gaussian moments exactly") {
  const GaussHermiteRule& rule = gauss_hermite_rule(40);
  REQUIRE(rule.nodes.size() == 40);
  double mass = 0.0, second = 0.0, fourth = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const double wf = rule.weights[i] * normal_pdf(x, 0.0, 1.0);
    mass += wf;
    second += wf * x * x;
    fourth += wf * x * x * x * x;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(second == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fourth == doctest::Approx(3.0).epsilon(1e-12));
  // Nodes come out sorted.
  for (std::size_t i = 1; i < rule.nodes.size(); ++i) {
    CHECK(rule.nodes[i] > rule.nodes[i - 1]);
  }
}

TEST_CASE("integrate handles shifted and scaled gaussians") {
  const QuadratureSpec quad;
  const ScaleHint hint{3.0, 2.0};
  CHECK(integrate([](double x) { return normal_pdf(x, 3.0, 2.0); }, hint, quad) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return x * normal_pdf(x, 3.0, 2.0); }, hint, quad) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return (x - 3.0) * (x - 3.0) * normal_pdf(x, 3.0, 2.0); },
                  hint, quad) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("cube of the standard normal density integrates to 1/(2 pi sqrt 3)") {
  // The closed form follows from completing the square in the exponent.
  const double expected = 1.0 / (2.0 * M_PI * std::sqrt(3.0));
  auto f = [](double x) {
    const double p = normal_pdf(x, 0.0, 1.0);
    return p * p * p;
  };
  const ScaleHint hint{0.0, 1.0 / std::sqrt(3.0)};
  CHECK(integrate(f, hint, QuadratureSpec{}) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(integrate(f, hint, QuadratureSpec::adaptive()) ==
        doctest::Approx(expected).epsilon(1e-9));
  CHECK(trapezoid(f, -10.0, 10.0) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("adaptive quadrature handles a non-gaussian integrand") {
  // Cauchy-tapered integrand where the gaussian rule is not exact; compare
  // against the trapezoid oracle.
  auto f = [](double x) { return normal_pdf(x, 0.0, 1.0) / (1.0 + x * x); };
  const double oracle = trapezoid(f, -12.0, 12.0);
  CHECK(integrate(f, ScaleHint{0.0, 1.0}, QuadratureSpec::adaptive()) ==
        doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("integrate_vector and integrate_matrix agree with componentwise calls") {
  const QuadratureSpec quad;
  const ScaleHint hint{0.0, 1.0};
  const Vector v = integrate_vector(
      [](double x) {
        Vector out(2);
        out << normal_pdf(x, 0.0, 1.0), x * x * normal_pdf(x, 0.0, 1.0);
        return out;
      },
      2, hint, quad);
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-12));

  const Matrix m = integrate_matrix(
      [](double x) {
        Matrix out(2, 2);
        const double p = normal_pdf(x, 0.0, 1.0);
        out << p, x * p, x * p, x * x * p;
        return out;
      },
      2, 2, hint, quad);
  CHECK(m(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m(0, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(m(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gaussian product hint combines centers by precision") {
  const std::array<std::pair<double, double>, 2> equal = {std::pair{0.0, 1.0},
                                                          std::pair{2.0, 1.0}};
  const ScaleHint combined = gaussian_product_hint(equal);
  CHECK(combined.center == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(combined.spread == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

  const std::array<std::pair<double, double>, 2> uneven = {std::pair{0.0, 4.0},
                                                           std::pair{1.0, 1.0}};
  const ScaleHint tilted = gaussian_product_hint(uneven);
  CHECK(tilted.center == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(tilted.spread == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-14));

  const std::array<std::pair<double, double>, 2> degenerate = {std::pair{0.0, 1.0},
                                                               std::pair{0.0, -1.0}};
  CHECK_THROWS_AS(gaussian_product_hint(degenerate), InvalidInput);
}

TEST_CASE("newton solver finds roots of nonlinear systems") {
  // 2D system with known root (2, -1): x^2 + y - 3 = 0, x + y^3 - 1 = 0.
  auto g = [](const Vector& t) {
    Vector out(2);
    out << t[0] * t[0] + t[1] - 3.0, t[0] + t[1] * t[1] * t[1] - 1.0;
    return out;
  };
  auto jac = [](const Vector& t) {
    Matrix out(2, 2);
    out << 2.0 * t[0], 1.0, 1.0, 3.0 * t[1] * t[1];
    return out;
  };
  Vector init(2);
  init << 1.5, -0.5;
  const SolverResult sol = newton_solve(g, jac, init, SolverConfig{});
  CHECK(sol.converged);
  CHECK(sol.theta[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(sol.theta[1] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(sol.residual_norm < 1e-8);
}

TEST_CASE("newton solver respects the domain during backtracking") {
  // Root of log(x) = 0 from a start where a full step would go nonpositive.
  auto g = [](const Vector& t) {
    Vector out(1);
    out << std::log(t[0]);
    return out;
  };
  auto jac = [](const Vector& t) {
    Matrix out(1, 1);
    out << 1.0 / t[0];
    return out;
  };
  Vector init(1);
  init << 5.0;
  const SolverResult sol = newton_solve(g, jac, init, SolverConfig{},
                                        [](const Vector& t) { return t[0] > 0.0; });
  CHECK(sol.converged);
  CHECK(sol.theta[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("newton solver reports persistent singularity") {
  auto g = [](const Vector&) {
    Vector out(1);
    out << 1.0;  // no root, zero slope
    return out;
  };
  auto jac = [](const Vector&) { return Matrix::Zero(1, 1); };
  SolverConfig cfg;
  cfg.max_iter = 10;
  CHECK_THROWS_AS(newton_solve(g, jac, Vector::Ones(1), cfg), SolverFailure);
}

TEST_CASE("finite difference minimizer finds quadratic and quartic minima") {
  auto quadratic = [](const Vector& t) {
    return 2.0 * (t[0] - 1.0) * (t[0] - 1.0) + (t[1] + 2.0) * (t[1] + 2.0) +
           0.5 * (t[0] - 1.0) * (t[1] + 2.0);
  };
  Vector init(2);
  init << 0.0, 0.0;
  SolverResult sol = minimize_fd(quadratic, init, SolverConfig{});
  CHECK(sol.converged);
  CHECK(sol.theta[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.theta[1] == doctest::Approx(-2.0).epsilon(1e-6));

  auto quartic = [](const Vector& t) {
    const double u = t[0] - 0.5;
    return u * u * u * u + u * u;
  };
  Vector init1(1);
  init1 << 3.0;
  sol = minimize_fd(quartic, init1, SolverConfig{});
  CHECK(sol.converged);
  CHECK(sol.theta[0] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("median handles odd and even sizes") {
  const std::vector<double> odd = {3.0, 1.0, 2.0};
  CHECK(median(odd) == 2.0);
  const std::vector<double> even = {4.0, 1.0, 3.0, 2.0};
  CHECK(median(even) == 2.5);
  const std::vector<double> single = {7.0};
  CHECK(median(single) == 7.0);
}

TEST_CASE("mad scale is consistent at the normal and affine equivariant") {
  const std::vector<double> data = {-2.0, -1.0, 0.0, 1.0, 2.0};
  // median 0, absolute deviations {0,1,1,2,2}, MAD 1.
  CHECK(mad_scale(data) == doctest::Approx(1.4826).epsilon(1e-12));
  std::vector<double> shifted;
  for (double x : data) shifted.push_back(10.0 + 3.0 * x);
  CHECK(mad_scale(shifted) == doctest::Approx(3.0 * 1.4826).epsilon(1e-12));

  const std::vector<double> constant = {5.0, 5.0, 5.0};
  CHECK(mad_scale(constant) == 0.0);
  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS(mad_scale(one), InvalidInput);
}
