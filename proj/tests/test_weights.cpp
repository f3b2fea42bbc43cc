#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "robustfit/weights.hpp"

using namespace robustfit;

namespace {
constexpr double kSqrtTwoPi = 2.50662827463100050242;
double phi(double z) { return std::exp(-0.5 * z * z) / kSqrtTwoPi; }
}  // namespace

TEST_CASE("kernel spec evaluates the scaled normal kernel") {
  const KernelSpec kernel{2.0};
  CHECK(kernel.evaluate(0.0) == doctest::Approx(phi(0.0) / 2.0).epsilon(1e-14));
  CHECK(kernel.evaluate(3.0) == doctest::Approx(phi(1.5) / 2.0).epsilon(1e-14));
  CHECK(kernel.evaluate(-3.0) == doctest::Approx(kernel.evaluate(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(KernelSpec{0.0}.validate(), InvalidInput);
  CHECK_THROWS_AS(KernelSpec{-1.0}.validate(), InvalidInput);
}

TEST_CASE("constant weight is one everywhere") {
  const WeightFunction w = WeightFunction::constant();
  CHECK(w(0.0) == 1.0);
  CHECK(w(-57.0) == 1.0);
  CHECK(w.kind() == WeightFunction::Kind::constant);
  const auto [center, precision] = w.gaussian_exponent(2);
  CHECK(precision == 0.0);
  CHECK(center == 0.0);
}

TEST_CASE("kernel local weight matches the kernel at the offset") {
  const KernelSpec kernel{0.5};
  const WeightFunction w = WeightFunction::kernel_local(1.0, kernel);
  CHECK(w(1.0) == doctest::Approx(kernel.evaluate(0.0)).epsilon(1e-14));
  CHECK(w(2.0) == doctest::Approx(kernel.evaluate(1.0)).epsilon(1e-14));
  CHECK(w(0.0) == doctest::Approx(kernel.evaluate(1.0)).epsilon(1e-14));
  const auto [center, precision] = w.gaussian_exponent(2);
  CHECK(center == 1.0);
  CHECK(precision == doctest::Approx(2.0 / 0.25).epsilon(1e-14));
}

TEST_CASE("exp delta weight follows its closed form") {
  const double delta = 0.3, mu = 1.0, sigma = 2.0;
  const WeightFunction w = WeightFunction::exp_delta(delta, mu, sigma);
  for (double x : {-1.0, 1.0, 4.0}) {
    const double z = (x - mu) / sigma;
    CHECK(w(x) == doctest::Approx(std::exp(0.5 * delta * z * z)).epsilon(1e-14));
  }
  const auto [center, precision] = w.gaussian_exponent(1);
  CHECK(center == mu);
  CHECK(precision == doctest::Approx(-delta / (sigma * sigma)).epsilon(1e-14));

  // delta = 0 degenerates to the constant weight.
  const WeightFunction flat = WeightFunction::exp_delta(0.0, 5.0, 1.0);
  CHECK(flat(3.0) == 1.0);
  CHECK(flat(-3.0) == 1.0);

  CHECK_THROWS_AS(WeightFunction::exp_delta(-0.1, 0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(WeightFunction::exp_delta(1.0, 0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(WeightFunction::exp_delta(0.5, 0.0, 0.0), InvalidInput);
}

TEST_CASE("scaled weights multiply pointwise") {
  const WeightFunction w = WeightFunction::exp_delta(0.2, 0.0, 1.0).scaled_by(3.5);
  CHECK(w(1.0) == doctest::Approx(3.5 * std::exp(0.1)).epsilon(1e-14));
  CHECK_THROWS_AS(WeightFunction::constant().scaled_by(-1.0), InvalidInput);
}
