#include "robustfit/weights.hpp"

#include <cmath>

namespace robustfit {

namespace {
constexpr double kInvSqrtTwoPi = 0.39894228040143267794;
}

double KernelSpec::evaluate(double u) const {
  validate();
  const double t = u / bandwidth;
  return kInvSqrtTwoPi * std::exp(-0.5 * t * t) / bandwidth;
}

void KernelSpec::validate() const {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw InvalidInput("kernel bandwidth must be positive and finite");
  }
}

WeightFunction WeightFunction::constant() {
  WeightFunction w;
  w.kind_ = Kind::constant;
  return w;
}

WeightFunction WeightFunction::kernel_local(double x0, const KernelSpec& kernel) {
  kernel.validate();
  if (!std::isfinite(x0)) throw InvalidInput("x0 must be finite");
  WeightFunction w;
  w.kind_ = Kind::kernel_local;
  w.x0_ = x0;
  w.bandwidth_ = kernel.bandwidth;
  return w;
}

WeightFunction WeightFunction::exp_delta(double delta, double mu_tilde,
                                         double sigma_tilde) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw InvalidInput("exp_delta weight requires delta in [0,1)");
  }
  if (!std::isfinite(mu_tilde) || !(sigma_tilde > 0.0)) {
    throw InvalidInput("exp_delta weight requires finite mu_tilde and positive sigma_tilde");
  }
  WeightFunction w;
  w.kind_ = Kind::exp_delta;
  w.delta_ = delta;
  w.mu_tilde_ = mu_tilde;
  w.sigma_tilde_ = sigma_tilde;
  return w;
}

WeightFunction WeightFunction::scaled_by(double factor) const {
  if (!(factor > 0.0)) throw InvalidInput("weight scale factor must be positive");
  WeightFunction w = *this;
  w.scale_ *= factor;
  return w;
}

double WeightFunction::operator()(double x) const {
  switch (kind_) {
    case Kind::constant:
      return scale_;
    case Kind::kernel_local: {
      const double t = (x0_ - x) / bandwidth_;
      return scale_ * kInvSqrtTwoPi * std::exp(-0.5 * t * t) / bandwidth_;
    }
    case Kind::exp_delta: {
      const double z = (x - mu_tilde_) / sigma_tilde_;
      return scale_ * std::exp(0.5 * delta_ * z * z);
    }
  }
  return scale_;
}

std::pair<double, double> WeightFunction::gaussian_exponent(int power) const {
  switch (kind_) {
    case Kind::constant:
      return {0.0, 0.0};
    case Kind::kernel_local:
      return {x0_, power / (bandwidth_ * bandwidth_)};
    case Kind::exp_delta:
      return {mu_tilde_, -power * delta_ / (sigma_tilde_ * sigma_tilde_)};
  }
  return {0.0, 0.0};
}

}  // namespace robustfit
