#pragma once

#include <utility>

#include "robustfit/common.hpp"

namespace robustfit {

//! Scaled normal kernel K_h(u) = phi(u/h)/h.
struct KernelSpec {
  double bandwidth = 1.0;

  double evaluate(double u) const;
  void validate() const;
};

//! Weight function w(.) of the minimum weighted L2 criterion.
class WeightFunction {
 public:
  enum class Kind { constant, kernel_local, exp_delta };

  //! w(x) = 1.
  static WeightFunction constant();
  //! w(x) = K_h(x0 - x), localizing the fit around x0.
  static WeightFunction kernel_local(double x0, const KernelSpec& kernel);
  //! w(x) = exp{0.5 * delta * (x - mu_tilde)^2 / sigma_tilde^2}, delta in [0,1).
  static WeightFunction exp_delta(double delta, double mu_tilde, double sigma_tilde);

  //! Same weight multiplied by a positive constant (the fit is invariant).
  WeightFunction scaled_by(double factor) const;

  double operator()(double x) const;
  Kind kind() const { return kind_; }
  double delta() const { return delta_; }
  double mu_tilde() const { return mu_tilde_; }
  double sigma_tilde() const { return sigma_tilde_; }
  double x0() const { return x0_; }
  double bandwidth() const { return bandwidth_; }

  //! Gaussian exponent contribution of w(x)^power, as (center, precision)
  //! of exp(-precision (x - center)^2 / 2). The exp_delta variant has
  //! negative precision; the constant variant contributes nothing.
  std::pair<double, double> gaussian_exponent(int power) const;

 private:
  WeightFunction() = default;

  Kind kind_ = Kind::constant;
  double scale_ = 1.0;
  double x0_ = 0.0;
  double bandwidth_ = 0.0;
  double delta_ = 0.0;
  double mu_tilde_ = 0.0;
  double sigma_tilde_ = 1.0;
};

}  // namespace robustfit
