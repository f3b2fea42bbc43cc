#pragma once

#include <utility>

#include "robustfit/common.hpp"

namespace robustfit {

//! Parameters of the univariate normal, ordered (mu, sigma).
//! The scale parameter is sigma itself, not sigma^2.
struct NormalParams {
  double mu = 0.0;
  double sigma = 1.0;

  Vector to_vector() const;
  static NormalParams from_vector(const Vector& theta);
  void validate() const;  // throws InvalidInput unless sigma > 0 and both finite
};

//! Parameters of the p-variate normal. The scatter matrix is stored through
//! its lower-triangular Cholesky factor, so any instance is SPD by
//! construction.
struct MvnParams {
  Vector mu;
  Matrix chol;  // lower triangular, strictly positive diagonal

  int dim() const { return static_cast<int>(mu.size()); }
  Matrix covariance() const { return chol * chol.transpose(); }
  static MvnParams from_moments(const Vector& mu, const Matrix& sigma);
  void validate() const;
};

//! Density family over scalar observations with analytic score and
//! score-derivative. Immutable after construction.
class UnivariateModel {
 public:
  virtual ~UnivariateModel() = default;

  virtual int param_dim() const = 0;
  virtual double log_density(double x, const Vector& theta) const = 0;
  double density(double x, const Vector& theta) const;

  //! Gradient of log_density in theta.
  virtual Vector score(double x, const Vector& theta) const = 0;
  //! Matrix of second derivatives of log_density in theta.
  virtual Matrix score_deriv(double x, const Vector& theta) const = 0;

  //! (center, spread) hint for quadrature over x at this theta.
  virtual std::pair<double, double> location_scale(const Vector& theta) const = 0;

  //! Throws InvalidInput if theta lies outside the parameter domain.
  virtual void validate(const Vector& theta) const = 0;
  //! Non-throwing domain check, used by solvers during line search.
  virtual bool in_domain(const Vector& theta) const = 0;
};

//! N(mu, sigma^2) with theta = (mu, sigma).
class NormalModel final : public UnivariateModel {
 public:
  int param_dim() const override { return 2; }
  double log_density(double x, const Vector& theta) const override;
  Vector score(double x, const Vector& theta) const override;
  Matrix score_deriv(double x, const Vector& theta) const override;
  std::pair<double, double> location_scale(const Vector& theta) const override;
  void validate(const Vector& theta) const override;
  bool in_domain(const Vector& theta) const override;
};

//! Score (d/dmu, d/dsigma) of the normal log density.
Vector normal_score(double x, const NormalParams& params);

//! Symmetric 2x2 matrix of second derivatives of the normal log density.
Matrix normal_score_deriv(double x, const NormalParams& params);

//! Multivariate normal log density evaluated through the Cholesky factor.
double mvn_log_density(const Vector& x, const MvnParams& params);

//! p-variate normal in the unconstrained parametrization used by the
//! optimizers: theta packs mu (p entries) followed by the lower triangle of
//! the Cholesky factor column by column, with the diagonal stored on log
//! scale.
class MvnModel {
 public:
  explicit MvnModel(int p);

  int dim() const { return p_; }
  int param_dim() const { return p_ + p_ * (p_ + 1) / 2; }

  Vector pack(const MvnParams& params) const;
  MvnParams unpack(const Vector& theta) const;

  double log_density(const Vector& x, const Vector& theta) const;
  Vector score(const Vector& x, const Vector& theta) const;
  Matrix score_deriv(const Vector& x, const Vector& theta) const;

 private:
  int p_;
};

}  // namespace robustfit
