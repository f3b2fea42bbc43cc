#include "robustfit/model.hpp"

#include <cmath>
#include <vector>

namespace robustfit {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454836;

void check_finite(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw InvalidInput(std::string(name) + " must be finite");
  }
}
}  // namespace

Vector NormalParams::to_vector() const {
  Vector v(2);
  v << mu, sigma;
  return v;
}

NormalParams NormalParams::from_vector(const Vector& theta) {
  if (theta.size() != 2) {
    throw InvalidInput("normal parameter vector must have length 2");
  }
  return NormalParams{theta[0], theta[1]};
}

void NormalParams::validate() const {
  check_finite(mu, "mu");
  check_finite(sigma, "sigma");
  if (!(sigma > 0.0)) {
    throw InvalidInput("sigma must be strictly positive");
  }
}

MvnParams MvnParams::from_moments(const Vector& mu, const Matrix& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() != mu.size()) {
    throw InvalidInput("covariance dimensions do not match the mean vector");
  }
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw InvalidInput("covariance matrix is not symmetric positive definite");
  }
  MvnParams p;
  p.mu = mu;
  p.chol = llt.matrixL();
  return p;
}

void MvnParams::validate() const {
  if (chol.rows() != chol.cols() || chol.rows() != mu.size()) {
    throw InvalidInput("Cholesky factor dimensions do not match the mean vector");
  }
  for (int i = 0; i < chol.rows(); ++i) {
    if (!(chol(i, i) > 0.0) || !std::isfinite(chol(i, i))) {
      throw InvalidInput("Cholesky factor must have strictly positive diagonal");
    }
  }
  if (!mu.allFinite() || !chol.allFinite()) {
    throw InvalidInput("multivariate normal parameters must be finite");
  }
}

double UnivariateModel::density(double x, const Vector& theta) const {
  return std::exp(log_density(x, theta));
}

double NormalModel::log_density(double x, const Vector& theta) const {
  check_finite(x, "x");
  NormalParams p = NormalParams::from_vector(theta);
  p.validate();
  const double z = (x - p.mu) / p.sigma;
  return -std::log(p.sigma) - 0.5 * z * z - 0.5 * kLogTwoPi;
}

Vector NormalModel::score(double x, const Vector& theta) const {
  check_finite(x, "x");
  return normal_score(x, NormalParams::from_vector(theta));
}

Matrix NormalModel::score_deriv(double x, const Vector& theta) const {
  check_finite(x, "x");
  return normal_score_deriv(x, NormalParams::from_vector(theta));
}

std::pair<double, double> NormalModel::location_scale(const Vector& theta) const {
  NormalParams p = NormalParams::from_vector(theta);
  p.validate();
  return {p.mu, p.sigma};
}

void NormalModel::validate(const Vector& theta) const {
  NormalParams::from_vector(theta).validate();
}

bool NormalModel::in_domain(const Vector& theta) const {
  return theta.size() == 2 && theta.allFinite() && theta[1] > 0.0;
}

Vector normal_score(double x, const NormalParams& params) {
  check_finite(x, "x");
  params.validate();
  const double s = params.sigma;
  const double r = x - params.mu;
  Vector u(2);
  u[0] = r / (s * s);
  u[1] = -1.0 / s + r * r / (s * s * s);
  return u;
}

Matrix normal_score_deriv(double x, const NormalParams& params) {
  check_finite(x, "x");
  params.validate();
  const double s = params.sigma;
  const double s2 = s * s;
  const double r = x - params.mu;
  Matrix h(2, 2);
  h(0, 0) = -1.0 / s2;
  h(0, 1) = -2.0 * r / (s2 * s);
  h(1, 0) = h(0, 1);
  h(1, 1) = 1.0 / s2 - 3.0 * r * r / (s2 * s2);
  return h;
}

double mvn_log_density(const Vector& x, const MvnParams& params) {
  params.validate();
  const int p = params.dim();
  if (x.size() != p) {
    throw InvalidInput("observation dimension does not match the model");
  }
  const Vector z = params.chol.triangularView<Eigen::Lower>().solve(x - params.mu);
  double log_det_half = 0.0;
  for (int i = 0; i < p; ++i) log_det_half += std::log(params.chol(i, i));
  return -log_det_half - 0.5 * z.squaredNorm() - 0.5 * p * kLogTwoPi;
}

MvnModel::MvnModel(int p) : p_(p) {
  if (p < 1) throw InvalidInput("dimension must be at least 1");
}

namespace {
// Column-major walk over the lower triangle: (0,0), (1,0), ..., (p-1,0), (1,1), ...
int tri_index(int i, int j, int p) {
  return j * p - j * (j - 1) / 2 + (i - j);
}
}  // namespace

Vector MvnModel::pack(const MvnParams& params) const {
  params.validate();
  if (params.dim() != p_) throw InvalidInput("parameter dimension mismatch");
  Vector theta(param_dim());
  theta.head(p_) = params.mu;
  for (int j = 0; j < p_; ++j) {
    for (int i = j; i < p_; ++i) {
      const double v = params.chol(i, j);
      theta[p_ + tri_index(i, j, p_)] = (i == j) ? std::log(v) : v;
    }
  }
  return theta;
}

MvnParams MvnModel::unpack(const Vector& theta) const {
  if (theta.size() != param_dim()) throw InvalidInput("parameter dimension mismatch");
  MvnParams params;
  params.mu = theta.head(p_);
  params.chol = Matrix::Zero(p_, p_);
  for (int j = 0; j < p_; ++j) {
    for (int i = j; i < p_; ++i) {
      const double v = theta[p_ + tri_index(i, j, p_)];
      params.chol(i, j) = (i == j) ? std::exp(v) : v;
    }
  }
  return params;
}

double MvnModel::log_density(const Vector& x, const Vector& theta) const {
  return mvn_log_density(x, unpack(theta));
}

Vector MvnModel::score(const Vector& x, const Vector& theta) const {
  const MvnParams params = unpack(theta);
  if (x.size() != p_) throw InvalidInput("observation dimension does not match the model");
  const Matrix& L = params.chol;
  const Vector r = x - params.mu;
  const Vector z = L.triangularView<Eigen::Lower>().solve(r);
  const Vector w = L.transpose().triangularView<Eigen::Upper>().solve(z);

  Vector g(param_dim());
  g.head(p_) = w;
  for (int j = 0; j < p_; ++j) {
    for (int i = j; i < p_; ++i) {
      const int t = p_ + tri_index(i, j, p_);
      if (i == j) {
        // log-diagonal parametrization: chain rule multiplies by L_ii
        g[t] = -1.0 + L(i, i) * w[i] * z[i];
      } else {
        g[t] = w[i] * z[j];
      }
    }
  }
  return g;
}

Matrix MvnModel::score_deriv(const Vector& x, const Vector& theta) const {
  const MvnParams params = unpack(theta);
  if (x.size() != p_) throw InvalidInput("observation dimension does not match the model");
  const Matrix& L = params.chol;
  const Vector r = x - params.mu;
  const Vector z = L.triangularView<Eigen::Lower>().solve(r);
  const Vector w = L.transpose().triangularView<Eigen::Upper>().solve(z);
  const Matrix C = L.triangularView<Eigen::Lower>().solve(Matrix::Identity(p_, p_));
  const Matrix A = C.transpose() * C;  // Sigma^{-1}

  const int dim = param_dim();
  const int ntri = dim - p_;
  // Row/column indices of each triangle parameter.
  std::vector<int> row(ntri), col(ntri);
  for (int j = 0; j < p_; ++j)
    for (int i = j; i < p_; ++i) {
      row[tri_index(i, j, p_)] = i;
      col[tri_index(i, j, p_)] = j;
    }

  // Hessian in raw (mu, L-entry) coordinates first.
  Matrix h = Matrix::Zero(dim, dim);
  h.topLeftCorner(p_, p_) = -A;
  for (int t = 0; t < ntri; ++t) {
    const int a = row[t], b = col[t];
    for (int k = 0; k < p_; ++k) {
      const double v = -(z[b] * A(k, a) + C(b, k) * w[a]);
      h(k, p_ + t) = v;
      h(p_ + t, k) = v;
    }
    for (int s = t; s < ntri; ++s) {
      const int c = row[s], d = col[s];
      double v = -(z[b] * z[d] * A(a, c) + z[b] * C(d, a) * w[c] +
                   z[d] * C(b, c) * w[a]);
      if (a == b && c == d && a == c) v += 1.0 / (L(a, a) * L(a, a));
      h(p_ + t, p_ + s) = v;
      h(p_ + s, p_ + t) = v;
    }
  }

  // Chain rule onto the log-diagonal coordinates.
  Vector raw_grad(ntri);
  for (int t = 0; t < ntri; ++t) {
    const int a = row[t], b = col[t];
    raw_grad[t] = (a == b) ? (-1.0 / L(a, a) + w[a] * z[a]) : w[a] * z[b];
  }
  for (int t = 0; t < ntri; ++t) {
    if (row[t] != col[t]) continue;
    const double laa = L(row[t], row[t]);
    h.row(p_ + t) *= laa;
    h.col(p_ + t) *= laa;
    h(p_ + t, p_ + t) += laa * raw_grad[t];
  }
  return h;
}

}  // namespace robustfit
