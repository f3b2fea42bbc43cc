#include "robustfit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace robustfit {

QuadratureSpec QuadratureSpec::gauss_hermite(int nodes) {
  QuadratureSpec spec;
  spec.method = QuadMethod::gauss_hermite;
  spec.node_count = nodes;
  return spec;
}

QuadratureSpec QuadratureSpec::adaptive(double rel_tol, double radius) {
  QuadratureSpec spec;
  spec.method = QuadMethod::adaptive_truncated;
  spec.rel_tol = rel_tol;
  spec.truncation_radius = radius;
  return spec;
}

void QuadratureSpec::validate() const {
  if (method == QuadMethod::gauss_hermite && node_count < 20) {
    throw InvalidInput("Gauss-Hermite node count must be at least 20");
  }
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw InvalidInput("quadrature tolerances must be positive");
  }
  if (!(truncation_radius > 0.0)) {
    throw InvalidInput("truncation radius must be positive");
  }
}

void SolverConfig::validate() const {
  if (!(grad_tol > 0.0)) throw InvalidInput("grad_tol must be positive");
  if (max_iter < 1) throw InvalidInput("max_iter must be positive");
  if (!(damping > 0.0 && damping < 1.0)) {
    throw InvalidInput("damping must lie in (0,1)");
  }
}

ScaleHint gaussian_product_hint(
    std::span<const std::pair<double, double>> center_precision) {
  double total = 0.0;
  double weighted_center = 0.0;
  for (const auto& [center, precision] : center_precision) {
    total += precision;
    weighted_center += precision * center;
  }
  if (!(total > 0.0)) {
    throw InvalidInput(
        "Gaussian product has nonpositive total precision; the integrand does "
        "not decay");
  }
  return ScaleHint{weighted_center / total, 1.0 / std::sqrt(total)};
}

const GaussHermiteRule& gauss_hermite_rule(int node_count) {
  if (node_count < 1) throw InvalidInput("node count must be positive");
  static std::mutex mutex;
  static std::map<int, GaussHermiteRule> cache;
  std::scoped_lock lock(mutex);
  auto it = cache.find(node_count);
  if (it != cache.end()) return it->second;

  // Golub-Welsch: eigen-decompose the Jacobi matrix of the Hermite weight.
  Matrix jacobi = Matrix::Zero(node_count, node_count);
  for (int i = 0; i + 1 < node_count; ++i) {
    const double beta = std::sqrt((i + 1) / 2.0);
    jacobi(i, i + 1) = beta;
    jacobi(i + 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(jacobi);
  GaussHermiteRule rule;
  rule.nodes.resize(node_count);
  rule.weights.resize(node_count);
  const double sqrt_pi = std::sqrt(M_PI);
  for (int i = 0; i < node_count; ++i) {
    const double t = solver.eigenvalues()[i];
    const double v0 = solver.eigenvectors()(0, i);
    rule.nodes[i] = t;
    // Fold exp(t^2) into the weight so the rule applies to plain dx integrals.
    rule.weights[i] = std::exp(std::log(sqrt_pi * v0 * v0) + t * t);
  }
  return cache.emplace(node_count, std::move(rule)).first->second;
}

namespace {

template <typename T>
double max_abs(const T& value) {
  return value.cwiseAbs().maxCoeff();
}
template <>
double max_abs<double>(const double& value) {
  return std::abs(value);
}

template <typename T, typename F, typename Zero>
T integrate_impl(const F& f, const ScaleHint& hint, const QuadratureSpec& spec,
                 const Zero& zero) {
  spec.validate();
  if (!(hint.spread > 0.0) || !std::isfinite(hint.center)) {
    throw InvalidInput("quadrature hint must have finite center and positive spread");
  }

  if (spec.method == QuadMethod::gauss_hermite) {
    const GaussHermiteRule& rule = gauss_hermite_rule(spec.node_count);
    const double scale = std::sqrt(2.0) * hint.spread;
    T sum = zero();
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      sum += rule.weights[i] * f(hint.center + scale * rule.nodes[i]);
    }
    return scale * sum;
  }

  // Adaptive Simpson over a truncated window, seeded with a fixed panel grid
  // so narrow kernels are not missed by the first coarse pass.
  const double a = hint.center - spec.truncation_radius * hint.spread;
  const double b = hint.center + spec.truncation_radius * hint.spread;
  constexpr int kPanels = 64;
  const double width = (b - a) / kPanels;

  struct Panel {
    double a, m, b;
    T fa, fm, fb;
    T coarse;
  };
  std::vector<Panel> panels;
  panels.reserve(kPanels);
  T whole = zero();
  for (int i = 0; i < kPanels; ++i) {
    Panel p;
    p.a = a + i * width;
    p.b = p.a + width;
    p.m = 0.5 * (p.a + p.b);
    p.fa = f(p.a);
    p.fm = f(p.m);
    p.fb = f(p.b);
    p.coarse = (width / 6.0) * (p.fa + 4.0 * p.fm + p.fb);
    whole += p.coarse;
    panels.push_back(std::move(p));
  }
  const double tol =
      std::max(spec.abs_tol, spec.rel_tol * std::max(max_abs(whole), 1e-300));

  bool failed = false;
  // Recursive bisection with the classic 1/15 Richardson error estimate.
  std::function<T(double, double, const T&, const T&, const T&, const T&, double, int)>
      refine = [&](double lo, double hi, const T& flo, const T& fmid, const T& fhi,
                   const T& coarse, double local_tol, int depth) -> T {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid);
    const double rm = 0.5 * (mid + hi);
    const T flm = f(lm);
    const T frm = f(rm);
    const double h6 = (hi - lo) / 12.0;
    const T left = h6 * (flo + 4.0 * flm + fmid);
    const T right = h6 * (fmid + 4.0 * frm + fhi);
    const T fine = left + right;
    const double err = max_abs(T(fine - coarse));
    if (err <= 15.0 * local_tol) {
      return fine + (fine - coarse) / 15.0;
    }
    if (depth >= spec.max_depth) {
      failed = true;
      return fine + (fine - coarse) / 15.0;
    }
    return refine(lo, mid, flo, flm, fmid, left, 0.5 * local_tol, depth + 1) +
           refine(mid, hi, fmid, frm, fhi, right, 0.5 * local_tol, depth + 1);
  };

  T total = zero();
  for (const Panel& p : panels) {
    total += refine(p.a, p.b, p.fa, p.fm, p.fb, p.coarse, tol / kPanels, 0);
  }
  if (failed) {
    throw QuadratureFailure("adaptive quadrature failed to converge",
                            max_abs(total));
  }
  return total;
}

}  // namespace

double integrate(const std::function<double(double)>& f, const ScaleHint& hint,
                 const QuadratureSpec& spec) {
  return integrate_impl<double>(f, hint, spec, [] { return 0.0; });
}

Vector integrate_vector(const std::function<Vector(double)>& f, int dim,
                        const ScaleHint& hint, const QuadratureSpec& spec) {
  return integrate_impl<Vector>(f, hint, spec,
                                [dim] { return Vector(Vector::Zero(dim)); });
}

Matrix integrate_matrix(const std::function<Matrix(double)>& f, int rows, int cols,
                        const ScaleHint& hint, const QuadratureSpec& spec) {
  return integrate_impl<Matrix>(
      f, hint, spec, [rows, cols] { return Matrix(Matrix::Zero(rows, cols)); });
}

namespace {
double sup_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
}  // namespace

SolverResult newton_solve(const std::function<Vector(const Vector&)>& g,
                          const std::function<Matrix(const Vector&)>& g_jacobian,
                          Vector init, const SolverConfig& cfg,
                          const std::function<bool(const Vector&)>& in_domain) {
  cfg.validate();
  auto inside = [&](const Vector& x) {
    return x.allFinite() && (!in_domain || in_domain(x));
  };
  if (!inside(init)) throw InvalidInput("initial point lies outside the domain");

  Vector x = std::move(init);
  Vector gx = g(x);
  double norm = sup_norm(gx);
  int iter = 0;
  for (; iter < cfg.max_iter && !(norm < cfg.grad_tol); ++iter) {
    const Matrix jac = g_jacobian(x);
    Eigen::FullPivLU<Matrix> lu(jac);
    Vector step;
    const bool singular = !lu.isInvertible();
    if (singular) {
      // Steepest descent on 0.5*||g||^2.
      step = -(jac.transpose() * gx);
      if (sup_norm(step) < 1e-14 * std::max(1.0, norm)) {
        throw SolverFailure("singular Jacobian with no descent direction", x);
      }
    } else {
      step = lu.solve(-gx);
    }

    bool accepted = false;
    double t = 1.0;
    for (int bt = 0; bt < 60; ++bt, t *= cfg.damping) {
      const Vector candidate = x + t * step;
      if (!inside(candidate)) continue;
      Vector gc = g(candidate);
      const double cnorm = sup_norm(gc);
      if (cnorm < norm) {
        x = candidate;
        gx = std::move(gc);
        norm = cnorm;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (singular) {
        throw SolverFailure("persistently singular Jacobian", x);
      }
      break;  // stalled line search; report the non-converged iterate
    }
  }
  return SolverResult{std::move(x), iter, norm < cfg.grad_tol, norm};
}

SolverResult minimize_fd(const std::function<double(const Vector&)>& objective,
                         Vector init, const SolverConfig& cfg,
                         const std::function<bool(const Vector&)>& in_domain) {
  const int dim = static_cast<int>(init.size());
  auto grad = [objective, dim](const Vector& x) {
    Vector g(dim);
    for (int i = 0; i < dim; ++i) {
      const double h = 1e-6 * (1.0 + std::abs(x[i]));
      Vector xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      g[i] = (objective(xp) - objective(xm)) / (2.0 * h);
    }
    return g;
  };
  auto hess = [objective, dim](const Vector& x) {
    Matrix h(dim, dim);
    const double f0 = objective(x);
    Vector step(dim);
    for (int i = 0; i < dim; ++i) step[i] = 1.2e-4 * (1.0 + std::abs(x[i]));
    for (int i = 0; i < dim; ++i) {
      Vector xp = x, xm = x;
      xp[i] += step[i];
      xm[i] -= step[i];
      h(i, i) = (objective(xp) - 2.0 * f0 + objective(xm)) / (step[i] * step[i]);
      for (int j = i + 1; j < dim; ++j) {
        Vector xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += step[i]; xpp[j] += step[j];
        xpm[i] += step[i]; xpm[j] -= step[j];
        xmp[i] -= step[i]; xmp[j] += step[j];
        xmm[i] -= step[i]; xmm[j] -= step[j];
        h(i, j) = (objective(xpp) - objective(xpm) - objective(xmp) + objective(xmm)) /
                  (4.0 * step[i] * step[j]);
        h(j, i) = h(i, j);
      }
    }
    return h;
  };
  return newton_solve(grad, hess, std::move(init), cfg, in_domain);
}

double median(std::span<const double> data) {
  if (data.empty()) throw InvalidInput("median of empty data");
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double mad_scale(std::span<const double> data) {
  if (data.size() < 2) throw InvalidInput("mad_scale needs at least two points");
  const double center = median(data);
  std::vector<double> dev(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) dev[i] = std::abs(data[i] - center);
  return 1.4826 * median(dev);
}

}  // namespace robustfit
