#include "robustfit/simharness.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <thread>

#include "robustfit/asymptotics.hpp"
#include "robustfit/minl2.hpp"
#include "robustfit/robustkl.hpp"

namespace robustfit {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string format_tuning(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : state_(seed) {}

Rng Rng::child(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  std::uint64_t mixed = splitmix64(s);
  s = mixed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  return Rng(splitmix64(s));
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  // 53-bit mantissa, shifted into (0, 1]
  return ((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  cached_ = r * std::sin(angle);
  has_cached_ = true;
  return r * std::cos(angle);
}

void Contaminant::validate() const {
  const int set = (point.has_value() ? 1 : 0) + (component.has_value() ? 1 : 0) +
                  (point_mvn.has_value() ? 1 : 0);
  if (set != 1) {
    throw InvalidInput("contaminant must be exactly one of point, component, point_mvn");
  }
  if (component) component->validate();
}

std::vector<double> contaminate(std::vector<double> sample, double epsilon,
                                const Contaminant& contaminant, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) {
    throw InvalidInput("contamination fraction must lie in [0, 0.5)");
  }
  if (epsilon == 0.0) return sample;
  contaminant.validate();
  if (contaminant.point_mvn) {
    throw InvalidInput("multivariate contaminant applied to scalar sample");
  }
  for (double& x : sample) {
    if (rng.uniform() <= epsilon) {
      x = contaminant.point ? *contaminant.point
                            : contaminant.component->mu +
                                  contaminant.component->sigma * rng.normal();
    }
  }
  return sample;
}

std::string EstimatorSpec::label() const {
  switch (method) {
    case Method::ml:
      return "ml";
    case Method::l2_constant:
      return "l2";
    case Method::l2_exp_delta:
      return "l2-delta=" + format_tuning(tuning);
    case Method::kl:
      return "kl-k=" + format_tuning(tuning);
    case Method::mvn_kl:
      return "mvn-h=" + format_tuning(tuning);
  }
  return "?";
}

void ScenarioSpec::validate() const {
  if (n < 10) throw InvalidInput("scenario needs n >= 10");
  if (reps < 1) throw InvalidInput("scenario needs reps >= 1");
  if (estimators.empty()) throw InvalidInput("scenario needs at least one estimator");
  if (!true_mvn) true_model.validate();
  if (contamination) {
    if (!(contamination->epsilon >= 0.0 && contamination->epsilon < 0.5)) {
      throw InvalidInput("contamination fraction must lie in [0, 0.5)");
    }
    contamination->contaminant.validate();
  }
  for (const EstimatorSpec& est : estimators) {
    const bool mvn_estimator = est.method == Method::mvn_kl;
    const bool mvn_model = true_mvn.has_value();
    if (mvn_estimator != mvn_model && est.method != Method::ml) {
      if (mvn_model) throw InvalidInput("multivariate scenarios support ml and mvn_kl only");
      throw InvalidInput("mvn_kl estimator requires a multivariate true model");
    }
    if (est.method == Method::l2_exp_delta && !(est.tuning >= 0.0 && est.tuning < 1.0)) {
      throw InvalidInput("l2_exp_delta tuning must lie in [0,1)");
    }
    if ((est.method == Method::kl || est.method == Method::mvn_kl) && !(est.tuning > 0.0)) {
      throw InvalidInput("kernel tuning must be positive");
    }
  }
}

namespace {

// Flatten an MVN estimate as (mu..., lower triangle of the covariance).
Vector flatten_mvn(const MvnParams& params) {
  const int p = params.dim();
  const Matrix cov = params.covariance();
  Vector out(p + p * (p + 1) / 2);
  out.head(p) = params.mu;
  int idx = p;
  for (int j = 0; j < p; ++j)
    for (int i = j; i < p; ++i) out[idx++] = cov(i, j);
  return out;
}

std::optional<Vector> fit_one(const EstimatorSpec& est, const ScenarioSpec& spec,
                              const std::vector<double>& sample,
                              const std::vector<Vector>& mvn_sample) {
  try {
    switch (est.method) {
      case Method::ml: {
        if (spec.true_mvn) {
          const int p = spec.true_mvn->dim();
          Vector mean = Vector::Zero(p);
          for (const Vector& x : mvn_sample) mean += x;
          mean /= static_cast<double>(mvn_sample.size());
          Matrix cov = Matrix::Zero(p, p);
          for (const Vector& x : mvn_sample) {
            const Vector d = x - mean;
            cov += d * d.transpose();
          }
          cov /= static_cast<double>(mvn_sample.size());
          return flatten_mvn(MvnParams::from_moments(mean, cov));
        }
        double mean = 0.0;
        for (double x : sample) mean += x;
        mean /= static_cast<double>(sample.size());
        double ss = 0.0;
        for (double x : sample) ss += (x - mean) * (x - mean);
        const double sigma = std::sqrt(ss / static_cast<double>(sample.size()));
        if (!(sigma > 0.0)) return std::nullopt;
        Vector theta(2);
        theta << mean, sigma;
        return theta;
      }
      case Method::l2_constant: {
        const NormalModel model;
        FitResult fit = fit_min_l2(sample, model, WeightFunction::constant());
        if (!fit.converged) return std::nullopt;
        return fit.theta;
      }
      case Method::l2_exp_delta: {
        const NormalModel model;
        const double scale = mad_scale(sample);
        if (!(scale > 0.0)) return std::nullopt;
        const WeightFunction w =
            WeightFunction::exp_delta(est.tuning, median(sample), scale);
        FitResult fit = fit_min_l2(sample, model, w);
        if (!fit.converged) return std::nullopt;
        return fit.theta;
      }
      case Method::kl: {
        LocalFitSpec local;
        local.k = est.tuning;
        FitResult fit = fit_robust_kl(sample, local);
        if (!fit.converged) return std::nullopt;
        return fit.theta;
      }
      case Method::mvn_kl: {
        MvnLocalFitSpec local;
        local.h = est.tuning;
        MvnFitResult fit = fit_mvn_robust(mvn_sample, local);
        if (!fit.converged) return std::nullopt;
        return flatten_mvn(fit.params);
      }
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Vector> theoretical_variance(const EstimatorSpec& est,
                                           const ScenarioSpec& spec) {
  if (spec.true_mvn) return std::nullopt;
  const double sigma = spec.true_model.sigma;
  Vector v(2);
  switch (est.method) {
    case Method::ml:
      v << sigma * sigma, 0.5 * sigma * sigma;
      return v;
    case Method::l2_constant: {
      auto [vm, vs] = normal_l2_variances(sigma, 0.0);
      v << vm, vs;
      return v;
    }
    case Method::l2_exp_delta: {
      auto [vm, vs] = normal_l2_variances(sigma, est.tuning);
      v << vm, vs;
      return v;
    }
    case Method::kl: {
      auto [vm, vs] = normal_kl_variances(sigma, est.tuning);
      v << vm, vs;
      return v;
    }
    case Method::mvn_kl:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

SimulationReport run_scenario(const ScenarioSpec& spec) {
  spec.validate();
  const std::size_t n_est = spec.estimators.size();
  // estimates[e][r]: estimate of estimator e in replication r, if it succeeded
  std::vector<std::vector<std::optional<Vector>>> estimates(
      n_est, std::vector<std::optional<Vector>>(spec.reps));

  auto run_rep = [&](int r) {
    Rng rng = Rng::child(spec.seed, static_cast<std::uint64_t>(r));
    std::vector<double> sample;
    std::vector<Vector> mvn_sample;
    if (spec.true_mvn) {
      const MvnParams& truth = *spec.true_mvn;
      const int p = truth.dim();
      mvn_sample.resize(spec.n);
      for (int i = 0; i < spec.n; ++i) {
        Vector z(p);
        for (int j = 0; j < p; ++j) z[j] = rng.normal();
        mvn_sample[i] = truth.mu + truth.chol * z;
      }
      if (spec.contamination && spec.contamination->epsilon > 0.0) {
        const Contaminant& c = spec.contamination->contaminant;
        if (!c.point_mvn) {
          throw InvalidInput("multivariate scenarios need a point_mvn contaminant");
        }
        for (Vector& x : mvn_sample) {
          if (rng.uniform() <= spec.contamination->epsilon) x = *c.point_mvn;
        }
      }
    } else {
      sample.resize(spec.n);
      for (int i = 0; i < spec.n; ++i) {
        sample[i] = spec.true_model.mu + spec.true_model.sigma * rng.normal();
      }
      if (spec.contamination && spec.contamination->epsilon > 0.0) {
        sample = contaminate(std::move(sample), spec.contamination->epsilon,
                             spec.contamination->contaminant, rng);
      }
    }
    for (std::size_t e = 0; e < n_est; ++e) {
      estimates[e][r] = fit_one(spec.estimators[e], spec, sample, mvn_sample);
    }
  };

  if (spec.parallel && spec.reps > 1) {
    const int workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      futures.push_back(std::async(std::launch::async, [&, w] {
        for (int r = w; r < spec.reps; r += workers) run_rep(r);
      }));
    }
    for (auto& f : futures) f.get();
  } else {
    for (int r = 0; r < spec.reps; ++r) run_rep(r);
  }

  SimulationReport report;
  report.estimators.reserve(n_est);
  for (std::size_t e = 0; e < n_est; ++e) {
    EstimatorSummary summary;
    summary.label = spec.estimators[e].label();
    int dim = 0;
    for (const auto& est : estimates[e]) {
      if (est) {
        dim = static_cast<int>(est->size());
        break;
      }
    }
    Vector mean = Vector::Zero(dim);
    int successes = 0;
    for (const auto& est : estimates[e]) {
      if (est) {
        mean += *est;
        ++successes;
      }
    }
    if (successes > 0) mean /= static_cast<double>(successes);
    Vector var = Vector::Zero(dim);
    if (successes > 1) {
      for (const auto& est : estimates[e]) {
        if (est) var += (*est - mean).cwiseAbs2();
      }
      var /= static_cast<double>(successes - 1);
    }
    summary.mean_estimate = mean;
    summary.n_times_variance = static_cast<double>(spec.n) * var;
    summary.theoretical = theoretical_variance(spec.estimators[e], spec);
    summary.successes = successes;
    summary.failures = spec.reps - successes;
    report.estimators.push_back(std::move(summary));
  }
  return report;
}

}  // namespace robustfit
