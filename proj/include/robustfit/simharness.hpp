#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robustfit/model.hpp"

namespace robustfit {

//! Deterministic, platform-independent generator (splitmix64 + Box-Muller).
//! Child generators are derived counter-style so replications can run in any
//! order, or in parallel, without changing the stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  static Rng child(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double uniform();  // in (0, 1]
  double normal();   // standard normal

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

//! Gross-error contaminant: a point mass, a normal component, or a point
//! mass in R^p for multivariate scenarios. Exactly one must be set.
struct Contaminant {
  std::optional<double> point;
  std::optional<NormalParams> component;
  std::optional<Vector> point_mvn;
  void validate() const;
};

struct Contamination {
  double epsilon = 0.0;  // replacement probability, in [0, 0.5)
  Contaminant contaminant;
};

//! Each point is independently replaced with probability epsilon by a draw
//! from the contaminant.
std::vector<double> contaminate(std::vector<double> sample, double epsilon,
                                const Contaminant& contaminant, Rng& rng);

enum class Method { ml, l2_constant, l2_exp_delta, kl, mvn_kl };

struct EstimatorSpec {
  Method method = Method::ml;
  double tuning = 0.0;  // delta for l2_exp_delta, k for kl, h for mvn_kl
  std::string label() const;
};

struct ScenarioSpec {
  NormalParams true_model{0.0, 1.0};
  std::optional<MvnParams> true_mvn;  // set for multivariate scenarios
  std::optional<Contamination> contamination;
  int n = 100;
  int reps = 100;
  std::uint64_t seed = 0;
  std::vector<EstimatorSpec> estimators;
  bool parallel = false;

  void validate() const;
};

struct EstimatorSummary {
  std::string label;
  Vector mean_estimate;
  Vector n_times_variance;
  std::optional<Vector> theoretical;  // sandwich diagonal under the true model
  int failures = 0;
  int successes = 0;
};

struct SimulationReport {
  std::vector<EstimatorSummary> estimators;
};

//! Runs the scenario; deterministic given the seed regardless of execution
//! order. Failed fits are counted, not fatal.
SimulationReport run_scenario(const ScenarioSpec& spec);

}  // namespace robustfit
