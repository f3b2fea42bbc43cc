#include "robustfit/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "robustfit/asymptotics.hpp"
#include "robustfit/minl2.hpp"
#include "robustfit/model.hpp"
#include "robustfit/robustkl.hpp"
#include "robustfit/simharness.hpp"

namespace robustfit {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitSelfCheck = 3;

double round_sig(double v, int digits) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

std::string format_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

json rounded(const Vector& v, int digits) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(round_sig(v[i], digits));
  return arr;
}

json rounded(const Matrix& m, int digits) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(round_sig(m(i, j), digits));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> parse_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string token;
    bool parse_failed = false;
    while (std::getline(ss, token, ',')) {
      char* end = nullptr;
      const char* begin = token.c_str();
      const double value = std::strtod(begin, &end);
      while (end && *end == ' ') ++end;
      if (end == begin || (end && *end != '\0')) {
        parse_failed = true;
        break;
      }
      row.push_back(value);
    }
    if (parse_failed) {
      // A non-numeric first line is an (optional) header; later ones are errors.
      if (first_content_line) {
        first_content_line = false;
        continue;
      }
      throw InvalidInput("line " + std::to_string(line_no) +
                         ": could not parse '" + token + "' as a number");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidInput("line " + std::to_string(line_no) +
                         ": expected " + std::to_string(rows.front().size()) +
                         " columns, found " + std::to_string(row.size()));
    }
    first_content_line = false;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw InvalidInput("input contains no data rows; expected CSV with one "
                       "numeric column (normal) or p columns (mvn)");
  }
  return rows;
}

std::vector<std::vector<double>> read_input(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return parse_csv(in);
  std::ifstream file(path);
  if (!file) throw InvalidInput("cannot open input file: " + path);
  return parse_csv(file);
}

std::vector<double> single_column(const std::vector<std::vector<double>>& rows) {
  if (rows.front().size() != 1) {
    throw InvalidInput("the normal model expects exactly one CSV column");
  }
  std::vector<double> data(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) data[i] = rows[i][0];
  return data;
}

struct Options {
  std::string input;
  std::string format;  // "json" or "csv"; subcommand-dependent default
  int precision = 6;

  std::string model = "normal";
  std::string method = "ml";
  std::string weight = "constant";
  double delta = 0.0;
  bool delta_set = false;
  double x0 = 0.0;
  bool x0_set = false;
  double h = 2.0;
  double k = 2.0;

  std::string theta;
  std::string grid;

  std::string family;
  double sigma = 1.0;

  // simulate
  int n = 100;
  int reps = 100;
  std::uint64_t seed = 0;
  double mu = 0.0;
  double epsilon = 0.0;
  double contaminant_point = 0.0;
  bool contaminant_point_set = false;
  std::string contaminant_point_mvn;
  int mvn_dim = 0;
  std::vector<std::string> estimators;
  bool parallel = false;
};

WeightFunction make_weight(const Options& opt, const std::vector<double>& data) {
  if (opt.weight == "constant") return WeightFunction::constant();
  if (opt.weight == "exp-delta") {
    if (!opt.delta_set) throw InvalidInput("--weight exp-delta requires --delta");
    const double scale = mad_scale(data);
    if (!(scale > 0.0)) throw DegenerateData("zero robust scale; cannot build data-driven weight");
    return WeightFunction::exp_delta(opt.delta, median(data), scale);
  }
  if (opt.weight == "kernel") {
    if (!opt.x0_set) throw InvalidInput("--weight kernel requires --x0");
    return WeightFunction::kernel_local(opt.x0, KernelSpec{opt.h});
  }
  throw InvalidInput("unknown weight '" + opt.weight + "'");
}

int cmd_fit(const Options& opt, std::istream& in, std::ostream& out) {
  const auto rows = read_input(opt.input, in);
  const int digits = opt.precision;

  json report;
  report["schema"] = 1;
  report["command"] = "fit";
  report["model"] = opt.model;
  report["method"] = opt.method;
  bool converged = true;

  if (opt.model == "normal") {
    const std::vector<double> data = single_column(rows);
    const double n = static_cast<double>(data.size());
    Vector theta(2);
    Vector se(2);
    int iterations = 0;
    if (opt.method == "ml") {
      if (data.size() < 2) throw InvalidInput("maximum likelihood needs at least two points");
      double mean = 0.0;
      for (double x : data) mean += x;
      mean /= n;
      double ss = 0.0;
      for (double x : data) ss += (x - mean) * (x - mean);
      const double sigma = std::sqrt(ss / n);
      if (!(sigma > 0.0)) throw DegenerateData("all data points coincide");
      theta << mean, sigma;
      se << sigma / std::sqrt(n), sigma / std::sqrt(2.0 * n);
    } else if (opt.method == "l2") {
      const NormalModel model;
      const WeightFunction w = make_weight(opt, data);
      const FitResult fit = fit_min_l2(data, model, w);
      theta = fit.theta;
      se = (fit.sandwich.diagonal() / n).cwiseSqrt();
      iterations = fit.iterations;
      converged = fit.converged;
      report["residual_norm"] = round_sig(fit.residual_norm, digits);
    } else if (opt.method == "kl") {
      LocalFitSpec spec;
      spec.k = opt.k;
      if (opt.x0_set) spec.x0 = opt.x0;
      const FitResult fit = fit_robust_kl(data, spec);
      theta = fit.theta;
      se = (fit.sandwich.diagonal() / n).cwiseSqrt();
      iterations = fit.iterations;
      converged = fit.converged;
      report["residual_norm"] = round_sig(fit.residual_norm, digits);
    } else {
      throw InvalidInput("unknown method '" + opt.method + "'");
    }
    report["n"] = data.size();
    report["estimate"] = {{"mu", round_sig(theta[0], digits)},
                          {"sigma", round_sig(theta[1], digits)}};
    report["std_error"] = {{"mu", round_sig(se[0], digits)},
                           {"sigma", round_sig(se[1], digits)}};
    report["iterations"] = iterations;
    report["converged"] = converged;
    if (opt.format == "csv") {
      out << "mu,sigma,se_mu,se_sigma,iterations,converged\n"
          << format_sig(theta[0], digits) << ',' << format_sig(theta[1], digits) << ','
          << format_sig(se[0], digits) << ',' << format_sig(se[1], digits) << ','
          << iterations << ',' << (converged ? 1 : 0) << '\n';
    } else {
      out << report.dump(2) << '\n';
    }
  } else if (opt.model == "mvn") {
    const int p = static_cast<int>(rows.front().size());
    std::vector<Vector> data(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      data[i] = Eigen::Map<const Vector>(rows[i].data(), p);
    }
    MvnParams params;
    int iterations = 0;
    if (opt.method == "ml") {
      Vector mean = Vector::Zero(p);
      for (const Vector& x : data) mean += x;
      mean /= static_cast<double>(data.size());
      Matrix cov = Matrix::Zero(p, p);
      for (const Vector& x : data) {
        const Vector d = x - mean;
        cov += d * d.transpose();
      }
      cov /= static_cast<double>(data.size());
      params = MvnParams::from_moments(mean, cov);
    } else if (opt.method == "kl") {
      MvnLocalFitSpec spec;
      spec.h = opt.h;
      const MvnFitResult fit = fit_mvn_robust(data, spec);
      params = fit.params;
      iterations = fit.iterations;
      converged = fit.converged;
      report["residual_norm"] = round_sig(fit.residual_norm, digits);
    } else {
      throw InvalidInput("method '" + opt.method + "' is not available for the mvn model");
    }
    report["n"] = data.size();
    report["p"] = p;
    report["estimate"] = {{"mu", rounded(params.mu, digits)},
                          {"covariance", rounded(params.covariance(), digits)}};
    report["iterations"] = iterations;
    report["converged"] = converged;
    if (opt.format == "csv") {
      const Matrix cov = params.covariance();
      for (int j = 0; j < p; ++j) out << (j ? "," : "") << "mu_" << j;
      for (int j = 0; j < p; ++j)
        for (int i = j; i < p; ++i) out << ",sigma_" << i << '_' << j;
      out << ",iterations,converged\n";
      for (int j = 0; j < p; ++j) out << (j ? "," : "") << format_sig(params.mu[j], digits);
      for (int j = 0; j < p; ++j)
        for (int i = j; i < p; ++i) out << ',' << format_sig(cov(i, j), digits);
      out << ',' << iterations << ',' << (converged ? 1 : 0) << '\n';
    } else {
      out << report.dump(2) << '\n';
    }
  } else {
    throw InvalidInput("unknown model '" + opt.model + "'");
  }
  return converged ? kExitOk : kExitNumerical;
}

Vector parse_theta(const std::string& text) {
  Vector theta(2);
  if (std::sscanf(text.c_str(), "%lf,%lf", &theta[0], &theta[1]) != 2) {
    throw InvalidInput("--theta expects MU,SIGMA");
  }
  return theta;
}

int cmd_influence(const Options& opt, std::ostream& out) {
  if (opt.model != "normal") throw InvalidInput("influence supports --model normal only");
  const Vector theta = parse_theta(opt.theta);
  NormalParams::from_vector(theta).validate();

  double lo = 0.0, hi = 0.0, step = 0.0;
  if (std::sscanf(opt.grid.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3) {
    throw InvalidInput("--grid expects LO:HI:STEP");
  }
  if (!(step > 0.0) || hi < lo) throw InvalidInput("grid requires STEP > 0 and HI >= LO");

  const NormalModel model;
  const QuadratureSpec quad;
  Matrix j;
  Vector xi0;
  std::function<double(double)> weight_at;
  if (opt.method == "l2") {
    std::vector<double> no_data;  // weight prelims must be explicit here
    WeightFunction w = WeightFunction::constant();
    if (opt.weight == "exp-delta") {
      if (!opt.delta_set) throw InvalidInput("--weight exp-delta requires --delta");
      w = WeightFunction::exp_delta(opt.delta, theta[0], theta[1]);
    } else if (opt.weight != "constant") {
      throw InvalidInput("influence supports constant or exp-delta weights");
    }
    j = l2_J(theta, w, model, std::nullopt, quad);
    xi0 = l2_xi0(theta, w, model, std::nullopt, quad);
    weight_at = [w, &model, theta](double x) {
      return w(x) * model.density(x, theta);
    };
  } else if (opt.method == "kl") {
    const double x0 = opt.x0_set ? opt.x0 : theta[0];
    const KernelSpec kernel{opt.k * theta[1]};
    auto [jh, mh] = kl_Jh_Mh(theta, x0, kernel, model, quad);
    (void)mh;
    j = jh;
    xi0 = kl_xi0(theta, x0, kernel, model, quad);
    weight_at = [kernel, x0](double x) { return kernel.evaluate(x - x0); };
  } else {
    throw InvalidInput("influence supports methods l2 and kl");
  }
  Eigen::FullPivLU<Matrix> lu(j);
  if (!lu.isInvertible()) {
    throw SolverFailure("influence: J matrix is singular", theta);
  }

  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  const int digits = opt.precision;
  json points = json::array();
  const bool csv = opt.format != "json";
  if (csv) out << "x,I_mu,I_sigma\n";
  for (int i = 0; i < count; ++i) {
    const double x = lo + i * step;
    const Vector infl = lu.solve(weight_at(x) * model.score(x, theta) - xi0);
    if (csv) {
      out << format_sig(x, digits) << ',' << format_sig(infl[0], digits) << ','
          << format_sig(infl[1], digits) << '\n';
    } else {
      points.push_back({{"x", round_sig(x, digits)},
                        {"I_mu", round_sig(infl[0], digits)},
                        {"I_sigma", round_sig(infl[1], digits)}});
    }
  }
  if (!csv) {
    json report = {{"schema", 1}, {"command", "influence"}, {"points", points}};
    out << report.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_asymptotics(const Options& opt, std::ostream& out) {
  const double sigma = opt.sigma;
  if (!(sigma > 0.0)) throw InvalidInput("--sigma must be positive");
  const NormalModel model;
  const QuadratureSpec quad;
  Vector theta(2);
  theta << 0.0, sigma;

  double closed_mu = 0.0, closed_sigma = 0.0;
  double quad_mu = 0.0, quad_sigma = 0.0;
  if (opt.family == "l2-delta") {
    std::tie(closed_mu, closed_sigma) = normal_l2_variances(sigma, opt.delta);
    const WeightFunction w = opt.delta > 0.0
                                 ? WeightFunction::exp_delta(opt.delta, 0.0, sigma)
                                 : WeightFunction::constant();
    const Matrix s = sandwich(l2_J(theta, w, model, std::nullopt, quad),
                              l2_M(theta, w, model, std::nullopt, quad));
    quad_mu = s(0, 0);
    quad_sigma = s(1, 1);
  } else if (opt.family == "kl-k") {
    if (!(opt.k > 0.0)) throw InvalidInput("--k must be positive");
    std::tie(closed_mu, closed_sigma) = normal_kl_variances(sigma, opt.k);
    auto [jh, mh] = kl_Jh_Mh(theta, 0.0, KernelSpec{opt.k * sigma}, model, quad);
    const Matrix s = sandwich(jh, mh);
    quad_mu = s(0, 0);
    quad_sigma = s(1, 1);
  } else if (opt.family == "ml") {
    closed_mu = sigma * sigma;
    closed_sigma = 0.5 * sigma * sigma;
    const Matrix fi = fisher_information(model, theta, quad);
    const Matrix inv = fi.inverse();
    quad_mu = inv(0, 0);
    quad_sigma = inv(1, 1);
  } else {
    throw InvalidInput("--family must be l2-delta, kl-k, or ml");
  }

  const double mismatch =
      std::max(std::abs(quad_mu - closed_mu) / std::abs(closed_mu),
               std::abs(quad_sigma - closed_sigma) / std::abs(closed_sigma));
  const bool agree = mismatch <= 1e-6;
  const double eff_mu = sigma * sigma / closed_mu;
  const double eff_sigma = 0.5 * sigma * sigma / closed_sigma;

  const int digits = opt.precision;
  if (opt.format == "csv") {
    out << "source,var_mu,var_sigma,eff_mu,eff_sigma\n"
        << "closed_form," << format_sig(closed_mu, digits) << ','
        << format_sig(closed_sigma, digits) << ',' << format_sig(eff_mu, digits) << ','
        << format_sig(eff_sigma, digits) << '\n'
        << "quadrature," << format_sig(quad_mu, digits) << ','
        << format_sig(quad_sigma, digits) << ",,\n";
  } else {
    json report = {{"schema", 1},
                   {"command", "asymptotics"},
                   {"family", opt.family},
                   {"sigma", round_sig(sigma, digits)},
                   {"closed_form",
                    {{"var_mu", round_sig(closed_mu, digits)},
                     {"var_sigma", round_sig(closed_sigma, digits)}}},
                   {"quadrature",
                    {{"var_mu", round_sig(quad_mu, digits)},
                     {"var_sigma", round_sig(quad_sigma, digits)}}},
                   {"efficiency",
                    {{"mu", round_sig(eff_mu, digits)},
                     {"sigma", round_sig(eff_sigma, digits)}}},
                   {"agreement", agree}};
    if (opt.family == "l2-delta") report["delta"] = round_sig(opt.delta, digits);
    if (opt.family == "kl-k") report["k"] = round_sig(opt.k, digits);
    out << report.dump(2) << '\n';
  }
  return agree ? kExitOk : kExitSelfCheck;
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  ScenarioSpec spec;
  spec.n = opt.n;
  spec.reps = opt.reps;
  spec.seed = opt.seed;
  spec.parallel = opt.parallel;
  spec.true_model = NormalParams{opt.mu, opt.sigma};
  if (opt.mvn_dim > 0) {
    spec.true_mvn = MvnParams::from_moments(Vector::Zero(opt.mvn_dim),
                                            Matrix::Identity(opt.mvn_dim, opt.mvn_dim));
  }
  if (opt.epsilon > 0.0) {
    Contamination contamination;
    contamination.epsilon = opt.epsilon;
    if (!opt.contaminant_point_mvn.empty()) {
      std::vector<double> coords;
      std::stringstream ss(opt.contaminant_point_mvn);
      std::string token;
      while (std::getline(ss, token, ',')) coords.push_back(std::strtod(token.c_str(), nullptr));
      contamination.contaminant.point_mvn =
          Eigen::Map<const Vector>(coords.data(), static_cast<int>(coords.size()));
    } else if (opt.contaminant_point_set) {
      contamination.contaminant.point = opt.contaminant_point;
    } else {
      throw InvalidInput("--epsilon > 0 requires a contaminant");
    }
    spec.contamination = contamination;
  }
  if (opt.estimators.empty()) throw InvalidInput("at least one --estimator is required");
  for (const std::string& name : opt.estimators) {
    EstimatorSpec est;
    if (name == "ml") {
      est.method = Method::ml;
    } else if (name == "l2") {
      est.method = Method::l2_constant;
    } else if (name == "l2-delta") {
      est.method = Method::l2_exp_delta;
      est.tuning = opt.delta;
    } else if (name == "kl") {
      est.method = Method::kl;
      est.tuning = opt.k;
    } else if (name == "mvn-kl") {
      est.method = Method::mvn_kl;
      est.tuning = opt.h;
    } else {
      throw InvalidInput("unknown estimator '" + name + "'");
    }
    spec.estimators.push_back(est);
  }

  const SimulationReport report = run_scenario(spec);
  for (const EstimatorSummary& summary : report.estimators) {
    if (spec.reps >= 100 && summary.failures > spec.reps / 100) {
      throw SolverFailure("estimator " + summary.label +
                              " failed in more than 1% of replications",
                          Vector());
    }
  }

  const int digits = opt.precision;
  json scenario = {{"n", spec.n},
                   {"reps", spec.reps},
                   {"seed", spec.seed},
                   {"mu", round_sig(spec.true_model.mu, digits)},
                   {"sigma", round_sig(spec.true_model.sigma, digits)},
                   {"epsilon", round_sig(opt.epsilon, digits)}};
  if (opt.mvn_dim > 0) scenario["mvn_dim"] = opt.mvn_dim;
  json estimators = json::array();
  for (const EstimatorSummary& summary : report.estimators) {
    json entry = {{"label", summary.label},
                  {"mean", rounded(summary.mean_estimate, digits)},
                  {"n_variance", rounded(summary.n_times_variance, digits)},
                  {"failures", summary.failures},
                  {"successes", summary.successes}};
    if (summary.theoretical) {
      entry["theoretical"] = rounded(*summary.theoretical, digits);
    } else {
      entry["theoretical"] = nullptr;
    }
    estimators.push_back(std::move(entry));
  }
  json doc = {{"schema", 1},
              {"command", "simulate"},
              {"scenario", scenario},
              {"estimators", estimators}};
  out << doc.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  Options opt;
  CLI::App app{"robust parametric fitting: minimum weighted L2 and localized "
               "Kullback-Leibler estimation"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--precision", opt.precision, "significant digits for printing")
        ->check(CLI::Range(1, 17));
  };

  CLI::App* fit = app.add_subcommand("fit", "fit a model to CSV data");
  fit->add_option("input", opt.input, "input CSV path ('-' or absent: stdin)");
  fit->add_option("--model", opt.model)->check(CLI::IsMember({"normal", "mvn"}));
  fit->add_option("--method", opt.method)->check(CLI::IsMember({"ml", "l2", "kl"}));
  fit->add_option("--weight", opt.weight)
      ->check(CLI::IsMember({"constant", "exp-delta", "kernel"}));
  fit->add_option("--delta", opt.delta)->each([&](const std::string&) { opt.delta_set = true; });
  fit->add_option("--x0", opt.x0)->each([&](const std::string&) { opt.x0_set = true; });
  fit->add_option("--bandwidth", opt.h);
  fit->add_option("--k", opt.k);

  CLI::App* influence = app.add_subcommand("influence", "emit influence-function curves");
  influence->add_option("--model", opt.model);
  influence->add_option("--method", opt.method);
  influence->add_option("--weight", opt.weight);
  influence->add_option("--delta", opt.delta)
      ->each([&](const std::string&) { opt.delta_set = true; });
  influence->add_option("--x0", opt.x0)->each([&](const std::string&) { opt.x0_set = true; });
  influence->add_option("--k", opt.k);
  influence->add_option("--theta", opt.theta, "MU,SIGMA")->required();
  influence->add_option("--grid", opt.grid, "LO:HI:STEP")->required();

  CLI::App* asymptotics = app.add_subcommand(
      "asymptotics", "closed-form and quadrature asymptotic variances");
  asymptotics->add_option("--family", opt.family, "l2-delta, kl-k, or ml")->required();
  asymptotics->add_option("--delta", opt.delta);
  asymptotics->add_option("--k", opt.k);
  asymptotics->add_option("--sigma", opt.sigma);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo scenario runner");
  simulate->add_option("--n", opt.n);
  simulate->add_option("--reps", opt.reps);
  simulate->add_option("--seed", opt.seed);
  simulate->add_option("--mu", opt.mu);
  simulate->add_option("--sigma", opt.sigma);
  simulate->add_option("--estimator", opt.estimators,
                       "ml, l2, l2-delta, kl, or mvn-kl (repeatable)");
  simulate->add_option("--delta", opt.delta);
  simulate->add_option("--k", opt.k);
  simulate->add_option("--bandwidth", opt.h);
  simulate->add_option("--epsilon", opt.epsilon);
  simulate->add_option("--contaminant-point", opt.contaminant_point)
      ->each([&](const std::string&) { opt.contaminant_point_set = true; });
  simulate->add_option("--contaminant-point-mvn", opt.contaminant_point_mvn,
                       "comma-separated coordinates");
  simulate->add_option("--mvn-dim", opt.mvn_dim);
  simulate->add_flag("--parallel", opt.parallel);

  add_common(fit);
  add_common(influence);
  add_common(asymptotics);
  add_common(simulate);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (fit->parsed()) return cmd_fit(opt, in, out);
    if (influence->parsed()) return cmd_influence(opt, out);
    if (asymptotics->parsed()) return cmd_asymptotics(opt, out);
    if (simulate->parsed()) return cmd_simulate(opt, out);
    err << "no subcommand given\n";
    return kExitInput;
  } catch (const InvalidInput& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DegenerateData& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const SolverFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const QuadratureFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace robustfit
