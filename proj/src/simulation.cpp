#include "phasereg/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <span>
#include <vector>

#include "phasereg/ecf.hpp"
#include "phasereg/errors.hpp"
#include "phasereg/parallel.hpp"
#include "phasereg/rng.hpp"

namespace phasereg {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Marginal quantile functions used by the copula path.
double half_normal_quantile(double p) { return normal_quantile(0.5 * (1.0 + p)); }

double exp1_quantile(double p) { return -std::log1p(-p); }

double bimodal_cdf(double x) {
  return 0.5 * normal_cdf(x - 5.0) + 0.5 * normal_cdf((x - 2.5) / 0.6);
}

// Monotone CDF inversion: bisection bracket, Newton polish.
double bimodal_quantile(double p) {
  double lo = -4.0, hi = 16.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bimodal_cdf(mid) < p ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    const double density = 0.5 * std::exp(-0.5 * (x - 5.0) * (x - 5.0)) / std::sqrt(2.0 * M_PI) +
                           0.5 / 0.6 * std::exp(-0.5 * std::pow((x - 2.5) / 0.6, 2)) /
                               std::sqrt(2.0 * M_PI);
    if (density <= 0.0) break;
    x -= (bimodal_cdf(x) - p) / density;
  }
  return x;
}

double draw_x(XDist d, CounterRng& rng) {
  switch (d) {
    case XDist::half_normal: return std::abs(rng.normal());
    case XDist::exponential1: return rng.exponential();
    case XDist::bimodal:
      return rng.uniform() < 0.5 ? 5.0 + rng.normal() : 2.5 + 0.6 * rng.normal();
  }
  throw DomainError("draw_x: invalid distribution");
}

double x_quantile(XDist d, double p) {
  switch (d) {
    case XDist::half_normal: return half_normal_quantile(p);
    case XDist::exponential1: return exp1_quantile(p);
    case XDist::bimodal: return bimodal_quantile(p);
  }
  throw DomainError("x_quantile: invalid distribution");
}

double draw_error(ErrDist d, double scale, CounterRng& rng) {
  if (scale == 0.0) return 0.0;
  switch (d) {
    case ErrDist::normal: return scale * rng.normal();
    case ErrDist::t_2_5: return scale * rng.student_t(2.5);
    case ErrDist::cauchy: return rng.cauchy(scale);
    case ErrDist::laplace: return rng.laplace(scale);
  }
  throw DomainError("draw_error: invalid distribution");
}

double median_of(std::vector<double>& v) {
  return quantile_type7(std::span<const double>(v.data(), v.size()), 0.5);
}

double iqr_of(std::vector<double>& v) {
  return quantile_type7(std::span<const double>(v.data(), v.size()), 0.75) -
         quantile_type7(std::span<const double>(v.data(), v.size()), 0.25);
}

}  // namespace

XDist parse_x_dist(const std::string& name) {
  if (name == "half_normal") return XDist::half_normal;
  if (name == "exp1" || name == "exponential1") return XDist::exponential1;
  if (name == "bimodal") return XDist::bimodal;
  throw ConfigError("unknown x distribution '" + name + "'");
}

ErrDist parse_err_dist(const std::string& name) {
  if (name == "normal") return ErrDist::normal;
  if (name == "t" || name == "t2.5") return ErrDist::t_2_5;
  if (name == "cauchy") return ErrDist::cauchy;
  if (name == "laplace") return ErrDist::laplace;
  throw ConfigError("unknown error distribution '" + name + "'");
}

std::string x_dist_name(XDist d) {
  switch (d) {
    case XDist::half_normal: return "half_normal";
    case XDist::exponential1: return "exp1";
    case XDist::bimodal: return "bimodal";
  }
  throw DomainError("x_dist_name: invalid distribution");
}

std::string err_dist_name(ErrDist d) {
  switch (d) {
    case ErrDist::normal: return "normal";
    case ErrDist::t_2_5: return "t";
    case ErrDist::cauchy: return "cauchy";
    case ErrDist::laplace: return "laplace";
  }
  throw DomainError("err_dist_name: invalid distribution");
}

double x_variance(XDist d) {
  switch (d) {
    case XDist::half_normal: return 1.0 - 2.0 / M_PI;
    case XDist::exponential1: return 1.0;
    case XDist::bimodal:
      // 0.5 * 1 + 0.5 * 0.36 + 0.5 * (5 - 3.75)^2 + 0.5 * (2.5 - 3.75)^2
      return 0.5 * 1.0 + 0.5 * 0.36 + 1.5625;
  }
  throw DomainError("x_variance: invalid distribution");
}

ErrorScales calibrate_errors(XDist x_dist, ErrDist err_dist, double beta_w,
                             double p_W, double p_Y) {
  if (p_W < 0.0 || p_Y < 0.0) {
    throw DomainError("calibrate_errors: noise-to-signal ratios must be >= 0");
  }
  const double s2x = x_variance(x_dist);
  const double sigma_U = std::sqrt(p_W * s2x);
  const double sigma_eps = std::sqrt(p_Y) * std::abs(beta_w) * std::sqrt(s2x);

  const auto to_scale = [&](double sigma) {
    switch (err_dist) {
      case ErrDist::normal: return sigma;
      case ErrDist::t_2_5: return sigma / std::sqrt(5.0);
      case ErrDist::cauchy: return sigma / 2.0;
      case ErrDist::laplace: return sigma / std::sqrt(2.0);
    }
    throw DomainError("calibrate_errors: invalid error distribution");
  };
  return {to_scale(sigma_U), to_scale(sigma_eps)};
}

ScenarioConfig::ScenarioConfig() {
  truth.b0 = 1.0;
  truth.b1 = Eigen::VectorXd::Constant(1, 3.0);
  truth.b2 = Eigen::VectorXd(0);
}

RegressionData generate(const ScenarioConfig& config, int replicate_index) {
  if (config.n < 1) throw ConfigError("generate: n must be >= 1");
  if (replicate_index < 0) throw ConfigError("generate: negative replicate index");
  if (config.truth.b1.size() != 1) {
    throw ConfigError("generate: exactly one contaminated regressor is supported");
  }
  const bool bivariate = config.correlated_z;
  if (bivariate && config.truth.b2.size() != 1) {
    throw ConfigError("generate: bivariate mode requires one clean-regressor slope");
  }
  if (!bivariate && config.truth.b2.size() != 0) {
    throw ConfigError("generate: clean-regressor slope set without correlated_z");
  }
  if (bivariate && !(config.err_dist == ErrDist::normal || config.err_dist == ErrDist::laplace)) {
    throw ConfigError("generate: bivariate mode supports normal and laplace errors only");
  }
  if (bivariate && !(config.rho > -1.0 && config.rho < 1.0)) {
    throw ConfigError("generate: copula correlation must lie in (-1, 1)");
  }

  const ErrorScales scales = calibrate_errors(config.x_dist, config.err_dist,
                                              config.truth.b1(0), config.p_W, config.p_Y);
  CounterRng rng(config.seed, static_cast<std::uint64_t>(replicate_index));

  RegressionData data;
  data.W.resize(config.n, 1);
  data.Z.resize(config.n, bivariate ? 1 : 0);
  data.y.resize(config.n);
  const double root = std::sqrt(1.0 - config.rho * config.rho);
  for (int i = 0; i < config.n; ++i) {
    double x, z = 0.0;
    if (bivariate) {
      const double g1 = rng.normal();
      const double g2 = config.rho * g1 + root * rng.normal();
      x = x_quantile(config.x_dist, normal_cdf(g1));
      z = x_quantile(config.x_dist, normal_cdf(g2));
    } else {
      x = draw_x(config.x_dist, rng);
    }
    const double u = draw_error(config.err_dist, scales.scale_U, rng);
    const double eps = draw_error(config.err_dist, scales.scale_eps, rng);
    data.W(i, 0) = x + u;
    data.y(i) = config.truth.b0 + config.truth.b1(0) * x + eps;
    if (bivariate) {
      data.Z(i, 0) = z;
      data.y(i) += config.truth.b2(0) * z;
    }
  }
  return data;
}

ScenarioReport run_scenario(const ScenarioConfig& config,
                            const std::vector<FitMethod>& methods,
                            std::optional<FitMethod> reference, int n_threads) {
  if (methods.empty()) throw ConfigError("run_scenario: no methods requested");
  if (config.replicates < 1) throw ConfigError("run_scenario: replicates must be >= 1");
  const bool bivariate = config.correlated_z;
  for (FitMethod m : methods) {
    if (bivariate && (m == FitMethod::gmm || m == FitMethod::disattenuated)) {
      throw ConfigError("run_scenario: " + method_name(m) + " is univariate only");
    }
    if (m == FitMethod::disattenuated && config.err_dist == ErrDist::cauchy) {
      throw ConfigError(
          "run_scenario: disattenuation needs a finite contamination variance; "
          "none exists under cauchy errors");
    }
  }

  FitMethod ref;
  if (reference) {
    if (std::find(methods.begin(), methods.end(), *reference) == methods.end()) {
      throw ConfigError("run_scenario: reference method not in the requested set");
    }
    ref = *reference;
  } else if (std::find(methods.begin(), methods.end(), FitMethod::disattenuated) !=
             methods.end()) {
    ref = FitMethod::disattenuated;
  } else if (std::find(methods.begin(), methods.end(), FitMethod::naive) != methods.end()) {
    ref = FitMethod::naive;
  } else {
    ref = methods.front();
  }

  const double s2x = x_variance(config.x_dist);
  const double s2u = config.p_W * s2x;  // truth-calibrated disattenuation inputs
  const Eigen::Index n_coef = config.truth.dim();
  const Eigen::VectorXd truth_flat = config.truth.flat();

  // errors[m][r]: scaled squared error vector for replicate r, or empty on failure.
  std::vector<std::vector<std::optional<Eigen::VectorXd>>> errors(
      methods.size(),
      std::vector<std::optional<Eigen::VectorXd>>(config.replicates));

  parallel_for(config.replicates, n_threads, [&](int r) {
    const RegressionData data = generate(config, r);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      try {
        FitResult fit;
        switch (methods[m]) {
          case FitMethod::phase: {
            FitOptions opt = config.fit_options;
            opt.seed = derive_seed(config.seed, 0x70686173, r);
            fit = fit_phase(data, opt);
            break;
          }
          case FitMethod::naive:
            fit = fit_naive(data);
            break;
          case FitMethod::disattenuated:
            fit = fit_disattenuated(data, s2u, s2x);
            break;
          case FitMethod::gmm: {
            GmmOptions opt = config.gmm_options;
            opt.seed = derive_seed(config.seed, 0x676d6d, r);
            fit = fit_gmm(data, 3, opt).fit;
            break;
          }
        }
        const Eigen::VectorXd diff = fit.coef.flat() - truth_flat;
        errors[m][r] = (static_cast<double>(config.n) * diff.array().square()).matrix().eval();
      } catch (const std::exception&) {
        errors[m][r] = std::nullopt;
      }
    }
  });

  ScenarioReport report;
  report.config = config;
  report.reference = ref;

  // Two passes: reference first so ratios can be filled in.
  std::vector<double> ref_median(n_coef, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    if (methods[m] != ref) continue;
    for (Eigen::Index jcoef = 0; jcoef < n_coef; ++jcoef) {
      std::vector<double> vals;
      for (const auto& e : errors[m]) {
        if (e) vals.push_back((*e)(jcoef));
      }
      if (!vals.empty()) ref_median[jcoef] = median_of(vals);
    }
  }

  for (std::size_t m = 0; m < methods.size(); ++m) {
    MethodReport mr;
    mr.coef.resize(n_coef);
    for (const auto& e : errors[m]) {
      if (e) ++mr.successes; else ++mr.failures;
    }
    mr.all_failed = mr.successes == 0;
    for (Eigen::Index jcoef = 0; jcoef < n_coef && !mr.all_failed; ++jcoef) {
      std::vector<double> vals;
      for (const auto& e : errors[m]) {
        if (e) vals.push_back((*e)(jcoef));
      }
      mr.coef[jcoef].median_scaled_se = median_of(vals);
      mr.coef[jcoef].iqr_scaled_se = iqr_of(vals);
      if (std::isfinite(ref_median[jcoef]) && ref_median[jcoef] > 0.0) {
        mr.coef[jcoef].ratio_vs_reference =
            mr.coef[jcoef].median_scaled_se / ref_median[jcoef];
      }
    }
    report.methods.emplace_back(methods[m], std::move(mr));
  }
  return report;
}

namespace {

nlohmann::json report_row(const ScenarioReport& rep, const FitMethod method,
                          const MethodReport& mr, Eigen::Index jcoef) {
  nlohmann::json row;
  row["scenario"] = rep.config.id;
  row["method"] = method_name(method);
  row["coefficient"] = jcoef;
  row["n"] = rep.config.n;
  row["replicates"] = rep.config.replicates;
  row["successes"] = mr.successes;
  row["failures"] = mr.failures;
  if (!mr.all_failed) {
    row["median_scaled_se"] = mr.coef[jcoef].median_scaled_se;
    row["iqr_scaled_se"] = mr.coef[jcoef].iqr_scaled_se;
    if (mr.coef[jcoef].ratio_vs_reference) {
      row["ratio_vs_reference"] = *mr.coef[jcoef].ratio_vs_reference;
    }
  }
  row["reference"] = method_name(rep.reference);
  return row;
}

}  // namespace

void write_report_csv(const std::vector<ScenarioReport>& reports, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("write_report_csv: cannot open " + path);
  out << "scenario,method,coefficient,n,replicates,successes,failures,"
         "median_scaled_se,iqr_scaled_se,ratio_vs_reference,reference\n";
  char buf[64];
  const auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& rep : reports) {
    for (const auto& [method, mr] : rep.methods) {
      for (Eigen::Index jcoef = 0; jcoef < static_cast<Eigen::Index>(mr.coef.size());
           ++jcoef) {
        out << rep.config.id << ',' << method_name(method) << ',' << jcoef << ','
            << rep.config.n << ',' << rep.config.replicates << ',' << mr.successes << ','
            << mr.failures << ',';
        if (mr.all_failed) {
          out << ",,";
        } else {
          out << fmt(mr.coef[jcoef].median_scaled_se) << ','
              << fmt(mr.coef[jcoef].iqr_scaled_se) << ',';
          if (mr.coef[jcoef].ratio_vs_reference) {
            out << fmt(*mr.coef[jcoef].ratio_vs_reference);
          }
        }
        out << ',' << method_name(rep.reference) << '\n';
      }
    }
  }
}

void write_report_json(const std::vector<ScenarioReport>& reports, const std::string& path) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& rep : reports) {
    for (const auto& [method, mr] : rep.methods) {
      for (Eigen::Index jcoef = 0; jcoef < static_cast<Eigen::Index>(mr.coef.size());
           ++jcoef) {
        rows.push_back(report_row(rep, method, mr, jcoef));
      }
    }
  }
  std::ofstream out(path);
  if (!out) throw DataError("write_report_json: cannot open " + path);
  out << rows.dump(2) << '\n';
}

std::vector<ScenarioFileEntry> load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_scenario_file: cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("load_scenario_file: " + path + ": " + e.what());
  }
  if (doc.is_object()) doc = nlohmann::json::array({doc});
  if (!doc.is_array()) {
    throw ParseError("load_scenario_file: expected an object or array of objects");
  }

  std::vector<ScenarioFileEntry> entries;
  for (const auto& item : doc) {
    ScenarioFileEntry e;
    ScenarioConfig& c = e.config;
    try {
      c.id = item.value("id", c.id);
      if (item.contains("x-dist")) c.x_dist = parse_x_dist(item["x-dist"]);
      if (item.contains("err-dist")) c.err_dist = parse_err_dist(item["err-dist"]);
      c.n = item.value("n", c.n);
      c.p_W = item.value("p-w", c.p_W);
      c.p_Y = item.value("p-y", c.p_Y);
      c.replicates = item.value("replicates", c.replicates);
      c.seed = item.value("seed", static_cast<std::uint64_t>(c.seed));
      c.correlated_z = item.value("correlated-z", c.correlated_z);
      c.rho = item.value("rho", c.rho);
      if (item.contains("truth")) {
        const auto& t = item["truth"];
        c.truth.b0 = t.value("b0", 0.0);
        const auto b1 = t.value("b1", std::vector<double>{});
        const auto b2 = t.value("b2", std::vector<double>{});
        c.truth.b1 = Eigen::Map<const Eigen::VectorXd>(b1.data(), b1.size());
        c.truth.b2 = Eigen::Map<const Eigen::VectorXd>(b2.data(), b2.size());
      } else if (c.correlated_z) {
        c.truth.b0 = 0.0;
        c.truth.b1 = Eigen::VectorXd::Constant(1, 3.0);
        c.truth.b2 = Eigen::VectorXd::Constant(1, 2.0);
      }
      if (item.contains("kernel")) {
        c.fit_options.kernel = parse_kernel(item["kernel"].get<std::string>());
      }
      if (item.contains("n-nodes")) c.fit_options.n_nodes = item["n-nodes"];
      if (item.contains("rule")) {
        const std::string rule = item["rule"].get<std::string>();
        if (rule == "gl" || rule == "gauss_legendre") {
          c.fit_options.rule = QuadratureRule::gauss_legendre;
        } else if (rule == "uniform" || rule == "uniform_midpoint") {
          c.fit_options.rule = QuadratureRule::uniform_midpoint;
        } else {
          throw ConfigError("unknown quadrature rule '" + rule + "'");
        }
      }
      if (item.contains("n-starts")) c.fit_options.n_starts = item["n-starts"];
      if (item.contains("methods")) {
        for (const auto& entry : item["methods"]) {
          const std::string name = entry.get<std::string>();
          if (name == "phase") e.methods.push_back(FitMethod::phase);
          else if (name == "naive") e.methods.push_back(FitMethod::naive);
          else if (name == "disattenuated") e.methods.push_back(FitMethod::disattenuated);
          else if (name == "gmm") e.methods.push_back(FitMethod::gmm);
          else throw ConfigError("unknown method '" + name + "'");
        }
      }
      if (e.methods.empty()) {
        e.methods = {FitMethod::phase, FitMethod::naive};
      }
      if (item.contains("reference")) {
        const std::string name = item["reference"].get<std::string>();
        if (name == "phase") e.reference = FitMethod::phase;
        else if (name == "naive") e.reference = FitMethod::naive;
        else if (name == "disattenuated") e.reference = FitMethod::disattenuated;
        else if (name == "gmm") e.reference = FitMethod::gmm;
        else throw ConfigError("unknown reference method '" + name + "'");
      }
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError("load_scenario_file: " + path + ": " + ex.what());
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace phasereg
