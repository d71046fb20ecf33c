#include "phasereg/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include "phasereg/errors.hpp"
#include "phasereg/fit.hpp"
#include "phasereg/gmm.hpp"
#include "phasereg/inference.hpp"
#include "phasereg/kernels.hpp"
#include "phasereg/simulation.hpp"

namespace phasereg {

namespace {

std::vector<std::string> role_columns(const RunConfig& config) {
  if (config.y_col.empty()) throw ConfigError("no response column configured (--y-col)");
  if (config.w_cols.empty()) {
    throw ConfigError("no contaminated regressor columns configured (--w-cols)");
  }
  std::vector<std::string> roles{config.y_col};
  roles.insert(roles.end(), config.w_cols.begin(), config.w_cols.end());
  roles.insert(roles.end(), config.z_cols.begin(), config.z_cols.end());
  if (!config.hour_col.empty()) roles.push_back(config.hour_col);
  return roles;
}

nlohmann::json coefficients_json(const CoefficientVector& coef) {
  nlohmann::json j;
  j["b0"] = coef.b0;
  j["b1"] = std::vector<double>(coef.b1.data(), coef.b1.data() + coef.b1.size());
  j["b2"] = std::vector<double>(coef.b2.data(), coef.b2.data() + coef.b2.size());
  return j;
}

nlohmann::json fit_json(const FitResult& fit, const RunConfig& config,
                        const nlohmann::json& input_summary) {
  nlohmann::json j;
  j["method"] = method_name(fit.method);
  j["coefficients"] = coefficients_json(fit.coef);
  j["objective"] = fit.objective;
  j["converged"] = fit.converged;
  j["starts_tried"] = fit.starts_tried;
  if (fit.t_star) j["t_star"] = *fit.t_star;
  j["no_intercept"] = config.no_intercept;
  j["columns"] = {{"y", config.y_col}, {"w", config.w_cols}, {"z", config.z_cols}};
  j["input"] = input_summary;
  return j;
}

FitOptions fit_options_from(const RunConfig& config) {
  FitOptions opt;
  opt.kernel = parse_kernel(config.kernel);
  opt.tstar_scan.step = config.tstar_step;
  opt.tstar_scan.t_max = config.tstar_max;
  opt.pin_intercept = config.no_intercept;
  opt.seed = config.seed;
  return opt;
}

FitResult dispatch_fit(const RegressionData& data, const RunConfig& config) {
  if (config.method == "naive") return fit_naive(data, !config.no_intercept);
  if (config.method == "phase") return fit_phase(data, fit_options_from(config));
  throw ConfigError("unknown fit method '" + config.method + "' (phase | naive)");
}

std::vector<std::string> parameter_names(const RunConfig& config) {
  std::vector<std::string> names{"b0"};
  names.insert(names.end(), config.w_cols.begin(), config.w_cols.end());
  names.insert(names.end(), config.z_cols.begin(), config.z_cols.end());
  return names;
}

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const DataError*>(&e)) return "data";
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const UnsupportedError*>(&e)) return "unsupported";
  if (dynamic_cast<const ResourceError*>(&e)) return "resource";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const TStarSelectionError*>(&e)) return "tstar_selection";
  if (dynamic_cast<const DegenerateFrequencyError*>(&e)) return "degenerate_frequency";
  if (dynamic_cast<const NumericalError*>(&e)) return "numerical";
  if (dynamic_cast<const NonConvergenceError*>(&e)) return "nonconvergence";
  if (dynamic_cast<const InferenceFailure*>(&e)) return "inference";
  return "error";
}

const char* subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::fit: return "fit";
    case Subcommand::bootstrap: return "bootstrap";
    case Subcommand::gmm: return "gmm";
    case Subcommand::simulate: return "simulate";
    case Subcommand::detrend: return "detrend";
  }
  return "unknown";
}

}  // namespace

PreparedData prepare(const RunConfig& config) {
  if (config.input.empty()) throw ConfigError("no input file configured (--input)");
  if (!(config.w_divisor > 0.0)) throw ConfigError("w-divisor must be > 0");

  const CsvOptions csv{config.delimiter, config.missing_sentinel, config.decimal_comma};
  Dataset raw = load_csv(config.input, csv);

  nlohmann::json summary;
  summary["path"] = config.input;
  summary["missing_sentinel"] = config.missing_sentinel;
  summary["rows_loaded"] = raw.n_rows();
  const auto roles = role_columns(config);
  nlohmann::json missing;
  for (const auto& name : roles) missing[name] = raw.missing_count(name);
  summary["missing_by_column"] = missing;

  if (config.w_divisor != 1.0) {
    for (const auto& name : config.w_cols) {
      for (double& v : raw.column(name)) v /= config.w_divisor;
    }
    summary["w_divisor"] = config.w_divisor;
  }

  Dataset ds = complete_cases(raw, roles);
  summary["rows_complete"] = ds.n_rows();

  if (!config.hour_col.empty()) {
    bind_hour_index(ds, config.hour_col);
    for (const auto& name : roles) {
      if (name == config.hour_col) continue;
      ds.column(name) = detrend_hourly(ds, name);
    }
    summary["detrended"] = true;
  }

  const Eigen::Index n = static_cast<Eigen::Index>(ds.n_rows());
  RegressionData data;
  data.W.resize(n, static_cast<Eigen::Index>(config.w_cols.size()));
  data.Z.resize(n, static_cast<Eigen::Index>(config.z_cols.size()));
  for (std::size_t j = 0; j < config.w_cols.size(); ++j) {
    const auto& col = ds.column(config.w_cols[j]);
    data.W.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Eigen::VectorXd>(col.data(), n);
  }
  for (std::size_t j = 0; j < config.z_cols.size(); ++j) {
    const auto& col = ds.column(config.z_cols[j]);
    data.Z.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Eigen::VectorXd>(col.data(), n);
  }
  const auto& ycol = ds.column(config.y_col);
  data.y = Eigen::Map<const Eigen::VectorXd>(ycol.data(), n);
  data.validate();
  return {std::move(data), std::move(summary)};
}

nlohmann::json run_fit(const RunConfig& config) {
  PreparedData prep = prepare(config);
  return fit_json(dispatch_fit(prep.data, config), config, prep.summary);
}

nlohmann::json run_bootstrap(const RunConfig& config) {
  PreparedData prep = prepare(config);
  const FitOptions options = fit_options_from(config);
  const FitResult fitted = fit_phase(prep.data, options);

  BootstrapConfig boot;
  boot.B = config.B;
  boot.seed = config.seed;
  boot.n_threads = config.threads;
  if (config.block_length > 0) {
    boot.mode = ResampleMode::block;
    boot.block_length = config.block_length;
  }

  CovarianceEstimate cov;
  std::vector<std::string> names = parameter_names(config);
  if (config.bootstrap_mode == "full") {
    // Refits restart the multi-start engine from the original estimates.
    FitOptions refit = options;
    refit.start = fitted.coef;
    cov = full_bootstrap(
        prep.data, [&](const RegressionData& d) { return fit_phase(d, refit); }, boot);
  } else if (config.bootstrap_mode == "plugin") {
    cov = plugin_bootstrap(prep.data, fitted, options, boot);
    if (config.no_intercept) names.erase(names.begin());
  } else {
    throw ConfigError("unknown bootstrap mode '" + config.bootstrap_mode +
                      "' (full | plugin)");
  }

  nlohmann::json j = fit_json(fitted, config, prep.summary);
  nlohmann::json c;
  c["method"] = cov.method == CovMethod::full_bootstrap ? "full" : "plugin";
  c["B"] = config.B;
  c["B_used"] = cov.B_used;
  c["resampling"] = config.block_length > 0 ? "block" : "iid";
  if (config.block_length > 0) c["block_length"] = config.block_length;
  c["parameter_names"] = names;
  std::vector<std::vector<double>> matrix(cov.matrix.rows());
  std::vector<double> se(cov.matrix.rows());
  for (Eigen::Index i = 0; i < cov.matrix.rows(); ++i) {
    matrix[i].assign(cov.matrix.row(i).begin(), cov.matrix.row(i).end());
    se[i] = std::sqrt(std::max(0.0, cov.matrix(i, i)));
  }
  c["matrix"] = matrix;
  c["standard_errors"] = se;
  j["covariance"] = c;
  return j;
}

nlohmann::json run_gmm(const RunConfig& config) {
  PreparedData prep = prepare(config);
  GmmOptions options;
  options.seed = config.seed;
  const GmmFit res = fit_gmm(prep.data, 3, options);

  nlohmann::json j;
  j["method"] = "gmm";
  j["theta"] = {{"mu_X", res.theta.mu_X},         {"beta0", res.theta.beta0},
                {"beta1", res.theta.beta1},       {"sigma2_X", res.theta.sigma2_X},
                {"sigma2_U", res.theta.sigma2_U}, {"sigma2_eps", res.theta.sigma2_eps},
                {"mu_X3", res.theta.mu_X3}};
  j["coefficients"] = coefficients_json(res.fit.coef);
  j["objective"] = res.objective;
  j["converged"] = res.converged;
  j["starts_tried"] = res.starts_tried;
  j["columns"] = {{"y", config.y_col}, {"w", config.w_cols}, {"z", config.z_cols}};
  j["input"] = prep.summary;
  return j;
}

nlohmann::json run_simulate(const RunConfig& config) {
  if (config.scenario_file.empty()) {
    throw ConfigError("simulate needs a scenario file (--scenario-file)");
  }
  if (config.output.empty()) throw ConfigError("simulate needs an output path (--output)");

  std::vector<ScenarioReport> reports;
  for (ScenarioFileEntry& entry : load_scenario_file(config.scenario_file)) {
    if (config.replicates > 0) entry.config.replicates = config.replicates;
    if (config.seed != 0) entry.config.seed = config.seed;
    reports.push_back(
        run_scenario(entry.config, entry.methods, entry.reference, config.threads));
  }

  std::string csv_path = config.output;
  std::string json_path = config.output;
  if (csv_path.size() > 4 && csv_path.substr(csv_path.size() - 4) == ".csv") {
    json_path = csv_path.substr(0, csv_path.size() - 4) + ".json";
  } else {
    csv_path += ".csv";
    json_path += ".json";
  }
  write_report_csv(reports, csv_path);
  write_report_json(reports, json_path);

  nlohmann::json j;
  j["scenarios"] = reports.size();
  j["csv"] = csv_path;
  j["json"] = json_path;
  return j;
}

nlohmann::json run_detrend(const RunConfig& config) {
  if (config.input.empty()) throw ConfigError("no input file configured (--input)");
  if (config.output.empty()) throw ConfigError("detrend needs an output path (--output)");
  if (config.hour_col.empty()) throw ConfigError("detrend needs an hour column (--hour-col)");

  const CsvOptions csv{config.delimiter, config.missing_sentinel, config.decimal_comma};
  const Dataset raw = load_csv(config.input, csv);
  const auto roles = role_columns(config);
  Dataset ds = complete_cases(raw, roles);
  bind_hour_index(ds, config.hour_col);
  for (const auto& name : roles) {
    if (name == config.hour_col) continue;
    ds.column(name) = detrend_hourly(ds, name);
  }
  write_csv(ds, config.output, config.missing_sentinel);

  std::vector<std::string> detrended;
  for (const auto& name : roles) {
    if (name != config.hour_col) detrended.push_back(name);
  }
  nlohmann::json j;
  j["rows_loaded"] = raw.n_rows();
  j["rows_written"] = ds.n_rows();
  j["detrended_columns"] = detrended;
  j["output"] = config.output;
  return j;
}

int run(const RunConfig& config) {
  try {
    nlohmann::json artifact;
    switch (config.subcommand) {
      case Subcommand::fit: artifact = run_fit(config); break;
      case Subcommand::bootstrap: artifact = run_bootstrap(config); break;
      case Subcommand::gmm: artifact = run_gmm(config); break;
      case Subcommand::simulate: artifact = run_simulate(config); break;
      case Subcommand::detrend: artifact = run_detrend(config); break;
    }
    // simulate/detrend already wrote their files; their artifact is a summary.
    const bool artifact_is_file = config.subcommand == Subcommand::simulate ||
                                  config.subcommand == Subcommand::detrend;
    if (!artifact_is_file && !config.output.empty()) {
      std::ofstream out(config.output);
      if (!out) throw DataError("cannot open output file " + config.output);
      out << artifact.dump(2) << '\n';
    } else {
      std::cout << artifact.dump(2) << std::endl;
    }
    return 0;
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = {{"kind", error_kind(e)},
                    {"subcommand", subcommand_name(config.subcommand)},
                    {"message", e.what()}};
    std::cerr << err.dump(2) << std::endl;
    return 1;
  }
}

}  // namespace phasereg
