#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "phasereg/dataset.hpp"
#include "phasereg/types.hpp"

namespace phasereg {

enum class Subcommand { fit, bootstrap, gmm, simulate, detrend };

// One bag of settings for every subcommand; each reads the fields it needs.
struct RunConfig {
  Subcommand subcommand = Subcommand::fit;
  std::string input;
  std::string output;

  // Column roles.
  std::string y_col;
  std::vector<std::string> w_cols;
  std::vector<std::string> z_cols;
  std::string hour_col;  // empty: no de-trending

  // Estimation settings.
  std::string method = "phase";  // fit subcommand: phase | naive
  std::string kernel = "k1";
  double tstar_step = 0.0;  // 0: module default
  double tstar_max = 0.0;   // 0: module default
  bool no_intercept = false;

  // Inference settings.
  std::string bootstrap_mode = "full";  // full | plugin
  int B = 500;
  int block_length = 0;  // 0: iid resampling, > 0: moving blocks
  std::uint64_t seed = 0;

  // Ingestion settings.
  double missing_sentinel = -200.0;
  double w_divisor = 1.0;
  char delimiter = ',';
  bool decimal_comma = false;

  // Simulation settings.
  std::string scenario_file;
  int replicates = 0;  // > 0 overrides the per-scenario replicate count

  int threads = 0;  // 0: hardware concurrency
};

// Shared front of the fit/bootstrap/gmm pipelines: load, scale W by the
// divisor, drop incomplete rows, de-trend every role column per hour class
// when an hour column is given, and assemble the regression sample. The
// summary records the sentinel, per-column missing counts, and row counts.
struct PreparedData {
  RegressionData data;
  nlohmann::json summary;
};

PreparedData prepare(const RunConfig& config);

// Subcommand bodies; each returns the artifact it would write. Exceptions
// propagate to the caller.
nlohmann::json run_fit(const RunConfig& config);
nlohmann::json run_bootstrap(const RunConfig& config);
nlohmann::json run_gmm(const RunConfig& config);
nlohmann::json run_simulate(const RunConfig& config);
nlohmann::json run_detrend(const RunConfig& config);

// Dispatches, writes the artifact to config.output (or stdout when empty),
// and maps exceptions onto a structured stderr record and a nonzero exit.
int run(const RunConfig& config);

}  // namespace phasereg
