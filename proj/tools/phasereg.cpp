#include <CLI11.hpp>
#include <string>

#include "phasereg/pipeline.hpp"

namespace {

void add_data_options(CLI::App* cmd, phasereg::RunConfig& config, std::string& delim) {
  cmd->add_option("--input", config.input, "Input CSV path (headered)")->required();
  cmd->add_option("--y-col", config.y_col, "Response column name");
  cmd->add_option("--w-cols", config.w_cols, "Error-contaminated regressor columns")
      ->delimiter(',');
  cmd->add_option("--z-cols", config.z_cols, "Error-free regressor columns")->delimiter(',');
  cmd->add_option("--hour-col", config.hour_col,
                  "Hour-of-day column (integers 1..24); enables hourly de-trending");
  cmd->add_option("--missing-sentinel", config.missing_sentinel,
                  "Cell value treated as missing")->capture_default_str();
  cmd->add_option("--w-divisor", config.w_divisor,
                  "Divide the W columns by this constant before fitting")
      ->capture_default_str();
  cmd->add_option("--delimiter", delim, "Field delimiter")->capture_default_str();
  cmd->add_flag("--decimal-comma", config.decimal_comma,
                "Accept decimal commas (2,5 means 2.5)");
}

void add_fit_options(CLI::App* cmd, phasereg::RunConfig& config) {
  cmd->add_option("--kernel", config.kernel, "Frequency weight kernel: k1 | k2 | k3")
      ->capture_default_str();
  cmd->add_option("--tstar-step", config.tstar_step,
                  "Grid spacing of the truncation-frequency scan (0: automatic)");
  cmd->add_option("--tstar-max", config.tstar_max,
                  "Ceiling of the truncation-frequency scan (0: automatic)");
  cmd->add_flag("--no-intercept", config.no_intercept, "Pin the intercept at 0");
  cmd->add_option("--seed", config.seed, "Random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regression with error-contaminated predictors via the "
               "phase function of the empirical characteristic function"};
  app.require_subcommand(1);

  phasereg::RunConfig config;
  std::string delim = ",";

  CLI::App* fit = app.add_subcommand("fit", "Point estimation");
  add_data_options(fit, config, delim);
  add_fit_options(fit, config);
  fit->add_option("--output", config.output, "Write the JSON record here (default stdout)");
  fit->add_option("--method", config.method, "phase | naive")->capture_default_str();

  CLI::App* boot = app.add_subcommand("bootstrap", "Point estimation plus bootstrap covariance");
  add_data_options(boot, config, delim);
  add_fit_options(boot, config);
  boot->add_option("--output", config.output, "Write the JSON record here (default stdout)");
  boot->add_option("--bootstrap", config.bootstrap_mode, "full | plugin")
      ->capture_default_str();
  boot->add_option("--B", config.B, "Bootstrap replicates")->capture_default_str();
  boot->add_option("--block-length", config.block_length,
                   "Moving-block length (0: iid resampling)")
      ->capture_default_str();
  boot->add_option("--threads", config.threads, "Worker threads (0: hardware)")
      ->capture_default_str();

  CLI::App* gmm = app.add_subcommand("gmm", "Moment-based comparator fit");
  add_data_options(gmm, config, delim);
  gmm->add_option("--output", config.output, "Write the JSON record here (default stdout)");
  gmm->add_option("--seed", config.seed, "Random seed")->capture_default_str();

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo scenario runner");
  sim->add_option("--scenario-file", config.scenario_file, "JSON scenario list")->required();
  sim->add_option("--output", config.output, "Report path; writes <output>.csv and .json")
      ->required();
  sim->add_option("--replicates", config.replicates,
                  "Override the replicate count of every scenario");
  sim->add_option("--seed", config.seed, "Override the seed of every scenario");
  sim->add_option("--threads", config.threads, "Worker threads (0: hardware)")
      ->capture_default_str();

  CLI::App* det = app.add_subcommand("detrend", "Write the hourly de-trended CSV");
  add_data_options(det, config, delim);
  det->add_option("--output", config.output, "Transformed CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  if (!delim.empty()) config.delimiter = delim[0];
  if (app.got_subcommand(fit)) config.subcommand = phasereg::Subcommand::fit;
  if (app.got_subcommand(boot)) config.subcommand = phasereg::Subcommand::bootstrap;
  if (app.got_subcommand(gmm)) config.subcommand = phasereg::Subcommand::gmm;
  if (app.got_subcommand(sim)) config.subcommand = phasereg::Subcommand::simulate;
  if (app.got_subcommand(det)) config.subcommand = phasereg::Subcommand::detrend;

  return phasereg::run(config);
}
