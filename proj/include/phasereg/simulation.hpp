#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phasereg/fit.hpp"
#include "phasereg/gmm.hpp"
#include "phasereg/types.hpp"

namespace phasereg {

enum class XDist { half_normal, exponential1, bimodal };
enum class ErrDist { normal, t_2_5, cauchy, laplace };

XDist parse_x_dist(const std::string& name);     // half_normal | exp1 | bimodal
ErrDist parse_err_dist(const std::string& name); // normal | t | cauchy | laplace
std::string x_dist_name(XDist d);
std::string err_dist_name(ErrDist d);

// Population variance of the latent regressor distribution:
//   half_normal  1 - 2/pi
//   exp(1)       1
//   bimodal      0.5 N(5, 1) + 0.5 N(2.5, 0.6^2) mixture: 2.2425
double x_variance(XDist d);

// Distribution-specific scale parameters hitting the noise-to-signal targets
//   sigma2_U = p_W * sigma2_X,  sigma2_eps = p_Y * (beta_w * sigma_X)^2:
//   normal   scale = sigma (standard deviation)
//   t(2.5)   scale s with s^2 * 2.5/0.5 = sigma^2, i.e. s = sigma / sqrt(5)
//   cauchy   scale gamma = sigma / 2 (interquartile range made equal to sigma)
//   laplace  scale b with 2 b^2 = sigma^2
struct ErrorScales {
  double scale_U = 0.0;
  double scale_eps = 0.0;
};

ErrorScales calibrate_errors(XDist x_dist, ErrDist err_dist, double beta_w,
                             double p_W, double p_Y);

struct ScenarioConfig {
  std::string id = "scenario";
  XDist x_dist = XDist::half_normal;
  ErrDist err_dist = ErrDist::normal;
  int n = 500;
  double p_W = 0.25;
  double p_Y = 0.40;
  CoefficientVector truth;     // defaults to b0 = 1, b1 = (3) univariate
  bool correlated_z = false;   // add one clean regressor, same marginal as X
  double rho = 0.5;            // normal-copula correlation in bivariate mode
  int replicates = 500;
  std::uint64_t seed = 0;

  FitOptions fit_options{};    // phase-fit settings (seed is derived per replicate)
  GmmOptions gmm_options{};

  ScenarioConfig();
};

// Replicate `replicate_index` of the scenario, from its own counter-based
// stream. Per observation the draw order is X (then Z in bivariate mode),
// U, epsilon; bivariate mode draws (X, Z) through a normal copula with the
// configured marginal for both and contaminates only X. Bivariate error
// distributions are restricted to normal and laplace.
RegressionData generate(const ScenarioConfig& config, int replicate_index);

struct MethodColumnStats {
  double median_scaled_se = 0.0;  // median over replicates of n (bhat_j - b_j)^2
  double iqr_scaled_se = 0.0;
  std::optional<double> ratio_vs_reference;  // medians, per coefficient
};

struct MethodReport {
  std::vector<MethodColumnStats> coef;  // flat order [b0, b1..., b2...]
  int successes = 0;
  int failures = 0;
  bool all_failed = false;
};

struct ScenarioReport {
  ScenarioConfig config;
  std::vector<std::pair<FitMethod, MethodReport>> methods;
  FitMethod reference = FitMethod::naive;
};

// Monte Carlo run over config.replicates independent datasets, fitting every
// requested method on each. Replicates whose fit throws count as failures for
// that method only. The reference for ratios defaults to disattenuated when
// requested, else naive, else the first requested method.
ScenarioReport run_scenario(const ScenarioConfig& config,
                            const std::vector<FitMethod>& methods,
                            std::optional<FitMethod> reference = std::nullopt,
                            int n_threads = 0);

// Report emission, one row per (scenario id, method, coefficient).
void write_report_csv(const std::vector<ScenarioReport>& reports, const std::string& path);
void write_report_json(const std::vector<ScenarioReport>& reports, const std::string& path);

struct ScenarioFileEntry {
  ScenarioConfig config;
  std::vector<FitMethod> methods;
  std::optional<FitMethod> reference;
};

// JSON scenario file: one object or an array of objects whose keys mirror the
// command-line flags (x-dist, err-dist, n, p-w, p-y, replicates, seed, ...).
std::vector<ScenarioFileEntry> load_scenario_file(const std::string& path);

}  // namespace phasereg
