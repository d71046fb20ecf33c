#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "phasereg/fit.hpp"
#include "phasereg/types.hpp"

namespace phasereg {

enum class ResampleMode { iid, block };

struct BootstrapConfig {
  int B = 100;
  std::uint64_t seed = 0;
  ResampleMode mode = ResampleMode::iid;
  std::optional<int> block_length;  // required in block mode
  int n_threads = 0;                // 0: hardware concurrency
};

enum class CovMethod { full_bootstrap, plugin_bootstrap };

struct CovarianceEstimate {
  Eigen::MatrixXd matrix;  // coefficient order [b0, b1..., b2...]
  CovMethod method = CovMethod::full_bootstrap;
  int B_used = 0;
};

// Deterministic resample: replicate `replicate_index` of stream config.seed.
// iid mode draws n row indices with replacement; block mode concatenates
// moving blocks of length L (starts uniform on [0, n - L]) and truncates to n,
// preserving within-block row order. Rows of (W, Z, y) move together.
RegressionData resample(const RegressionData& data, const BootstrapConfig& config,
                        int replicate_index);

// Refit-per-replicate covariance: estimates beta* on each resample with the
// supplied fitting procedure and returns the centered second-moment matrix
// (1/B_used) sum (beta* - mean)(beta* - mean)^T over the replicates that fit
// successfully. Replicates whose fit throws are dropped; fewer than 2 usable
// replicates is an InferenceFailure. Replicate contributions are accumulated
// in replicate-index order, so results are bitwise reproducible.
CovarianceEstimate full_bootstrap(
    const RegressionData& data,
    const std::function<FitResult(const RegressionData&)>& fit,
    const BootstrapConfig& config);

// Sandwich covariance without refitting: with Bhat the objective Hessian at
// the fitted coefficients on the original data and lambda*_b the objective
// gradient at those same coefficients on resample b (weight function frozen
// from the original fit),
//   Ahat = (1/B) sum lambda*_b lambda*_b^T,
//   cov  = Bhat^-1 Ahat Bhat^-1  (symmetrized).
// Univariate model; with fit_options.pin_intercept the slope block (1x1) is
// returned. Throws NumericalError if Bhat is singular, advising the full
// bootstrap.
CovarianceEstimate plugin_bootstrap(const RegressionData& data, const FitResult& fitted,
                                    const FitOptions& fit_options,
                                    const BootstrapConfig& config);

// Interquartile range via type-7 quantiles.
double robust_spread(std::span<const double> sample);

}  // namespace phasereg
