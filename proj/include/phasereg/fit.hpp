#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "phasereg/distance.hpp"
#include "phasereg/ecf.hpp"
#include "phasereg/simplex.hpp"
#include "phasereg/types.hpp"

namespace phasereg {

struct FitOptions {
  WeightKernelKind kernel = WeightKernelKind::k1;
  QuadratureRule rule = QuadratureRule::gauss_legendre;
  int n_nodes = 128;

  TStarScan tstar_scan{};          // 0-valued fields request the defaults
  std::optional<double> t_star;    // skip selection, use this frequency

  // Multi-start: base start (least squares unless overridden) plus
  // n_starts - 1 perturbed starts. Start k >= 1 draws one standard normal per
  // free coordinate from CounterRng(seed, k) and sets
  //   x_i = base_i + perturb_scale * max(|base_i|, 0.5) * draw_i.
  int n_starts = 9;
  double perturb_scale = 0.5;
  std::uint64_t seed = 0;
  std::optional<CoefficientVector> start;  // replaces the least-squares base

  bool pin_intercept = false;  // hold b0 = 0, optimize slopes only

  SimplexOptions simplex{};
  // Stationarity tolerance backing FitResult.converged:
  //   ||grad D||_inf <= grad_tol * H_bound * (1 + ||x||_inf)
  // with H_bound = 8 n^4 t*^3 integral_0^1 u^2 K(u) du bounding the objective
  // curvature, so the test is invariant to the objective's n^4 growth.
  double grad_tol = 1e-8;
};

// Minimum-distance fit of the phase objective. Deterministic given
// (data, options): multi-start Nelder-Mead, winner by lowest objective with
// ties broken by lowest start index.
FitResult fit_phase(const RegressionData& data, const FitOptions& options = {});

// Ordinary least squares of y on [1 W Z] (or [W Z] without intercept).
FitResult fit_naive(const RegressionData& data, bool intercept = true);

// Univariate naive slope rescaled by (sigma2_X + sigma2_U) / sigma2_X, with
// the intercept re-centered through the sample means.
FitResult fit_disattenuated(const RegressionData& data, double sigma2_U,
                            double sigma2_X);

struct VarianceComponents {
  double sigma2_X = 0.0;
  double sigma2_U = 0.0;
  double sigma2_eps = 0.0;
};

// Method-of-moments variance components given a slope estimate (univariate):
//   sigma2_X  = cov(W, y) / beta1        (n - 1 denominators)
//   sigma2_U  = max(0, var(W) - sigma2_X)
//   sigma2_eps= max(0, var(y) - beta1^2 sigma2_X)
VarianceComponents variance_components(const RegressionData& data, double beta1);

struct OddCumulants {
  double k1 = 0.0;  // sample mean
  double k3 = 0.0;  // unbiased third cumulant: n^2 m3 / ((n-1)(n-2))
};

OddCumulants sample_odd_cumulants(std::span<const double> x);

}  // namespace phasereg
