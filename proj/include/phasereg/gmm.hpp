#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "phasereg/simplex.hpp"
#include "phasereg/types.hpp"

namespace phasereg {

// Moment-model parameter vector for the univariate errors-in-variables model
// with symmetric error distributions (odd error moments vanish).
struct ThetaK {
  double mu_X = 0.0;       // mean of the latent regressor
  double beta0 = 0.0;
  double beta1 = 0.0;
  double sigma2_X = 0.0;   // latent regressor variance
  double sigma2_U = 0.0;   // regressor contamination variance
  double sigma2_eps = 0.0; // response error variance
  double mu_X3 = 0.0;      // third central moment of the latent regressor
};

struct MomentIndex {
  int j = 0;  // power on W - mu_X
  int k = 0;  // power on y - beta0 - beta1 mu_X
};

// Moment equations used at order 3, in this fixed order.
inline constexpr std::array<MomentIndex, 9> kMomentIndices{{
    {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3},
}};

// Population moment nu_jk(theta) = E (W - mu_X)^j (y - beta0 - beta1 mu_X)^k:
//   nu_10 = nu_01 = 0
//   nu_20 = sigma2_X + sigma2_U      nu_11 = beta1 sigma2_X
//   nu_02 = beta1^2 sigma2_X + sigma2_eps
//   nu_30 = mu_X3                    nu_21 = beta1 mu_X3
//   nu_12 = beta1^2 mu_X3            nu_03 = beta1^3 mu_X3
double model_moment(const ThetaK& theta, const MomentIndex& idx);

// Sample central joint moments nu_hat_jk = n^-1 sum (W_i - Wbar)^j (y_i - ybar)^k.
// Entry (j, k) is filled for j + k <= max_order; the rest are zero.
Eigen::MatrixXd sample_joint_moments(const RegressionData& data, int max_order);

// Scaled moment discrepancies A_jk(theta) =
//   n^-1/2 sum_i [ (W_i - mu_X)^j (y_i - beta0 - beta1 mu_X)^k - nu_jk(theta) ],
// stacked in kMomentIndices order.
Eigen::VectorXd moment_vector(const RegressionData& data, const ThetaK& theta);

// Raw power sums S_pq = sum_i W_i^p y_i^q for p + q <= 3; lets the moment
// vector be re-evaluated in O(1) per candidate via the binomial expansion
//   sum (W-a)^j (y-c)^k = sum_{p<=j, q<=k} C(j,p) C(k,q) (-a)^{j-p} (-c)^{k-q} S_pq.
struct RawMoments {
  Eigen::Index n = 0;
  std::array<std::array<double, 4>, 4> S{};
};

RawMoments compute_raw_moments(const RegressionData& data);
Eigen::VectorXd moment_vector_from_sums(const RawMoments& raw, const ThetaK& theta);

// Estimated covariance of the moment vector:
//   Sigma[a, b] = nu_hat_{ja+jb, ka+kb} - nu_hat_{ja, ka} nu_hat_{jb, kb},
// symmetric 9x9, built from sample central moments up to order 6. Returned
// without regularization; the fit applies the ridge before inverting.
Eigen::MatrixXd estimate_sigma_K(const RegressionData& data);

struct GmmOptions {
  int n_starts = 9;
  double perturb_scale = 0.5;
  std::uint64_t seed = 0;
  SimplexOptions simplex{};
  double ridge_eps = 1e-8;  // ridge = ridge_eps * trace(Sigma)/9 * I
};

struct GmmFit {
  ThetaK theta;
  double objective = 0.0;
  bool converged = false;
  int starts_tried = 0;
  FitResult fit;  // coefficient view: (beta0, beta1)
};

// Quadratic-form moment fit with the weighting matrix estimated once from the
// data and held fixed during optimization. Variances are optimized on the log
// scale so positivity is structural. Multi-start from the least-squares
// implied parameter point, same perturbation engine as the phase fit.
GmmFit fit_gmm(const RegressionData& data, int n_moments = 3,
               const GmmOptions& options = {});

}  // namespace phasereg
