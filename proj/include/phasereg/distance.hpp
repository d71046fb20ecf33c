#pragma once

#include <Eigen/Dense>

#include "phasereg/kernels.hpp"
#include "phasereg/types.hpp"

namespace phasereg {

// Minimum-distance objective for the candidate c = (b0, b1, b2) against data
// (W, Z, y), with residual frequency profile
//
//   D(c) = integral over (0, t*] of R(t)^2 K(t / t*) dt,
//   R(t) = sum_{i,j} sin{t (y_i - v_j)},   v_j = b0 + W_j . b1 + Z_j . b2.
//
// R factorizes through single sums, so one evaluation is O(n) per node:
//   R(t) = Sy(t) Cw(t) - Cy(t) Sw(t),
//   Cy = sum_i cos(t y_i), Sy = sum_i sin(t y_i),
//   Cw = sum_j cos(t v_j), Sw = sum_j sin(t v_j).
//
// The evaluator precomputes (t_k, w_k K(t_k/t*), Cy_k, Sy_k) per node. On a
// uniform grid the per-observation node sweep uses the complex rotation
// z_{k+1} = z_k * exp(i dt v_j) instead of per-node trig calls.
class PhaseObjective {
 public:
  PhaseObjective(const RegressionData& data, const WeightSpec& weights);

  double value(const CoefficientVector& c) const;

  // Analytic gradient, flat layout [b0, b1..., b2...]. With
  //   C(t)      = sum_{i,j} cos{t (y_i - v_j)} = Cy Cw + Sy Sw,
  //   C_x(t)    = sum_{i,j} x_j cos{t (y_i - v_j)} = Cy Cw_x + Sy Sw_x,
  //   Cw_x = sum_j x_j cos(t v_j), Sw_x = sum_j x_j sin(t v_j),
  // differentiating R(t)^2 in a coefficient with regressor weight x_j
  // (x_j = 1 for b0, W_jr or Z_js for slopes) gives
  //   dD/db_x = -2 integral t K(t/t*) R(t) C_x(t) dt.
  // This is the whole multivariate generalization: one weighted cosine sum
  // per coordinate.
  Eigen::VectorXd gradient(const CoefficientVector& c) const;

  // Second derivatives, univariate model (p1 = 1, p2 = 0) only. With
  // S_x(t) = sum_{i,j} x_j sin{t(y_i - v_j)} and weights 1, W_j, W_j^2:
  //   d2D/db0^2   = integral 2 t^2 K (C^2      - R S_{1 }) dt,  S_1 = R
  //   d2D/db0db1  = integral 2 t^2 K (C C_W    - R S_W   ) dt
  //   d2D/db1^2   = integral 2 t^2 K (C_W^2    - R S_{W^2}) dt
  // Higher dimensions would follow the same pattern with products of
  // per-coordinate weights (x_j x'_j) in the second sine sum.
  Eigen::Matrix2d hessian(const CoefficientVector& c) const;

  const WeightSpec& weights() const { return weights_; }
  Eigen::Index n() const { return y_.size(); }

 private:
  WeightSpec weights_;
  std::vector<double> wk_;        // quadrature weight * kernel value per node
  std::vector<double> Cy_, Sy_;   // response trig sums per node
  Eigen::MatrixXd X_;             // n x (p1 + p2), [W Z]
  Eigen::VectorXd y_;
  Eigen::Index p1_ = 0, p2_ = 0;
  bool uniform_ = false;
  double dt_ = 0.0;

  // Accumulate per-node weighted trig sums over the derived sample:
  // out_c[r][k] = sum_j weight_r(j) cos(t_k v_j), likewise out_s. Weight 0 is
  // identically 1; weights r >= 1 are the columns passed in `extra`.
  void node_sums(const Eigen::VectorXd& v, const Eigen::MatrixXd& extra,
                 std::vector<std::vector<double>>& out_c,
                 std::vector<std::vector<double>>& out_s) const;

  Eigen::VectorXd derived(const CoefficientVector& c) const;
};

// One-shot objective evaluation (same code path as the evaluator).
double distance_simplified(const RegressionData& data, const CoefficientVector& c,
                           const WeightSpec& weights);

// Quadruple-sum form of the same objective, univariate model, for
// cross-validation of the factorized evaluator. Expanding R(t)^2 with
// sin A sin B = (cos(A - B) - cos(A + B)) / 2 and integrating termwise
// against the even kernel gives
//
//   distance_quadsum = sum_{i,j,k,l} [ phi_K(y_i - y_k - b1 (W_j - W_l))
//                                    - phi_K(y_i + y_k - 2 b0 - b1 (W_j + W_l)) ]
//
// with phi_K(.) = phi_K(. | t*), and distance_simplified = distance_quadsum / 4.
// O(n^4); refuses n > 400.
double distance_quadsum(const RegressionData& data, const CoefficientVector& c,
                        const WeightSpec& weights);

// Phase-difference form: integral of |rho_y(t) - exp(i t b0) rho_v(t)|^2
// against the kernel weight, where rho_y is the empirical phase of y and
// rho_v the empirical phase of the derived sample W b1 + Z b2. Validation
// path; requires both phases admissible on the whole grid.
double distance_direct(const RegressionData& data, const CoefficientVector& c,
                       const WeightSpec& weights);

Eigen::VectorXd distance_gradient(const RegressionData& data, const CoefficientVector& c,
                                  const WeightSpec& weights);

Eigen::Matrix2d distance_hessian(const RegressionData& data, const CoefficientVector& c,
                                 const WeightSpec& weights);

}  // namespace phasereg
