#pragma once

#include <Eigen/Dense>
#include <functional>

namespace phasereg {

// Downhill simplex stopping rule: both criteria must hold.
//   diameter: max_i ||x_i - x_best||_inf <= diam_tol * (1 + ||x_best||_inf)
//   spread:   f_worst - f_best          <= spread_tol * (1 + |f_best|)
struct SimplexOptions {
  double diam_tol = 1e-8;
  double spread_tol = 1e-12;
  int max_iter = 0;  // 0: defaults to 500 * dimension
};

struct SimplexResult {
  Eigen::VectorXd x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Nelder-Mead with standard coefficients (reflect 1, expand 2, contract 1/2,
// shrink 1/2). Initial simplex: x0 plus per-coordinate steps x0 + step_i e_i.
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                          const SimplexOptions& options = {});

}  // namespace phasereg
