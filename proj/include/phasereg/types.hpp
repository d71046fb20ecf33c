#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

namespace phasereg {

// Observed regression sample: contaminated regressors W (n x p1), clean
// regressors Z (n x p2, possibly zero columns), response y (n). Rows are
// jointly indexed; all entries finite.
struct RegressionData {
  Eigen::MatrixXd W;
  Eigen::MatrixXd Z;
  Eigen::VectorXd y;

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p1() const { return W.cols(); }
  Eigen::Index p2() const { return Z.cols(); }

  // Throws DomainError on row-count mismatch, n < 1, p1 < 1, or non-finite entries.
  void validate() const;
};

// Candidate or fitted coefficients: intercept b0, slopes b1 (W) and b2 (Z).
struct CoefficientVector {
  double b0 = 0.0;
  Eigen::VectorXd b1;
  Eigen::VectorXd b2;

  Eigen::Index dim() const { return 1 + b1.size() + b2.size(); }

  // Flat layout [b0, b1..., b2...] used by optimizers and covariance matrices.
  Eigen::VectorXd flat() const;
  static CoefficientVector from_flat(const Eigen::VectorXd& v, Eigen::Index p1,
                                     Eigen::Index p2);
};

enum class FitMethod { phase, naive, disattenuated, gmm };

std::string method_name(FitMethod m);

struct FitResult {
  CoefficientVector coef;
  double objective = 0.0;
  FitMethod method = FitMethod::phase;
  int starts_tried = 0;
  bool converged = false;
  std::optional<double> t_star;  // phase method only
};

}  // namespace phasereg
