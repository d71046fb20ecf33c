#include "phasereg/types.hpp"

#include <string>

#include "phasereg/errors.hpp"

namespace phasereg {

void RegressionData::validate() const {
  if (y.size() < 1) throw DomainError("RegressionData: empty sample");
  if (W.cols() < 1) throw DomainError("RegressionData: W must have at least one column");
  if (W.rows() != y.size()) {
    throw DomainError("RegressionData: W has " + std::to_string(W.rows()) +
                      " rows but y has " + std::to_string(y.size()));
  }
  if (Z.cols() > 0 && Z.rows() != y.size()) {
    throw DomainError("RegressionData: Z has " + std::to_string(Z.rows()) +
                      " rows but y has " + std::to_string(y.size()));
  }
  if (!W.allFinite() || !y.allFinite() || (Z.size() > 0 && !Z.allFinite())) {
    throw DomainError("RegressionData: non-finite entries");
  }
}

Eigen::VectorXd CoefficientVector::flat() const {
  Eigen::VectorXd v(dim());
  v(0) = b0;
  if (b1.size() > 0) v.segment(1, b1.size()) = b1;
  if (b2.size() > 0) v.segment(1 + b1.size(), b2.size()) = b2;
  return v;
}

CoefficientVector CoefficientVector::from_flat(const Eigen::VectorXd& v,
                                               Eigen::Index p1, Eigen::Index p2) {
  if (v.size() != 1 + p1 + p2) {
    throw DomainError("CoefficientVector::from_flat: length mismatch");
  }
  CoefficientVector c;
  c.b0 = v(0);
  c.b1 = v.segment(1, p1);
  c.b2 = v.segment(1 + p1, p2);
  return c;
}

std::string method_name(FitMethod m) {
  switch (m) {
    case FitMethod::phase: return "phase";
    case FitMethod::naive: return "naive";
    case FitMethod::disattenuated: return "disattenuated";
    case FitMethod::gmm: return "gmm";
  }
  throw DomainError("method_name: invalid method");
}

}  // namespace phasereg
