#include "phasereg/distance.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "phasereg/ecf.hpp"
#include "phasereg/errors.hpp"

namespace phasereg {

namespace {

inline void sin_cos(double x, double& s, double& c) {
#if defined(__GLIBC__)
  ::sincos(x, &s, &c);
#else
  s = std::sin(x);
  c = std::cos(x);
#endif
}

void check_candidate_dims(Eigen::Index p1, Eigen::Index p2, const CoefficientVector& c) {
  if (c.b1.size() != p1 || c.b2.size() != p2) {
    throw DomainError("candidate dimensions do not match data");
  }
  if (!std::isfinite(c.b0) || !c.b1.allFinite() || (c.b2.size() > 0 && !c.b2.allFinite())) {
    throw DomainError("candidate has non-finite coefficients");
  }
}

}  // namespace

PhaseObjective::PhaseObjective(const RegressionData& data, const WeightSpec& weights)
    : weights_(weights), y_(data.y), p1_(data.W.cols()), p2_(data.Z.cols()) {
  data.validate();
  const FrequencyGrid& g = weights_.grid;
  if (g.size() == 0) throw DomainError("PhaseObjective: empty frequency grid");

  X_.resize(data.W.rows(), p1_ + p2_);
  X_.leftCols(p1_) = data.W;
  if (p2_ > 0) X_.rightCols(p2_) = data.Z;

  const std::size_t m = g.size();
  wk_.resize(m);
  Cy_.resize(m);
  Sy_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    wk_[k] = g.weights[k] * kernel_weight(weights_.kernel, g.nodes[k], g.t_star);
    double cs = 0.0, sn = 0.0, s, c;
    for (Eigen::Index i = 0; i < y_.size(); ++i) {
      sin_cos(g.nodes[k] * y_(i), s, c);
      cs += c;
      sn += s;
    }
    Cy_[k] = cs;
    Sy_[k] = sn;
  }

  uniform_ = g.rule == QuadratureRule::uniform_midpoint;
  if (uniform_) dt_ = g.t_star / static_cast<double>(m);
}

Eigen::VectorXd PhaseObjective::derived(const CoefficientVector& c) const {
  Eigen::VectorXd v = Eigen::VectorXd::Constant(X_.rows(), c.b0);
  v.noalias() += X_.leftCols(p1_) * c.b1;
  if (p2_ > 0) v.noalias() += X_.rightCols(p2_) * c.b2;
  return v;
}

void PhaseObjective::node_sums(const Eigen::VectorXd& v, const Eigen::MatrixXd& extra,
                               std::vector<std::vector<double>>& out_c,
                               std::vector<std::vector<double>>& out_s) const {
  const std::size_t m = weights_.grid.size();
  const Eigen::Index n = v.size();
  const Eigen::Index q = extra.cols();
  out_c.assign(1 + q, std::vector<double>(m, 0.0));
  out_s.assign(1 + q, std::vector<double>(m, 0.0));

  if (uniform_) {
    // Node t_k = (k + 1/2) dt: start at the half step, rotate by exp(i dt v).
    for (Eigen::Index j = 0; j < n; ++j) {
      double es, ec, zs, zc;
      sin_cos(dt_ * v(j), es, ec);
      sin_cos(0.5 * dt_ * v(j), zs, zc);
      for (std::size_t k = 0; k < m; ++k) {
        out_c[0][k] += zc;
        out_s[0][k] += zs;
        for (Eigen::Index r = 0; r < q; ++r) {
          out_c[1 + r][k] += extra(j, r) * zc;
          out_s[1 + r][k] += extra(j, r) * zs;
        }
        const double nzc = zc * ec - zs * es;
        zs = zs * ec + zc * es;
        zc = nzc;
      }
    }
    return;
  }

  const std::vector<double>& t = weights_.grid.nodes;
  for (std::size_t k = 0; k < m; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double s, cth;
      sin_cos(t[k] * v(j), s, cth);
      out_c[0][k] += cth;
      out_s[0][k] += s;
      for (Eigen::Index r = 0; r < q; ++r) {
        out_c[1 + r][k] += extra(j, r) * cth;
        out_s[1 + r][k] += extra(j, r) * s;
      }
    }
  }
}

double PhaseObjective::value(const CoefficientVector& c) const {
  check_candidate_dims(p1_, p2_, c);
  const Eigen::VectorXd v = derived(c);
  const std::size_t m = weights_.grid.size();

  std::vector<std::vector<double>> cw, sw;
  node_sums(v, Eigen::MatrixXd(X_.rows(), 0), cw, sw);

  double acc = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double r = Sy_[k] * cw[0][k] - Cy_[k] * sw[0][k];
    acc += wk_[k] * r * r;
  }
  if (!std::isfinite(acc)) throw NumericalError("distance objective is non-finite");
  return acc;
}

Eigen::VectorXd PhaseObjective::gradient(const CoefficientVector& c) const {
  check_candidate_dims(p1_, p2_, c);
  const Eigen::VectorXd v = derived(c);
  const std::size_t m = weights_.grid.size();
  const Eigen::Index p = p1_ + p2_;

  std::vector<std::vector<double>> cw, sw;
  node_sums(v, X_, cw, sw);

  Eigen::VectorXd g = Eigen::VectorXd::Zero(1 + p);
  const std::vector<double>& t = weights_.grid.nodes;
  for (std::size_t k = 0; k < m; ++k) {
    const double R = Sy_[k] * cw[0][k] - Cy_[k] * sw[0][k];
    const double f = -2.0 * wk_[k] * t[k] * R;
    g(0) += f * (Cy_[k] * cw[0][k] + Sy_[k] * sw[0][k]);
    for (Eigen::Index r = 0; r < p; ++r) {
      g(1 + r) += f * (Cy_[k] * cw[1 + r][k] + Sy_[k] * sw[1 + r][k]);
    }
  }
  if (!g.allFinite()) throw NumericalError("distance gradient is non-finite");
  return g;
}

Eigen::Matrix2d PhaseObjective::hessian(const CoefficientVector& c) const {
  if (p1_ != 1 || p2_ != 0) {
    throw UnsupportedError("distance hessian: univariate model (p1 = 1, p2 = 0) only");
  }
  check_candidate_dims(p1_, p2_, c);
  const Eigen::VectorXd v = derived(c);
  const std::size_t m = weights_.grid.size();

  // Weighted sums with weights W_j and W_j^2 alongside the unweighted ones.
  Eigen::MatrixXd extra(X_.rows(), 2);
  extra.col(0) = X_.col(0);
  extra.col(1) = X_.col(0).cwiseProduct(X_.col(0));
  std::vector<std::vector<double>> cw, sw;
  node_sums(v, extra, cw, sw);

  Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
  const std::vector<double>& t = weights_.grid.nodes;
  for (std::size_t k = 0; k < m; ++k) {
    const double R = Sy_[k] * cw[0][k] - Cy_[k] * sw[0][k];
    const double C = Cy_[k] * cw[0][k] + Sy_[k] * sw[0][k];
    const double Cw = Cy_[k] * cw[1][k] + Sy_[k] * sw[1][k];
    const double Sw = Sy_[k] * cw[1][k] - Cy_[k] * sw[1][k];
    const double Sw2 = Sy_[k] * cw[2][k] - Cy_[k] * sw[2][k];
    const double f = 2.0 * wk_[k] * t[k] * t[k];
    H(0, 0) += f * (C * C - R * R);
    H(0, 1) += f * (C * Cw - R * Sw);
    H(1, 1) += f * (Cw * Cw - R * Sw2);
  }
  H(1, 0) = H(0, 1);
  if (!H.allFinite()) throw NumericalError("distance hessian is non-finite");
  return H;
}

double distance_simplified(const RegressionData& data, const CoefficientVector& c,
                           const WeightSpec& weights) {
  return PhaseObjective(data, weights).value(c);
}

double distance_quadsum(const RegressionData& data, const CoefficientVector& c,
                        const WeightSpec& weights) {
  data.validate();
  if (data.p1() != 1 || data.p2() != 0) {
    throw UnsupportedError("distance_quadsum: univariate model only");
  }
  check_candidate_dims(data.p1(), data.p2(), c);
  const Eigen::Index n = data.n();
  if (n > 400) {
    throw ResourceError("distance_quadsum: n = " + std::to_string(n) +
                        " exceeds the O(n^4) cap of 400");
  }
  const double b0 = c.b0, b1 = c.b1(0);
  const FrequencyGrid half =
      gauss_legendre_grid(weights.grid.t_star, static_cast<int>(weights.grid.size()));

  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) {
          const double diff = data.y(i) - data.y(k) - b1 * (data.W(j, 0) - data.W(l, 0));
          const double sum =
              data.y(i) + data.y(k) - 2.0 * b0 - b1 * (data.W(j, 0) + data.W(l, 0));
          acc += phi_K_on_grid(weights.kernel, half, diff) -
                 phi_K_on_grid(weights.kernel, half, sum);
        }
  return acc;
}

double distance_direct(const RegressionData& data, const CoefficientVector& c,
                       const WeightSpec& weights) {
  data.validate();
  check_candidate_dims(data.p1(), data.p2(), c);
  const std::span<const double> y(data.y.data(), static_cast<std::size_t>(data.y.size()));

  double acc = 0.0;
  for (std::size_t k = 0; k < weights.grid.size(); ++k) {
    const double t = weights.grid.nodes[k];
    const double w =
        weights.grid.weights[k] * kernel_weight(weights.kernel, t, weights.grid.t_star);
    const std::complex<double> ry = empirical_phase(y, t);
    const std::complex<double> rv =
        empirical_phase_lincomb(data.W, data.Z, c.b1, c.b2, t);
    const std::complex<double> rot(std::cos(t * c.b0), std::sin(t * c.b0));
    acc += w * std::norm(ry - rot * rv);
  }
  if (!std::isfinite(acc)) throw NumericalError("distance_direct is non-finite");
  return acc;
}

Eigen::VectorXd distance_gradient(const RegressionData& data, const CoefficientVector& c,
                                  const WeightSpec& weights) {
  return PhaseObjective(data, weights).gradient(c);
}

Eigen::Matrix2d distance_hessian(const RegressionData& data, const CoefficientVector& c,
                                 const WeightSpec& weights) {
  return PhaseObjective(data, weights).hessian(c);
}

}  // namespace phasereg
