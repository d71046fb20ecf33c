#include "phasereg/gmm.hpp"

#include <cmath>
#include <string>

#include "phasereg/errors.hpp"
#include "phasereg/fit.hpp"
#include "phasereg/rng.hpp"

namespace phasereg {

namespace {

void require_univariate(const RegressionData& data, const char* who) {
  data.validate();
  if (data.p1() != 1 || data.p2() != 0) {
    throw UnsupportedError(std::string(who) + ": univariate model only");
  }
}

constexpr double kBinom[4][4] = {
    {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

}  // namespace

double model_moment(const ThetaK& theta, const MomentIndex& idx) {
  const int j = idx.j, k = idx.k;
  if (j == 1 && k == 0) return 0.0;
  if (j == 0 && k == 1) return 0.0;
  if (j == 2 && k == 0) return theta.sigma2_X + theta.sigma2_U;
  if (j == 1 && k == 1) return theta.beta1 * theta.sigma2_X;
  if (j == 0 && k == 2) return theta.beta1 * theta.beta1 * theta.sigma2_X + theta.sigma2_eps;
  if (j == 3 && k == 0) return theta.mu_X3;
  if (j == 2 && k == 1) return theta.beta1 * theta.mu_X3;
  if (j == 1 && k == 2) return theta.beta1 * theta.beta1 * theta.mu_X3;
  if (j == 0 && k == 3) return theta.beta1 * theta.beta1 * theta.beta1 * theta.mu_X3;
  throw DomainError("model_moment: no closed form for (j, k) = (" +
                    std::to_string(j) + ", " + std::to_string(k) + ")");
}

Eigen::MatrixXd sample_joint_moments(const RegressionData& data, int max_order) {
  require_univariate(data, "sample_joint_moments");
  if (max_order < 1) throw DomainError("sample_joint_moments: max_order must be >= 1");
  const Eigen::Index n = data.n();
  const double wbar = data.W.col(0).mean();
  const double ybar = data.y.mean();

  Eigen::MatrixXd nu = Eigen::MatrixXd::Zero(max_order + 1, max_order + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double dw = data.W(i, 0) - wbar;
    const double dy = data.y(i) - ybar;
    double wp = 1.0;
    for (int j = 0; j <= max_order; ++j) {
      double yp = 1.0;
      for (int k = 0; j + k <= max_order; ++k) {
        nu(j, k) += wp * yp;
        yp *= dy;
      }
      wp *= dw;
    }
  }
  nu /= static_cast<double>(n);
  return nu;
}

Eigen::VectorXd moment_vector(const RegressionData& data, const ThetaK& theta) {
  require_univariate(data, "moment_vector");
  const Eigen::Index n = data.n();
  const double a = theta.mu_X;
  const double c = theta.beta0 + theta.beta1 * theta.mu_X;

  Eigen::VectorXd A(9);
  for (std::size_t m = 0; m < kMomentIndices.size(); ++m) {
    const auto [j, k] = kMomentIndices[m];
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double term = 1.0;
      for (int r = 0; r < j; ++r) term *= data.W(i, 0) - a;
      for (int r = 0; r < k; ++r) term *= data.y(i) - c;
      s += term;
    }
    A(m) = (s - static_cast<double>(n) * model_moment(theta, kMomentIndices[m])) /
           std::sqrt(static_cast<double>(n));
  }
  return A;
}

RawMoments compute_raw_moments(const RegressionData& data) {
  require_univariate(data, "compute_raw_moments");
  RawMoments raw;
  raw.n = data.n();
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const double w = data.W(i, 0), y = data.y(i);
    double wp = 1.0;
    for (int p = 0; p <= 3; ++p) {
      double yq = 1.0;
      for (int q = 0; p + q <= 3; ++q) {
        raw.S[p][q] += wp * yq;
        yq *= y;
      }
      wp *= w;
    }
  }
  return raw;
}

Eigen::VectorXd moment_vector_from_sums(const RawMoments& raw, const ThetaK& theta) {
  const double n = static_cast<double>(raw.n);
  const double a = theta.mu_X;
  const double c = theta.beta0 + theta.beta1 * theta.mu_X;

  // Powers of (-a), (-c) up to 3.
  double pa[4] = {1.0, -a, a * a, -a * a * a};
  double pc[4] = {1.0, -c, c * c, -c * c * c};

  Eigen::VectorXd A(9);
  for (std::size_t m = 0; m < kMomentIndices.size(); ++m) {
    const auto [j, k] = kMomentIndices[m];
    double s = 0.0;
    for (int p = 0; p <= j; ++p) {
      for (int q = 0; q <= k; ++q) {
        s += kBinom[j][p] * kBinom[k][q] * pa[j - p] * pc[k - q] * raw.S[p][q];
      }
    }
    A(m) = (s - n * model_moment(theta, kMomentIndices[m])) / std::sqrt(n);
  }
  return A;
}

Eigen::MatrixXd estimate_sigma_K(const RegressionData& data) {
  require_univariate(data, "estimate_sigma_K");
  const Eigen::MatrixXd nu = sample_joint_moments(data, 6);
  Eigen::MatrixXd sigma(9, 9);
  for (std::size_t a = 0; a < 9; ++a) {
    for (std::size_t b = a; b < 9; ++b) {
      const auto [ja, ka] = kMomentIndices[a];
      const auto [jb, kb] = kMomentIndices[b];
      const double v = nu(ja + jb, ka + kb) - nu(ja, ka) * nu(jb, kb);
      sigma(a, b) = v;
      sigma(b, a) = v;
    }
  }
  return sigma;
}

GmmFit fit_gmm(const RegressionData& data, int n_moments, const GmmOptions& options) {
  require_univariate(data, "fit_gmm");
  if (data.n() < 3) throw DomainError("fit_gmm: need n >= 3");
  if (n_moments < 3) {
    throw UnsupportedError(
        "fit_gmm: moment order " + std::to_string(n_moments) +
        " rejected; orders below 3 leave the seven-parameter moment system "
        "overidentified (no solvable system)");
  }
  if (n_moments > 3) {
    throw UnsupportedError("fit_gmm: moment orders above 3 are not supported");
  }
  if (options.n_starts < 1) throw DomainError("fit_gmm: n_starts must be >= 1");

  // Weighting matrix: estimated once, ridge-stabilized, factorized, held fixed.
  Eigen::MatrixXd sigma = estimate_sigma_K(data);
  const double ridge = options.ridge_eps * sigma.trace() / 9.0;
  sigma.diagonal().array() += ridge;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(sigma);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) {
    throw NumericalError(
        "fit_gmm: moment covariance is singular after ridge regularization");
  }

  const RawMoments raw = compute_raw_moments(data);

  // Parameter layout eta = [mu_X, beta0, beta1, log s2X, log s2U, log s2eps, mu_X3].
  const Eigen::VectorXd w = data.W.col(0);
  const double denom = std::max<double>(1, data.n() - 1);
  const double s2w = (w.array() - w.mean()).square().sum() / denom;
  const double s2y = (data.y.array() - data.y.mean()).square().sum() / denom;
  const double var_floor = 1e-12 * (1.0 + s2w + s2y);
  const auto to_log = [&](double v) { return std::log(std::max(v, var_floor)); };

  const FitResult naive = fit_naive(data);
  ThetaK start;
  start.mu_X = w.mean();
  start.beta0 = naive.coef.b0;
  start.beta1 = naive.coef.b1(0);
  if (std::abs(start.beta1) > 1e-12) {
    const VarianceComponents vc = variance_components(data, start.beta1);
    start.sigma2_X = vc.sigma2_X;
    start.sigma2_U = vc.sigma2_U;
    start.sigma2_eps = vc.sigma2_eps;
  } else {
    start.sigma2_X = s2w;
    start.sigma2_U = var_floor;
    start.sigma2_eps = s2y;
  }
  const Eigen::MatrixXd nu3 = sample_joint_moments(data, 3);
  start.mu_X3 = nu3(3, 0);

  const auto unpack = [&](const Eigen::VectorXd& eta) {
    ThetaK t;
    t.mu_X = eta(0);
    t.beta0 = eta(1);
    t.beta1 = eta(2);
    t.sigma2_X = std::exp(eta(3));
    t.sigma2_U = std::exp(eta(4));
    t.sigma2_eps = std::exp(eta(5));
    t.mu_X3 = eta(6);
    return t;
  };
  const auto objective = [&](const Eigen::VectorXd& eta) {
    const Eigen::VectorXd A = moment_vector_from_sums(raw, unpack(eta));
    return A.dot(ldlt.solve(A));
  };

  Eigen::VectorXd eta0(7);
  eta0 << start.mu_X, start.beta0, start.beta1, to_log(start.sigma2_X),
      to_log(start.sigma2_U), to_log(start.sigma2_eps), start.mu_X3;

  Eigen::VectorXd scale(7);
  for (Eigen::Index i = 0; i < 7; ++i) {
    scale(i) = options.perturb_scale * std::max(std::abs(eta0(i)), 0.5);
  }

  SimplexResult best;
  int best_index = -1;
  for (int k = 0; k < options.n_starts; ++k) {
    Eigen::VectorXd x0 = eta0;
    if (k > 0) {
      CounterRng rng(options.seed, static_cast<std::uint64_t>(k));
      for (Eigen::Index i = 0; i < 7; ++i) x0(i) += scale(i) * rng.normal();
    }
    const SimplexResult run = nelder_mead(objective, x0, 0.5 * scale, options.simplex);
    if (best_index < 0 || run.fx < best.fx) {
      best = run;
      best_index = k;
    }
  }

  GmmFit out;
  out.theta = unpack(best.x);
  out.objective = best.fx;
  out.converged = best.converged;
  out.starts_tried = options.n_starts;
  out.fit.coef.b0 = out.theta.beta0;
  out.fit.coef.b1 = Eigen::VectorXd::Constant(1, out.theta.beta1);
  out.fit.coef.b2 = Eigen::VectorXd(0);
  out.fit.objective = out.objective;
  out.fit.method = FitMethod::gmm;
  out.fit.starts_tried = out.starts_tried;
  out.fit.converged = out.converged;
  return out;
}

}  // namespace phasereg
