#include "phasereg/fit.hpp"

#include <cmath>
#include <string>

#include "phasereg/errors.hpp"
#include "phasereg/rng.hpp"

namespace phasereg {

namespace {

// Least-squares coefficients, optionally with an intercept column.
CoefficientVector least_squares(const RegressionData& data, bool intercept) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p1() + data.p2();
  const Eigen::Index cols = p + (intercept ? 1 : 0);
  if (n < cols) throw DomainError("least squares: fewer rows than coefficients");

  Eigen::MatrixXd X(n, cols);
  Eigen::Index at = 0;
  if (intercept) X.col(at++).setOnes();
  X.middleCols(at, data.p1()) = data.W;
  if (data.p2() > 0) X.middleCols(at + data.p1(), data.p2()) = data.Z;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < cols) {
    throw DomainError("least squares: design matrix is rank deficient (rank " +
                      std::to_string(qr.rank()) + " of " + std::to_string(cols) + ")");
  }
  const Eigen::VectorXd beta = qr.solve(data.y);

  CoefficientVector c;
  c.b0 = intercept ? beta(0) : 0.0;
  const Eigen::Index off = intercept ? 1 : 0;
  c.b1 = beta.segment(off, data.p1());
  c.b2 = beta.segment(off + data.p1(), data.p2());
  return c;
}

double mean_of(const Eigen::VectorXd& v) { return v.mean(); }

}  // namespace

FitResult fit_naive(const RegressionData& data, bool intercept) {
  data.validate();
  const CoefficientVector c = least_squares(data, intercept);
  Eigen::VectorXd fitted = Eigen::VectorXd::Constant(data.n(), c.b0);
  fitted += data.W * c.b1;
  if (data.p2() > 0) fitted += data.Z * c.b2;

  FitResult r;
  r.coef = c;
  r.objective = (data.y - fitted).squaredNorm();  // residual sum of squares
  r.method = FitMethod::naive;
  r.starts_tried = 1;
  r.converged = true;
  return r;
}

FitResult fit_disattenuated(const RegressionData& data, double sigma2_U,
                            double sigma2_X) {
  data.validate();
  if (data.p1() != 1 || data.p2() != 0) {
    throw UnsupportedError("fit_disattenuated: univariate model only");
  }
  if (!(sigma2_X > 0.0) || sigma2_U < 0.0) {
    throw DomainError("fit_disattenuated: need sigma2_X > 0 and sigma2_U >= 0");
  }
  const FitResult naive = fit_naive(data);
  const double slope = naive.coef.b1(0) * (sigma2_X + sigma2_U) / sigma2_X;

  FitResult r;
  r.coef.b1 = Eigen::VectorXd::Constant(1, slope);
  r.coef.b2 = Eigen::VectorXd(0);
  r.coef.b0 = mean_of(data.y) - slope * mean_of(data.W.col(0));
  r.objective = 0.0;
  r.method = FitMethod::disattenuated;
  r.starts_tried = 1;
  r.converged = true;
  return r;
}

VarianceComponents variance_components(const RegressionData& data, double beta1) {
  data.validate();
  if (data.p1() != 1 || data.p2() != 0) {
    throw UnsupportedError("variance_components: univariate model only");
  }
  if (data.n() < 2) throw DomainError("variance_components: need n >= 2");
  if (beta1 == 0.0 || !std::isfinite(beta1)) {
    throw DomainError("variance_components: slope must be finite and nonzero");
  }
  const Eigen::VectorXd w = data.W.col(0);
  const double wbar = w.mean(), ybar = data.y.mean();
  const double denom = static_cast<double>(data.n() - 1);
  const double s_wy = (w.array() - wbar).matrix().dot((data.y.array() - ybar).matrix()) / denom;
  const double s_ww = (w.array() - wbar).square().sum() / denom;
  const double s_yy = (data.y.array() - ybar).square().sum() / denom;

  VarianceComponents vc;
  vc.sigma2_X = s_wy / beta1;
  vc.sigma2_U = std::max(0.0, s_ww - vc.sigma2_X);
  vc.sigma2_eps = std::max(0.0, s_yy - beta1 * beta1 * vc.sigma2_X);
  return vc;
}

OddCumulants sample_odd_cumulants(std::span<const double> x) {
  const auto n = static_cast<double>(x.size());
  if (x.size() < 3) throw DomainError("sample_odd_cumulants: need n >= 3");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m3 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m3 += d * d * d;
  }
  m3 /= n;
  return {mean, n * n * m3 / ((n - 1.0) * (n - 2.0))};
}

FitResult fit_phase(const RegressionData& data, const FitOptions& options) {
  data.validate();
  if (data.n() < 3) throw DomainError("fit_phase: need n >= 3");
  if (options.n_starts < 1) throw DomainError("fit_phase: n_starts must be >= 1");

  const double t_star =
      options.t_star
          ? *options.t_star
          : select_t_star(std::span<const double>(data.y.data(),
                                                  static_cast<std::size_t>(data.n())),
                          options.tstar_scan);
  if (!(t_star > 0.0)) throw DomainError("fit_phase: t_star must be > 0");

  const WeightSpec ws =
      make_weight_spec(options.kernel, t_star, options.n_nodes, options.rule);
  const PhaseObjective objective(data, ws);

  const Eigen::Index p1 = data.p1(), p2 = data.p2();
  CoefficientVector base =
      options.start ? *options.start : least_squares(data, !options.pin_intercept);
  if (base.b1.size() != p1 || base.b2.size() != p2) {
    throw DomainError("fit_phase: start override dimensions do not match data");
  }
  if (options.pin_intercept) base.b0 = 0.0;

  // Free-coordinate layout: [b0?, b1..., b2...].
  const Eigen::Index dim = (options.pin_intercept ? 0 : 1) + p1 + p2;
  const auto pack = [&](const CoefficientVector& c) {
    Eigen::VectorXd x(dim);
    Eigen::Index at = 0;
    if (!options.pin_intercept) x(at++) = c.b0;
    x.segment(at, p1) = c.b1;
    x.segment(at + p1, p2) = c.b2;
    return x;
  };
  const auto unpack = [&](const Eigen::VectorXd& x) {
    CoefficientVector c;
    Eigen::Index at = 0;
    c.b0 = options.pin_intercept ? 0.0 : x(at++);
    c.b1 = x.segment(at, p1);
    c.b2 = x.segment(at + p1, p2);
    return c;
  };
  const auto f = [&](const Eigen::VectorXd& x) { return objective.value(unpack(x)); };

  const Eigen::VectorXd x_base = pack(base);
  Eigen::VectorXd scale(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    scale(i) = options.perturb_scale * std::max(std::abs(x_base(i)), 0.5);
  }

  SimplexResult best;
  int best_index = -1;
  bool any_converged = false;
  for (int k = 0; k < options.n_starts; ++k) {
    Eigen::VectorXd x0 = x_base;
    if (k > 0) {
      CounterRng rng(options.seed, static_cast<std::uint64_t>(k));
      for (Eigen::Index i = 0; i < dim; ++i) x0(i) += scale(i) * rng.normal();
    }
    const SimplexResult run = nelder_mead(f, x0, 0.5 * scale, options.simplex);
    any_converged = any_converged || run.converged;
    if (best_index < 0 || run.fx < best.fx) {
      best = run;
      best_index = k;
    }
  }
  if (!any_converged) {
    throw NonConvergenceError(
        "fit_phase: none of " + std::to_string(options.n_starts) +
        " starts met the simplex stopping rule (best objective " +
        std::to_string(best.fx) + " after " + std::to_string(best.iterations) +
        " iterations; raise simplex.max_iter or loosen the tolerances)");
  }

  FitResult r;
  r.coef = unpack(best.x);
  r.objective = best.fx;
  r.method = FitMethod::phase;
  r.starts_tried = options.n_starts;
  r.t_star = t_star;

  const Eigen::VectorXd g = objective.gradient(r.coef);
  // Curvature bound: the Hessian integrands are at most 2 t^2 K * (2 n^2)^2,
  // so ||H|| <= 8 n^4 t*^3 integral_0^1 u^2 K(u) du. A point NM can place to
  // within diam_tol of the minimizer carries a gradient up to that times the
  // coordinate scale, which is what the stationarity test must tolerate.
  double u2K = 0.0;
  switch (options.kernel) {
    case WeightKernelKind::k1: u2K = 1.0 / 30.0; break;  // u^2 (1-u)^2
    case WeightKernelKind::k2: u2K = 1.0 / 12.0; break;  // u^2 (1-u)
    case WeightKernelKind::k3: u2K = 2.0 / 15.0; break;  // u^2 (1-u^2)
  }
  const double n4 = std::pow(static_cast<double>(data.n()), 4);
  const double curvature = 8.0 * n4 * t_star * t_star * t_star * u2K;
  const double g_tol =
      options.grad_tol * curvature * (1.0 + best.x.lpNorm<Eigen::Infinity>());
  double g_free = 0.0;  // pinned coordinates excluded from the stationarity check
  for (Eigen::Index i = options.pin_intercept ? 1 : 0; i < g.size(); ++i) {
    g_free = std::max(g_free, std::abs(g(i)));
  }
  r.converged = best.converged && g_free <= g_tol;
  return r;
}

}  // namespace phasereg
