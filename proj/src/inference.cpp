#include "phasereg/inference.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "phasereg/distance.hpp"
#include "phasereg/errors.hpp"
#include "phasereg/parallel.hpp"
#include "phasereg/rng.hpp"

namespace phasereg {

namespace {

RegressionData take_rows(const RegressionData& data, const std::vector<Eigen::Index>& rows) {
  RegressionData out;
  out.W.resize(rows.size(), data.W.cols());
  out.Z.resize(rows.size(), data.Z.cols());
  out.y.resize(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.W.row(r) = data.W.row(rows[r]);
    if (data.Z.cols() > 0) out.Z.row(r) = data.Z.row(rows[r]);
    out.y(r) = data.y(rows[r]);
  }
  return out;
}

}  // namespace

RegressionData resample(const RegressionData& data, const BootstrapConfig& config,
                        int replicate_index) {
  data.validate();
  if (replicate_index < 0) throw DomainError("resample: negative replicate index");
  const Eigen::Index n = data.n();
  CounterRng rng(config.seed, static_cast<std::uint64_t>(replicate_index));

  std::vector<Eigen::Index> rows;
  rows.reserve(n);
  if (config.mode == ResampleMode::iid) {
    for (Eigen::Index i = 0; i < n; ++i) {
      rows.push_back(static_cast<Eigen::Index>(rng.uniform() * n));
    }
  } else {
    if (!config.block_length) {
      throw ConfigError("resample: block mode requires a block length");
    }
    const Eigen::Index L = *config.block_length;
    if (L < 1 || L > n) {
      throw ConfigError("resample: block length must lie in [1, n]");
    }
    const Eigen::Index n_starts = n - L + 1;
    while (static_cast<Eigen::Index>(rows.size()) < n) {
      const auto s = static_cast<Eigen::Index>(rng.uniform() * n_starts);
      for (Eigen::Index i = 0; i < L && static_cast<Eigen::Index>(rows.size()) < n; ++i) {
        rows.push_back(s + i);
      }
    }
  }
  return take_rows(data, rows);
}

CovarianceEstimate full_bootstrap(
    const RegressionData& data,
    const std::function<FitResult(const RegressionData&)>& fit,
    const BootstrapConfig& config) {
  data.validate();
  if (config.B < 2) throw ConfigError("full_bootstrap: need B >= 2");

  const Eigen::Index p = 1 + data.p1() + data.p2();
  std::vector<std::optional<Eigen::VectorXd>> estimates(config.B);
  parallel_for(config.B, config.n_threads, [&](int b) {
    const RegressionData star = resample(data, config, b);
    try {
      estimates[b] = fit(star).coef.flat();
    } catch (const std::exception&) {
      estimates[b] = std::nullopt;  // dropped replicate
    }
  });

  int used = 0;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  for (const auto& e : estimates) {
    if (e) {
      mean += *e;
      ++used;
    }
  }
  if (used < 2) {
    throw InferenceFailure("full_bootstrap: only " + std::to_string(used) +
                           " of " + std::to_string(config.B) +
                           " replicates produced a fit");
  }
  mean /= static_cast<double>(used);

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
  for (const auto& e : estimates) {
    if (e) {
      const Eigen::VectorXd d = *e - mean;
      cov.noalias() += d * d.transpose();
    }
  }
  cov /= static_cast<double>(used);

  CovarianceEstimate out;
  out.matrix = 0.5 * (cov + cov.transpose());
  out.method = CovMethod::full_bootstrap;
  out.B_used = used;
  return out;
}

CovarianceEstimate plugin_bootstrap(const RegressionData& data, const FitResult& fitted,
                                    const FitOptions& fit_options,
                                    const BootstrapConfig& config) {
  data.validate();
  if (data.p1() != 1 || data.p2() != 0) {
    throw UnsupportedError("plugin_bootstrap: univariate model only");
  }
  if (config.B < 1) throw ConfigError("plugin_bootstrap: need B >= 1");
  if (!fitted.t_star) {
    throw DomainError("plugin_bootstrap: fitted result carries no t_star");
  }

  // The weight function of the original fit defines the estimating equation;
  // it stays frozen across replicates.
  const WeightSpec ws = make_weight_spec(fit_options.kernel, *fitted.t_star,
                                         fit_options.n_nodes, fit_options.rule);
  const bool pinned = fit_options.pin_intercept;
  const Eigen::Index p = pinned ? 1 : 2;

  const Eigen::Matrix2d hess_full = PhaseObjective(data, ws).hessian(fitted.coef);
  const Eigen::MatrixXd bhat =
      pinned ? hess_full.bottomRightCorner(1, 1) : Eigen::MatrixXd(hess_full);

  std::vector<Eigen::VectorXd> grads(config.B);
  parallel_for(config.B, config.n_threads, [&](int b) {
    const RegressionData star = resample(data, config, b);
    const Eigen::VectorXd g = PhaseObjective(star, ws).gradient(fitted.coef);
    grads[b] = pinned ? g.tail(1).eval() : g;
  });

  Eigen::MatrixXd ahat = Eigen::MatrixXd::Zero(p, p);
  for (const auto& g : grads) ahat.noalias() += g * g.transpose();
  ahat /= static_cast<double>(config.B);

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(bhat);
  if (!lu.isInvertible()) {
    throw NumericalError(
        "plugin_bootstrap: objective Hessian is singular at the fitted "
        "coefficients; use the full bootstrap instead");
  }
  const Eigen::MatrixXd binv = lu.inverse();
  Eigen::MatrixXd cov = binv * ahat * binv.transpose();

  CovarianceEstimate out;
  out.matrix = 0.5 * (cov + cov.transpose());
  out.method = CovMethod::plugin_bootstrap;
  out.B_used = config.B;
  return out;
}

double robust_spread(std::span<const double> sample) {
  return quantile_type7(sample, 0.75) - quantile_type7(sample, 0.25);
}

}  // namespace phasereg
