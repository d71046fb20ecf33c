#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "phasereg/errors.hpp"
#include "phasereg/gmm.hpp"
#include "phasereg/rng.hpp"

using namespace phasereg;

namespace {

RegressionData univariate(const std::vector<double>& w, const std::vector<double>& y) {
  RegressionData d;
  d.W = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  d.Z.resize(static_cast<Eigen::Index>(w.size()), 0);
  d.y = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  return d;
}

ThetaK sample_theta() {
  ThetaK t;
  t.mu_X = 1.0;
  t.beta0 = 1.0;
  t.beta1 = 2.0;
  t.sigma2_X = 0.5;
  t.sigma2_U = 0.25;
  t.sigma2_eps = 0.3;
  t.mu_X3 = 0.2;
  return t;
}

}  // namespace

TEST_CASE("model moments reproduce the closed-form table") {
  const ThetaK t = sample_theta();
  CHECK(model_moment(t, {1, 0}) == 0.0);
  CHECK(model_moment(t, {0, 1}) == 0.0);
  CHECK(model_moment(t, {2, 0}) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(model_moment(t, {1, 1}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(model_moment(t, {0, 2}) == doctest::Approx(2.3).epsilon(1e-15));
  CHECK(model_moment(t, {3, 0}) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(model_moment(t, {2, 1}) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(model_moment(t, {1, 2}) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(model_moment(t, {0, 3}) == doctest::Approx(1.6).epsilon(1e-15));
}

TEST_CASE("sample joint central moments from a hand case") {
  const RegressionData d = univariate({0.0, 1.0, 2.0}, {1.0, 0.0, 2.0});
  const Eigen::MatrixXd nu = sample_joint_moments(d, 3);
  CHECK(nu(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(nu(1, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(nu(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(nu(2, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(nu(2, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(nu(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("moment vector from a two-point hand computation") {
  const RegressionData d = univariate({0.0, 2.0}, {1.0, 3.0});
  ThetaK t = sample_theta();
  t.beta1 = 1.0;
  t.sigma2_X = 0.5;
  const Eigen::VectorXd A = moment_vector(d, t);
  REQUIRE(A.size() == 9);
  const double s = std::sqrt(2.0);
  const std::vector<double> want{0.0, 0.0, s * 0.25, s * 0.5, s * 0.2,
                                 -s * 0.2, -s * 0.2, -s * 0.2, -s * 0.2};
  for (int i = 0; i < 9; ++i) {
    CHECK(A(i) == doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-12));
  }
}

TEST_CASE("raw power sums reproduce the moment vector exactly") {
  CounterRng rng(31, 0);
  const int n = 50;
  RegressionData d;
  d.W.resize(n, 1);
  d.Z.resize(n, 0);
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    d.W(i, 0) = rng.exponential();
    d.y(i) = 1.0 + 2.0 * d.W(i, 0) + 0.5 * rng.normal();
  }
  const RawMoments raw = compute_raw_moments(d);
  CHECK(raw.n == n);
  for (int rep = 0; rep < 5; ++rep) {
    ThetaK t = sample_theta();
    t.mu_X += 0.3 * rng.normal();
    t.beta0 += 0.3 * rng.normal();
    t.beta1 += 0.3 * rng.normal();
    const Eigen::VectorXd direct = moment_vector(d, t);
    const Eigen::VectorXd from_sums = moment_vector_from_sums(raw, t);
    REQUIRE(from_sums.size() == 9);
    for (int i = 0; i < 9; ++i) {
      CHECK(from_sums(i) == doctest::Approx(direct(i)).epsilon(1e-10));
    }
  }
}

TEST_CASE("moment covariance matches the brute-force formula on a small sample") {
  const RegressionData d =
      univariate({0.1, 0.9, 1.7, 2.2, 3.0}, {0.4, 1.1, 2.6, 2.0, 3.3});
  const Eigen::MatrixXd sigma = estimate_sigma_K(d);
  REQUIRE(sigma.rows() == 9);
  REQUIRE(sigma.cols() == 9);

  const Eigen::MatrixXd nu = sample_joint_moments(d, 6);
  for (int a = 0; a < 9; ++a) {
    for (int b = 0; b < 9; ++b) {
      const MomentIndex ia = kMomentIndices[static_cast<std::size_t>(a)];
      const MomentIndex ib = kMomentIndices[static_cast<std::size_t>(b)];
      const double want = nu(ia.j + ib.j, ia.k + ib.k) - nu(ia.j, ia.k) * nu(ib.j, ib.k);
      CHECK(sigma(a, b) == doctest::Approx(want).epsilon(1e-12));
      CHECK(sigma(a, b) == doctest::Approx(sigma(b, a)).epsilon(1e-12));
    }
  }
}

TEST_CASE("gmm recovers a noiseless model with vanishing error variances") {
  CounterRng rng(32, 0);
  const int n = 400;
  RegressionData d;
  d.W.resize(n, 1);
  d.Z.resize(n, 0);
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    d.W(i, 0) = std::abs(rng.normal());
    d.y(i) = 1.0 + 3.0 * d.W(i, 0);
  }
  const GmmFit g = fit_gmm(d);
  CHECK(g.theta.beta0 == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(g.theta.beta1 == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(g.theta.sigma2_U < 1e-4);
  CHECK(g.theta.sigma2_eps < 1e-4);
  CHECK(g.theta.sigma2_X > 0.0);
  CHECK(g.converged);
  CHECK(g.fit.method == FitMethod::gmm);
  CHECK(g.fit.coef.b0 == g.theta.beta0);
  CHECK(g.fit.coef.b1(0) == g.theta.beta1);
}

TEST_CASE("gmm is deterministic given a seed and reports its starts") {
  CounterRng rng(33, 0);
  const int n = 200;
  RegressionData d;
  d.W.resize(n, 1);
  d.Z.resize(n, 0);
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = rng.exponential();
    d.W(i, 0) = x + 0.3 * rng.normal();
    d.y(i) = 1.0 + 3.0 * x + 0.5 * rng.normal();
  }
  GmmOptions opt;
  opt.seed = 11;
  const GmmFit a = fit_gmm(d, 3, opt);
  const GmmFit b = fit_gmm(d, 3, opt);
  CHECK(a.theta.beta1 == b.theta.beta1);
  CHECK(a.objective == b.objective);
  CHECK(a.starts_tried == opt.n_starts);
  CHECK(a.theta.sigma2_X >= 0.0);
  CHECK(a.theta.sigma2_U >= 0.0);
  CHECK(a.theta.sigma2_eps >= 0.0);
}

TEST_CASE("only the three-moment system is supported") {
  const RegressionData d = univariate({0.0, 1.0, 2.0, 3.0}, {1.0, 2.0, 3.0, 4.0});
  CHECK_THROWS_AS(fit_gmm(d, 2), UnsupportedError);
  CHECK_THROWS_AS(fit_gmm(d, 4), UnsupportedError);
}
