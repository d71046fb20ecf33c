#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "phasereg/simplex.hpp"

using namespace phasereg;

TEST_CASE("quadratic bowl converges to its center") {
  Eigen::VectorXd a(3);
  a << 1.0, -2.0, 0.5;
  auto f = [&](const Eigen::VectorXd& x) {
    return (x - a).squaredNorm() + 4.0;
  };
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(3), step = Eigen::VectorXd::Constant(3, 0.5);
  const SimplexResult r = nelder_mead(f, x0, step);
  CHECK(r.converged);
  CHECK((r.x - a).norm() < 1e-6);
  CHECK(r.fx == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(r.iterations > 0);
}

TEST_CASE("rosenbrock valley is followed to the optimum") {
  auto f = [](const Eigen::VectorXd& x) {
    const double a = 1.0 - x(0);
    const double b = x(1) - x(0) * x(0);
    return a * a + 100.0 * b * b;
  };
  Eigen::VectorXd x0(2), step(2);
  x0 << -1.2, 1.0;
  step << 0.5, 0.5;
  SimplexOptions opt;
  opt.max_iter = 5000;
  const SimplexResult r = nelder_mead(f, x0, step, opt);
  CHECK(r.converged);
  CHECK(std::abs(r.x(0) - 1.0) < 1e-4);
  CHECK(std::abs(r.x(1) - 1.0) < 1e-4);
}

TEST_CASE("one-dimensional problems use a two-point simplex") {
  auto f = [](const Eigen::VectorXd& x) { return std::cosh(x(0) - 0.3); };
  Eigen::VectorXd x0(1), step(1);
  x0 << 5.0;
  step << 1.0;
  const SimplexResult r = nelder_mead(f, x0, step);
  CHECK(r.converged);
  CHECK(std::abs(r.x(0) - 0.3) < 1e-6);
}

TEST_CASE("results are deterministic") {
  auto f = [](const Eigen::VectorXd& x) {
    return std::sin(x(0)) + x.squaredNorm();
  };
  Eigen::VectorXd x0(2), step(2);
  x0 << 2.0, -1.0;
  step << 0.3, 0.3;
  const SimplexResult r1 = nelder_mead(f, x0, step);
  const SimplexResult r2 = nelder_mead(f, x0, step);
  CHECK((r1.x - r2.x).norm() == 0.0);
  CHECK(r1.fx == r2.fx);
  CHECK(r1.iterations == r2.iterations);
}

TEST_CASE("iteration budget is respected and reported") {
  auto f = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  Eigen::VectorXd x0 = Eigen::VectorXd::Constant(4, 10.0);
  Eigen::VectorXd step = Eigen::VectorXd::Constant(4, 0.1);
  SimplexOptions opt;
  opt.max_iter = 5;
  const SimplexResult r = nelder_mead(f, x0, step, opt);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations <= 5);
}

TEST_CASE("tight tolerances shrink the final simplex further") {
  auto f = [](const Eigen::VectorXd& x) { return std::pow(x(0) - 2.0, 4); };
  Eigen::VectorXd x0(1), step(1);
  x0 << 0.0;
  step << 1.0;
  SimplexOptions loose, tight;
  loose.diam_tol = 1e-3;
  tight.diam_tol = 1e-10;
  tight.spread_tol = 1e-16;
  const SimplexResult rl = nelder_mead(f, x0, step, loose);
  const SimplexResult rt = nelder_mead(f, x0, step, tight);
  CHECK(rt.fx <= rl.fx);
  CHECK(std::abs(rt.x(0) - 2.0) <= std::abs(rl.x(0) - 2.0) + 1e-12);
}
