#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <numeric>

#include "doctest.h"
#include "phasereg/errors.hpp"
#include "phasereg/quadrature.hpp"

using namespace phasereg;

TEST_CASE("gauss-legendre weights are positive, nodes interior, sum to t_star") {
  for (int n : {1, 2, 5, 32, 128, 256}) {
    const FrequencyGrid g = gauss_legendre_grid(2.5, n);
    REQUIRE(g.size() == static_cast<std::size_t>(n));
    CHECK(g.t_star == 2.5);
    double sum = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(g.nodes[k] > 0.0);
      CHECK(g.nodes[k] < 2.5);
      CHECK(g.weights[k] > 0.0);
      if (k > 0) CHECK(g.nodes[k] > g.nodes[k - 1]);
      sum += g.weights[k];
    }
    CHECK(sum == doctest::Approx(2.5).epsilon(1e-12));
  }
}

TEST_CASE("gauss-legendre with n nodes integrates degree 2n-1 polynomials exactly") {
  const double T = 1.7;
  const FrequencyGrid g2 = gauss_legendre_grid(T, 2);
  const double cubic = integrate(g2, [](double t) { return t * t * t; });
  CHECK(cubic == doctest::Approx(std::pow(T, 4) / 4.0).epsilon(1e-14));

  const FrequencyGrid g5 = gauss_legendre_grid(T, 5);
  const double deg9 = integrate(g5, [](double t) { return std::pow(t, 9); });
  CHECK(deg9 == doctest::Approx(std::pow(T, 10) / 10.0).epsilon(1e-13));
}

TEST_CASE("uniform midpoint grid has equispaced nodes and equal weights") {
  const double T = 3.0;
  const int n = 6;
  const FrequencyGrid g = uniform_midpoint_grid(T, n);
  REQUIRE(g.size() == static_cast<std::size_t>(n));
  CHECK(g.rule == QuadratureRule::uniform_midpoint);
  const double h = T / n;
  for (int k = 0; k < n; ++k) {
    CHECK(g.nodes[k] == doctest::Approx((k + 0.5) * h).epsilon(1e-15));
    CHECK(g.weights[k] == doctest::Approx(h).epsilon(1e-15));
  }
}

TEST_CASE("midpoint rule is exact on affine integrands and accurate on cosine") {
  const double T = 2.0;
  const FrequencyGrid g = uniform_midpoint_grid(T, 128);
  const double affine = integrate(g, [](double t) { return 3.0 - 0.5 * t; });
  CHECK(affine == doctest::Approx(3.0 * T - 0.25 * T * T).epsilon(1e-14));
  const double c = integrate(g, [](double t) { return std::cos(t); });
  CHECK(c == doctest::Approx(std::sin(T)).epsilon(1e-5));
}

TEST_CASE("both rules agree on a smooth integral") {
  const double T = 1.3;
  auto f = [](double t) { return std::exp(-t) * std::cos(3.0 * t); };
  const double gl = integrate(gauss_legendre_grid(T, 64), f);
  const double mid = integrate(uniform_midpoint_grid(T, 4096), f);
  CHECK(gl == doctest::Approx(mid).epsilon(1e-8));
}

TEST_CASE("make_grid dispatches on the rule") {
  const FrequencyGrid a = make_grid(QuadratureRule::gauss_legendre, 1.0, 8);
  const FrequencyGrid b = make_grid(QuadratureRule::uniform_midpoint, 1.0, 8);
  CHECK(a.rule == QuadratureRule::gauss_legendre);
  CHECK(b.rule == QuadratureRule::uniform_midpoint);
  CHECK(a.nodes != b.nodes);
}

TEST_CASE("invalid grid requests are rejected") {
  CHECK_THROWS_AS(gauss_legendre_grid(1.0, 0), DomainError);
  CHECK_THROWS_AS(gauss_legendre_grid(-1.0, 8), DomainError);
  CHECK_THROWS_AS(uniform_midpoint_grid(1.0, -3), DomainError);
  CHECK_THROWS_AS(uniform_midpoint_grid(0.0, 8), DomainError);
}

TEST_CASE("non-finite integrand values raise a numerical error") {
  const FrequencyGrid g = gauss_legendre_grid(1.0, 8);
  CHECK_THROWS_AS(integrate(g, [](double t) { return t > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; }),
                  NumericalError);
}
