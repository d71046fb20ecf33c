#include "phasereg/quadrature.hpp"

#include <cmath>
#include <string>

#include "phasereg/errors.hpp"

namespace phasereg {

namespace {

void check_grid_args(double t_star, int n_nodes) {
  if (!(t_star > 0.0) || !std::isfinite(t_star)) {
    throw DomainError("frequency grid: t_star must be finite and > 0");
  }
  if (n_nodes < 1) throw DomainError("frequency grid: need at least one node");
}

}  // namespace

FrequencyGrid gauss_legendre_grid(double t_star, int n_nodes) {
  check_grid_args(t_star, n_nodes);
  FrequencyGrid g;
  g.t_star = t_star;
  g.rule = QuadratureRule::gauss_legendre;
  g.nodes.resize(n_nodes);
  g.weights.resize(n_nodes);

  // Newton iteration on the Legendre polynomial roots; nodes are symmetric
  // about the interval midpoint so only half need solving.
  const double eps = 1e-14;
  const int n = n_nodes;
  const double xm = 0.5 * t_star;
  const double xl = 0.5 * t_star;
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= eps) break;
    }
    // z descends from +1; store ascending on [0, t_star].
    g.nodes[i] = xm - xl * z;
    g.nodes[n - 1 - i] = xm + xl * z;
    const double w = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    g.weights[i] = w;
    g.weights[n - 1 - i] = w;
  }
  return g;
}

FrequencyGrid uniform_midpoint_grid(double t_star, int n_nodes) {
  check_grid_args(t_star, n_nodes);
  FrequencyGrid g;
  g.t_star = t_star;
  g.rule = QuadratureRule::uniform_midpoint;
  g.nodes.resize(n_nodes);
  g.weights.resize(n_nodes);
  const double h = t_star / n_nodes;
  for (int k = 0; k < n_nodes; ++k) {
    g.nodes[k] = (k + 0.5) * h;
    g.weights[k] = h;
  }
  return g;
}

FrequencyGrid make_grid(QuadratureRule rule, double t_star, int n_nodes) {
  return rule == QuadratureRule::gauss_legendre
             ? gauss_legendre_grid(t_star, n_nodes)
             : uniform_midpoint_grid(t_star, n_nodes);
}

double integrate(const FrequencyGrid& grid, const std::function<double(double)>& f) {
  if (grid.size() == 0) throw DomainError("integrate: empty frequency grid");
  double acc = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double v = f(grid.nodes[k]);
    if (!std::isfinite(v)) {
      throw NumericalError("integrate: non-finite integrand at node t = " +
                           std::to_string(grid.nodes[k]));
    }
    acc += grid.weights[k] * v;
  }
  return acc;
}

}  // namespace phasereg
