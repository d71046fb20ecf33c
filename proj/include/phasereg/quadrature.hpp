#pragma once

#include <functional>
#include <vector>

namespace phasereg {

enum class QuadratureRule { gauss_legendre, uniform_midpoint };

// Discretization of the frequency interval (0, t_star]: strictly increasing
// interior nodes with positive weights summing to t_star.
struct FrequencyGrid {
  double t_star = 0.0;
  QuadratureRule rule = QuadratureRule::gauss_legendre;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

// Gauss-Legendre nodes/weights mapped from [-1, 1] onto [0, t_star].
FrequencyGrid gauss_legendre_grid(double t_star, int n_nodes);

// Composite midpoint rule: nodes (k - 1/2) * t_star / n, equal weights.
// Equally spaced nodes admit the complex-rotation recurrence used by the
// objective evaluator's fast path.
FrequencyGrid uniform_midpoint_grid(double t_star, int n_nodes);

FrequencyGrid make_grid(QuadratureRule rule, double t_star, int n_nodes);

// sum_k w_k f(t_k); throws NumericalError naming the node if f is non-finite.
double integrate(const FrequencyGrid& grid, const std::function<double(double)>& f);

}  // namespace phasereg
