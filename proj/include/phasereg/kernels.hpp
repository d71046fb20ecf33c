#pragma once

#include <string>

#include "phasereg/quadrature.hpp"

namespace phasereg {

// Weight kernels on [-1, 1], evaluated at u = t / t_star:
//   k1: (1 - |u|)^2      k2: 1 - |u|      k3: 1 - u^2
// all zero outside [-1, 1]. k1 is the default.
enum class WeightKernelKind { k1, k2, k3 };

WeightKernelKind parse_kernel(const std::string& name);  // "k1" | "k2" | "k3"
std::string kernel_name(WeightKernelKind kind);

// K(t / t_star), zero outside |t| <= t_star.
double kernel_weight(WeightKernelKind kind, double t, double t_star);

// phi_K(alpha | h) = integral over [-h, h] of cos(alpha t) K(t / h) dt,
// computed as 2 * integral over [0, h] by evenness, on a Gauss-Legendre grid.
double phi_K(WeightKernelKind kind, double h, double alpha, int n_nodes = 128);

// Same integral with a caller-supplied half-interval grid on [0, h]; lets the
// quadruple-sum objective reuse one grid across its O(n^4) evaluations.
double phi_K_on_grid(WeightKernelKind kind, const FrequencyGrid& half_grid, double alpha);

// Kernel kind plus the frequency grid it weights. The grid carries plain
// quadrature weights; consumers fold in K(t_k / t_star) when they accumulate,
// so one spec serves integrands with different powers of t.
struct WeightSpec {
  WeightKernelKind kernel = WeightKernelKind::k1;
  FrequencyGrid grid;
};

WeightSpec make_weight_spec(WeightKernelKind kernel, double t_star, int n_nodes = 128,
                            QuadratureRule rule = QuadratureRule::gauss_legendre);

}  // namespace phasereg
