#include "phasereg/kernels.hpp"

#include <cmath>

#include "phasereg/errors.hpp"

namespace phasereg {

WeightKernelKind parse_kernel(const std::string& name) {
  if (name == "k1") return WeightKernelKind::k1;
  if (name == "k2") return WeightKernelKind::k2;
  if (name == "k3") return WeightKernelKind::k3;
  throw ConfigError("unknown weight kernel '" + name + "' (expected k1, k2, or k3)");
}

std::string kernel_name(WeightKernelKind kind) {
  switch (kind) {
    case WeightKernelKind::k1: return "k1";
    case WeightKernelKind::k2: return "k2";
    case WeightKernelKind::k3: return "k3";
  }
  throw DomainError("kernel_name: invalid kernel kind");
}

double kernel_weight(WeightKernelKind kind, double t, double t_star) {
  if (!(t_star > 0.0)) throw DomainError("kernel_weight: t_star must be > 0");
  const double u = std::abs(t / t_star);
  if (u >= 1.0) return 0.0;
  switch (kind) {
    case WeightKernelKind::k1: return (1.0 - u) * (1.0 - u);
    case WeightKernelKind::k2: return 1.0 - u;
    case WeightKernelKind::k3: return 1.0 - u * u;
  }
  throw DomainError("kernel_weight: invalid kernel kind");
}

double phi_K_on_grid(WeightKernelKind kind, const FrequencyGrid& half_grid, double alpha) {
  const double h = half_grid.t_star;
  double acc = 0.0;
  for (std::size_t k = 0; k < half_grid.size(); ++k) {
    const double t = half_grid.nodes[k];
    acc += half_grid.weights[k] * std::cos(alpha * t) * kernel_weight(kind, t, h);
  }
  return 2.0 * acc;
}

double phi_K(WeightKernelKind kind, double h, double alpha, int n_nodes) {
  return phi_K_on_grid(kind, gauss_legendre_grid(h, n_nodes), alpha);
}

WeightSpec make_weight_spec(WeightKernelKind kernel, double t_star, int n_nodes,
                            QuadratureRule rule) {
  WeightSpec spec;
  spec.kernel = kernel;
  spec.grid = make_grid(rule, t_star, n_nodes);
  return spec;
}

}  // namespace phasereg
