#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

namespace phasereg {

// Modulus below which phase normalization refuses to divide.
inline constexpr double kEcfModulusFloor = 1e-8;

// Empirical characteristic function (n^-1 sum cos(t x_j), n^-1 sum sin(t x_j)).
std::complex<double> ecf(std::span<const double> sample, double t);

// ecf divided by its modulus; throws DegenerateFrequencyError below the floor.
std::complex<double> empirical_phase(std::span<const double> sample, double t);

// Phase of the derived sample v_j = W_j . b1 + Z_j . b2 at frequency t.
// The normalizing modulus equals the square root of the double sum
// sum_{j,k} exp(i t (v_j - v_k)) / n^2, which is |sum_j exp(i t v_j)|^2 / n^2
// exactly (z conj(z) = |z|^2), so it is computed in the single-sum form.
std::complex<double> empirical_phase_lincomb(const Eigen::MatrixXd& W,
                                             const Eigen::MatrixXd& Z,
                                             const Eigen::VectorXd& b1,
                                             const Eigen::VectorXd& b2, double t);

// Type-7 quantile of a sample (linear interpolation of order statistics).
double quantile_type7(std::span<const double> sample, double p);

// Scan parameters for the truncation-frequency search.
struct TStarScan {
  double step = 0.0;   // grid spacing; 0 requests the default t_max / 2048
  double t_max = 0.0;  // scan ceiling; 0 requests the default 50 / IQR(y)
};

// Smallest grid frequency k * step with |ecf(y, k * step)| <= n^(-1/4).
// Throws TStarSelectionError (carrying t_max and the smallest modulus seen)
// if the threshold is never crossed by t_max.
double select_t_star(std::span<const double> y, const TStarScan& scan = {});

}  // namespace phasereg
