#include "phasereg/ecf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "phasereg/errors.hpp"

namespace phasereg {

std::complex<double> ecf(std::span<const double> sample, double t) {
  if (sample.empty()) throw DomainError("ecf: empty sample");
  if (!std::isfinite(t)) throw DomainError("ecf: non-finite frequency");
  double cs = 0.0, sn = 0.0;
  for (double x : sample) {
    cs += std::cos(t * x);
    sn += std::sin(t * x);
  }
  const double inv_n = 1.0 / static_cast<double>(sample.size());
  return {cs * inv_n, sn * inv_n};
}

std::complex<double> empirical_phase(std::span<const double> sample, double t) {
  const std::complex<double> z = ecf(sample, t);
  const double m = std::abs(z);
  if (m < kEcfModulusFloor) {
    throw DegenerateFrequencyError(
        "empirical_phase: ecf modulus " + std::to_string(m) +
            " below floor at t = " + std::to_string(t),
        t, m);
  }
  return z / m;
}

std::complex<double> empirical_phase_lincomb(const Eigen::MatrixXd& W,
                                             const Eigen::MatrixXd& Z,
                                             const Eigen::VectorXd& b1,
                                             const Eigen::VectorXd& b2, double t) {
  if (W.rows() == 0) throw DomainError("empirical_phase_lincomb: empty sample");
  if (W.cols() != b1.size()) {
    throw DomainError("empirical_phase_lincomb: W has " + std::to_string(W.cols()) +
                      " columns but b1 has " + std::to_string(b1.size()) + " entries");
  }
  if (Z.cols() != b2.size()) {
    throw DomainError("empirical_phase_lincomb: Z has " + std::to_string(Z.cols()) +
                      " columns but b2 has " + std::to_string(b2.size()) + " entries");
  }
  if (Z.cols() > 0 && Z.rows() != W.rows()) {
    throw DomainError("empirical_phase_lincomb: W and Z row counts differ");
  }
  Eigen::VectorXd v = W * b1;
  if (Z.cols() > 0) v += Z * b2;
  return empirical_phase(std::span<const double>(v.data(), v.size()), t);
}

double quantile_type7(std::span<const double> sample, double p) {
  if (sample.empty()) throw DomainError("quantile_type7: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile_type7: p outside [0, 1]");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= x.size()) return x.back();
  return x[lo] + (h - lo) * (x[lo + 1] - x[lo]);
}

double select_t_star(std::span<const double> y, const TStarScan& scan) {
  if (y.empty()) throw DomainError("select_t_star: empty sample");
  const double n = static_cast<double>(y.size());

  double t_max = scan.t_max;
  if (t_max <= 0.0) {
    const double iqr = quantile_type7(y, 0.75) - quantile_type7(y, 0.25);
    if (!(iqr > 0.0)) {
      throw TStarSelectionError(
          "select_t_star: sample interquartile range is zero; no default scan ceiling",
          0.0, 1.0);
    }
    t_max = 50.0 / iqr;
  }
  const double step = scan.step > 0.0 ? scan.step : t_max / 2048.0;

  const double threshold = std::pow(n, -0.25);
  double min_modulus = std::numeric_limits<double>::infinity();
  const auto k_max = static_cast<long>(t_max / step * (1.0 + 1e-12));
  for (long k = 1; k <= k_max; ++k) {
    const double t = k * step;
    const double m = std::abs(ecf(y, t));
    min_modulus = std::min(min_modulus, m);
    if (m <= threshold) return t;
  }
  throw TStarSelectionError(
      "select_t_star: |ecf| stayed above n^(-1/4) = " + std::to_string(threshold) +
          " up to t_max = " + std::to_string(t_max) +
          " (smallest modulus " + std::to_string(min_modulus) + ")",
      t_max, min_modulus);
}

}  // namespace phasereg
