#pragma once

#include <cstdint>

namespace phasereg {

// Counter-based random stream: stream k of a master seed is an independent
// SplitMix64 sequence whose initial state is derived by hashing (seed, k).
// Replicate k of a run therefore gets the same draws regardless of how many
// other replicates ran before it or on which thread.
//
// Variate algorithms (fixed so that the streams can be replicated elsewhere):
//   uniform      u = (next() >> 11) * 2^-53              in [0,1)
//   uniform_open u = ((next() >> 11) + 0.5) * 2^-53      in (0,1)
//   normal       Marsaglia polar method, pairs cached
//   exponential  -log(u), u in (0,1)
//   cauchy       gamma * tan(pi * (u - 1/2))
//   laplace      inverse CDF: b*log(2u) for u<1/2, -b*log(2(1-u)) otherwise
//   student_t    normal / sqrt(chi_square(nu)/nu), chi_square via gamma(nu/2)*2
//   gamma        Marsaglia-Tsang squeeze (shape >= 1)
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double uniform();       // [0, 1)
  double uniform_open();  // (0, 1)
  double normal();
  double exponential();                // mean 1
  double cauchy(double gamma);         // scale parameter gamma
  double laplace(double b);            // scale parameter b
  double student_t(double nu);         // nu > 2 supported
  double gamma_variate(double shape);  // shape >= 1, scale 1

 private:
  std::uint64_t state_;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// SplitMix64 output function; also used as the seed/stream mixer.
std::uint64_t splitmix64(std::uint64_t& state);

// Hashes (seed, tag, index) into a fresh seed for a nested generator, so an
// inner consumer (an optimizer's own multi-start draws, say) never shares a
// stream with the outer replicate loop.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index);

// Inverse standard normal CDF (Wichura's AS241 rational approximation),
// accurate to ~1e-15 over (0, 1).
double normal_quantile(double p);

}  // namespace phasereg
