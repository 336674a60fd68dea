#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hbart {

// Seeded random stream with the handful of draws the samplers need.
// All algorithms are spelled out here (no std:: distributions) so that a
// given seed produces the same stream on every platform and compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed), seed_mix_(seed) {}

  // uniform on [0,1), 53-bit resolution
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // uniform integer in {0,...,n-1}, n >= 1, rejection sampled (no modulo bias)
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = eng_();
    } while (r >= lim);
    return r % n;
  }

  // standard normal, Marsaglia polar method with one cached spare
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  // gamma(shape, scale 1), Marsaglia-Tsang; shape < 1 boosted via U^(1/a)
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = 1.0 - uniform();  // in (0,1]
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = 1.0 - uniform();  // in (0,1], log-safe
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

  double chi_squared(double df) { return 2.0 * gamma(0.5 * df); }

  // scaled inverse chi-squared: nu*scale/X with X ~ chi2(nu)
  double scaled_inv_chi_squared(double nu, double scale) {
    return nu * scale / chi_squared(nu);
  }

  // independent substream for parallel work (CV cells, chains)
  Rng spawn(std::uint64_t stream) const {
    return Rng(splitmix64(seed_mix_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
  }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::mt19937_64 eng_;
  std::uint64_t seed_mix_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hbart
