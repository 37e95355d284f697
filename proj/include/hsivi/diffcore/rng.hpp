#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hsivi::diffcore {

// Deterministic RNG built on std::mt19937_64 (the engine is fully specified by
// the standard, so streams are reproducible across compilers). Gaussians use a
// cache-free Box-Muller so the draw count per call is fixed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed), seed_(seed) {}

  // Uniform in [0, 1) with 53 bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) {
    // Rejection keeps the distribution exact.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v = eng_();
    while (v >= limit) v = eng_();
    return v % n;
  }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], avoids log(0)
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Derives an independent stream; use distinct tags per purpose.
  Rng fork(uint64_t tag) const { return Rng(splitmix(seed_ ^ splitmix(tag))); }

  static uint64_t splitmix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::mt19937_64 eng_;
  uint64_t seed_;
};

}  // namespace hsivi::diffcore
