#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace xorlab {

/// splitmix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

/// Per-trial seed: the (index+1)-th output of a splitmix64 stream started at
/// `master`. Streams for distinct indices are statistically independent.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master + 0x9E3779B97F4A7C15ULL * (index + 1));
}

/// Counter-based hash of a tuple of words; used where a value must be a pure
/// function of its coordinates (e.g. entries of an infinite coefficient matrix).
constexpr std::uint64_t hash_words(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                   std::uint64_t d = 0) noexcept {
  std::uint64_t h = mix64(a ^ 0x243F6A8885A308D3ULL);
  h = mix64(h ^ (b + 0x13198A2E03707344ULL));
  h = mix64(h ^ (c + 0xA4093822299F31D0ULL));
  return mix64(h ^ (d + 0x082EFA98EC4E6C89ULL));
}

/// Reproducible random source. Wraps std::mt19937_64 (whose output sequence is
/// fixed by the standard) and derives every distribution from raw 64-bit draws
/// so that streams do not depend on the standard library's distribution code.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). Rejection on the top partial block; one draw
  /// except with probability < n / 2^64.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % n;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Poisson variate. Inversion for mean <= 30, otherwise Hormann's PTRS
  /// transformed rejection. The switch point affects stream consumption.
  std::uint64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    if (mean <= 30.0) return poisson_inversion(mean);
    return poisson_ptrs(mean);
  }

 private:
  std::uint64_t poisson_inversion(double mean) {
    const double u = uniform01();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t x = 0;
    while (u > cdf && x < 10000) {
      ++x;
      p *= mean / static_cast<double>(x);
      cdf += p;
    }
    return x;
  }

  std::uint64_t poisson_ptrs(double mean) {
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      const double u = uniform01() - 0.5;
      const double v = uniform01();
      const double us = 0.5 - std::fabs(u);
      const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
      if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
      if (k < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
          -mean + k * loglam - std::lgamma(k + 1.0)) {
        return static_cast<std::uint64_t>(k);
      }
    }
  }

  std::mt19937_64 engine_;
};

}  // namespace xorlab
