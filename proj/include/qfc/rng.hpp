#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace qfc {

/// Deterministic counter-based generator (SplitMix64). The state is a plain
/// 64-bit counter advanced by a fixed odd increment; each output is a bijective
/// hash of the counter, so distinct seeds give statistically independent
/// sequences.
///
/// Substream contract: `Rng::substream(master, tag)` seeds a generator from a
/// double application of the finalizer over (master, tag). Every simulation
/// element draws from its own tagged substream, so adding or removing an
/// element never shifts the draws seen by any other element. This is what
/// makes paired runs with common random numbers meaningful.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static Rng substream(std::uint64_t master_seed, std::uint64_t tag) {
    return Rng(mix64(master_seed ^ mix64(tag)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double next_real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double next_real01_open() { return 1.0 - next_real01(); }

  /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  bool next_bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return next_real01() < p;
  }

  /// Standard normal via Box-Muller; the second deviate is cached.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_real01_open();
    const double u2 = next_real01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Exponential deviate with the given mean.
  double next_exponential(double mean) { return -mean * std::log(next_real01_open()); }

  /// Bose-Einstein (single-mode thermal) photon number with mean mu.
  std::uint64_t next_thermal(double mu) {
    if (mu <= 0.0) return 0;
    const double q = mu / (1.0 + mu);  // P(n) = (1-q) q^n
    const double u = next_real01_open();
    return static_cast<std::uint64_t>(std::floor(std::log(u) / std::log(q)));
  }

  /// Poisson count by Knuth's product method; intended for small means.
  std::uint64_t next_poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::uint64_t n = 0;
    double prod = next_real01_open();
    while (prod > limit) {
      ++n;
      prod *= next_real01_open();
    }
    return n;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qfc
