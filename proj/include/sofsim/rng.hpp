#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace sofsim {

// Seeded random stream. All sampling routines are written out explicitly
// (instead of std::*_distribution) so that a given seed produces the same
// sequence on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on {0, ..., bound-1}, unbiased via rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::next_below: empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t u;
    do {
      u = engine_();
    } while (u >= limit);
    return u % bound;
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Exponential waiting time with the given rate.
  double next_exponential(double rate) {
    // 1 - next_unit() lies in (0, 1], so the log is finite.
    return -std::log(1.0 - next_unit()) / rate;
  }

  // Index into a normalized probability table by inverse CDF.
  std::size_t sample_discrete(std::span<const double> probabilities) {
    const double u = next_unit();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probabilities.size(); ++i) {
      acc += probabilities[i];
      if (u < acc) return i;
    }
    return probabilities.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from a base seed and a stream index
// (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace sofsim
