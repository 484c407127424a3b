#pragma once

#include <cstdint>
#include <random>

namespace bwesg {

/// Seeded generator used everywhere randomness is consumed.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Bounded integers and reals are derived here rather than through
/// the <random> distributions, whose algorithms are implementation-defined, so
/// a given seed yields the same stream on every platform and toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection sampling: discard the low residue class so r % n is unbiased.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform real in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

/// Per-item seed derivation: seed XOR ordinal.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t ordinal) {
  return seed ^ ordinal;
}

}  // namespace bwesg
