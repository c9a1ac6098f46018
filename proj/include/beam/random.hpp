#pragma once

#include <cstdint>

namespace beam {

/// splitmix64: 64-bit state advanced by the golden-ratio increment, output
/// mixed by two xor-shift-multiply rounds. Identical streams on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next();

  /// Uniform on [0, 1) with 53 random bits.
  double Uniform();

  /// Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace beam
