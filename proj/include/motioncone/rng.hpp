#pragma once

#include <cstdint>
#include <random>

namespace motioncone {

// 64-bit Mersenne Twister (std::mt19937_64). Uniform variates take the top 53
// bits of each draw, so sequences match any other MT19937-64 implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace motioncone
