#pragma once

#include <cstdint>
#include <random>

namespace steklov {

// Seeded generator with a portable double mapping (53 high bits), so sequences match across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  // Integer in [lo, hi].
  int integer(int lo, int hi) {
    return lo + static_cast<int>(uniform() * (hi - lo + 1)) % (hi - lo + 1);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace steklov
