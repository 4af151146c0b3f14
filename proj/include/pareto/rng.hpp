// SplitMix64: tiny deterministic generator with identical output on every
// platform, used wherever reproducible pseudo-random data is needed.
#pragma once

#include <cstdint>

namespace pareto {

struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    state += 0x9E3779B97f4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }  // [0,1)
  double symmetric() { return 2.0 * uniform() - 1.0; }                            // (-1,1)
};

}  // namespace pareto
