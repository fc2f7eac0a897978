#pragma once

#include <cstdint>

namespace spikegraph {

// splitmix64 finalizer. Bijective on 64-bit words.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based uniform source: uniform(t, j) is a pure function of
// (seed, t, j), so any subset of the variates can be regenerated in any
// order. Two processes driven by the same seed see identical noise, which
// is what the coupling construction requires.
class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t seed)
      : key_(mix64(seed ^ 0xA5A5A5A55A5A5A5AULL)) {}

  [[nodiscard]] constexpr std::uint64_t word(std::uint64_t t,
                                             std::uint64_t j) const {
    return mix64(mix64(key_ ^ t) ^ j);
  }

  // Uniform on [0, 1) with 53 random bits, so 0 is possible and 1 is not.
  // The spike rule "spike iff U <= phi" together with phi >= p_star > 0
  // keeps the boundary cases harmless.
  [[nodiscard]] constexpr double uniform(std::uint64_t t,
                                         std::uint64_t j) const {
    return static_cast<double>(word(t, j) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

}  // namespace spikegraph
