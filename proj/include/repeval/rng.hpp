#pragma once

#include <cstdint>
#include <vector>

namespace repeval {

// Deterministic RNG with a fixed cross-platform bit stream (the standard
// library distributions are not bit-stable across implementations, and
// every generator here must reproduce byte-identical artifacts).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double();

  // Uniform integer in [0, bound) by rejection sampling (no modulo bias).
  std::uint64_t next_below(std::uint64_t bound);

  // Standard normal via Box-Muller (both values used).
  double next_gaussian();

  // Fisher-Yates permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace repeval
