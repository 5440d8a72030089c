#pragma once

#include <cstdint>

namespace lfsr {

// Counter-based generator: draw n of a stream is splitmix64(seed + (n + 1) * 0x9E3779B97F4A7C15),
// i.e. the SplitMix64 finalizer applied to a Weyl sequence. Any draw is addressable from
// (seed, counter) alone, which makes streams reproducible across implementations.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) : seed_(seed), counter_(counter) {}

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() noexcept { return mix(seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n) by rejection (unbiased).
  std::uint64_t below(std::uint64_t n) noexcept;
  // Standard normal via Box-Muller; consumes exactly two draws per call.
  double normal() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace lfsr
