#pragma once

#include <cstdint>
#include <random>

namespace qdi {

// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Per-item sub-seed: splitmix64(seed ^ splitmix64(index)). Independent of
// evaluation order, so parallel generation reproduces the serial stream.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(seed ^ splitmix64(index));
}

// std::mt19937_64 is bit-specified by the standard; the std distributions are
// not, so the draws below are spelled out to stay identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi]; returns lo when lo == hi.
  double uniform(double lo, double hi);

  // Uniform integer in [0, n) by rejection; n >= 1.
  std::uint64_t below(std::uint64_t n);

  // Box-Muller, one variate per call (the partner is discarded).
  double normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
};

}  // namespace qdi
