#pragma once

#include <cstdint>

namespace hegsim {

/// SplitMix64 finalizer: the avalanche mix applied to each stream position.
/// Kept public so other language implementations can reproduce streams; the
/// frozen test vectors live in tests/ and docs/formats.md.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic 64-bit generator (SplitMix64). All randomness in the
/// library flows through this type: no ambient entropy, identical streams
/// for identical seeds on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform in [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

  /// Uniform in [0,n) by rejection; n = 0 returns 0.
  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t state_;
};

/// Seed for an independent stream: trial i of a Monte Carlo run uses
/// SplitMix64(derive_seed(master, i)). Documented alongside the generator
/// so alternate implementations reproduce entire experiments.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix64(master ^ mix64(stream + 0x9E3779B97F4A7C15ULL));
}

}  // namespace hegsim
