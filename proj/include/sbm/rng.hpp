#pragma once

#include <cstdint>

namespace sbm {

// Counter-based generator (SplitMix64). State advances by a fixed odd
// constant, so the k-th output is a pure function of (seed, k) and the
// stream is reproducible across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform integer in [0, bound) via rejection-free multiply-shift.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(next_double() * static_cast<double>(bound));
  }

 private:
  std::uint64_t state_;
};

// Derives an independent stream for sub-task `index` of a master seed.
// Trial t of a Monte-Carlo run uses derive_stream(master_seed, t), so
// trials can execute in any order (or in parallel) with identical results.
inline std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t index) {
  SplitMix64 g(master_seed ^ (0xA0761D6478BD642FULL * (index + 1)));
  g.next_u64();
  return g.next_u64();
}

}  // namespace sbm
