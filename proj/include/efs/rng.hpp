#pragma once

#include <cstdint>

namespace efs {

/// SplitMix64 generator. The algorithm is fixed so that every seeded run is
/// reproducible across platforms and standard libraries:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// Construction mixes the user seed once through the same finalizer, and
/// derive(seed, i) gives an independent child seed for stream i.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed)) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix(state_);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1]; safe as a log argument.
  double uniform_open_low() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection (no modulo bias). bound > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal via the Box-Muller transform; the second variate of
  /// each pair is cached.
  double normal();

  /// Child seed for stream `index`; a pure function of (seed, index).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    return mix(mix(seed) ^ mix(index * kGolden + 0x632BE59BD9B4E019ULL));
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace efs
