#pragma once

#include <cstdint>

namespace reluland {

/// SplitMix64 used as a counter-based generator: the k-th output of stream
/// `seed` is mix(seed + (k + 1) * 0x9E3779B97F4A7C15). Outputs are identical on
/// every platform, which keeps seeded experiments reproducible bit for bit.
class SplitMix64 {
 public:
  static constexpr const char* kName = "splitmix64-v1";

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal by the Box-Muller transform (both outputs are used).
  double normal() noexcept;
  double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace reluland
