#pragma once

#include <cstdint>

namespace winfree {

/// SplitMix64 (Steele, Lea & Flood). State advances by 0x9E3779B97F4A7C15;
/// output mixes with the 30/27/31 shift-multiply finalizer. Used for every
/// seeded draw so outputs are reproducible bit-for-bit.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// (top 53 bits + 0.5) * 2^-53, strictly inside (0, 1).
  double uniform_open();
  /// lo + (hi − lo) * uniform_open().
  double uniform(double lo, double hi);

 private:
  std::uint64_t state_;
};

/// Seed for the k-th independent stream derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace winfree
