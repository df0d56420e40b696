#pragma once

#include <array>
#include <cstdint>

namespace degsynth {

/// Philox4x64-10 counter-based generator keyed by a 64-bit seed.
///
/// Block `n` of the stream is philox4x64_10(counter = {n + 1, 0, 0, 0},
/// key = {seed, 0}); each block yields four 64-bit words consumed in order.
/// Child streams are new generators keyed by
/// splitmix64(splitmix64(seed) + index), so a per-item stream depends only on
/// (seed, index) and never on how many items other workers have produced.
///
/// All derived distributions (uniform, normal, Poisson) are implemented here
/// rather than through <random> distributions, whose output is
/// implementation-defined.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  RandomSource child(std::uint64_t index) const;

  std::uint64_t next_u64();

  /// Uniform on [0,1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi); returns lo when lo == hi.
  double uniform(double lo, double hi);
  /// Unbiased integer in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);
  /// Consumes exactly one uniform draw regardless of p.
  bool bernoulli(double p);
  /// Standard normal via Box-Muller; the paired value is cached.
  double normal();
  /// Poisson(mean). Multiplication method for mean < 10, Hormann's PTRS
  /// transformed rejection otherwise.
  std::uint64_t poisson(double mean);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buffer_{};
  int buffer_pos_ = 4;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

/// One Philox4x64-10 block. Exposed for known-answer tests.
std::array<std::uint64_t, 4> philox4x64_10(std::array<std::uint64_t, 4> counter,
                                           std::array<std::uint64_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

/// ln(k!) from a table for k < 256 and a Stirling series beyond.
double log_factorial(std::uint64_t k);

}  // namespace degsynth
