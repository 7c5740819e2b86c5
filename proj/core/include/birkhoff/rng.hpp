#pragma once

#include <cstdint>
#include <random>

namespace birkhoff {

/// Deterministic random stream. Substreams are keyed by (seed, index) through
/// std::seed_seq, so the stream for index 0 does not depend on how many
/// other substreams exist. Uniform and normal variates are produced by
/// explicit formulas rather than std:: distributions, whose output is
/// implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t index = 0);

  /// Uniform double on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double on (0, 1].
  double uniform_open_zero() noexcept { return 1.0 - uniform(); }

  /// Standard normal variate (Box-Muller, pairs cached).
  double normal() noexcept;

  std::uint64_t next_u64() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace birkhoff
