#pragma once

// Excursion-length laws on {2, 3, ...}.
//
//   LogSquared          p_n = c / (n ln(n)^2)            n >= 2
//   LogSquaredEvenOnly  p_n = c_e / (n ln(n)^2)          n >= 2 even, 0 otherwise
//   PowerLaw            p_n = c_g / n^gamma              n >= 2, gamma > 1
//
// The logarithm is natural; any other base only rescales c.
//
// An ExcursionLaw owns a table of tail masses T(n) = P(Y > n), accumulated
// with compensated summation from the pmf. The table starts at a configured
// horizon and grows geometrically when a query falls past it. Growth is
// serialized internally and never moves existing entries, so a law can be
// shared between threads; callers that want to avoid growth on a hot path
// call reserve() first.

#include <cstdint>
#include <memory>
#include <string>
#include <variant>

#include "birkhoff/rng.hpp"

namespace birkhoff {

enum class LawKind { LogSquared, LogSquaredEvenOnly, PowerLaw };

std::string to_string(LawKind kind);

struct LawSpec {
  LawKind kind = LawKind::LogSquared;
  double gamma = 2.0;  // PowerLaw only
  std::int64_t support_floor = 2;

  static LawSpec log_squared() { return {LawKind::LogSquared, 2.0, 2}; }
  static LawSpec log_squared_even() {
    return {LawKind::LogSquaredEvenOnly, 2.0, 2};
  }
  static LawSpec power(double gamma) { return {LawKind::PowerLaw, gamma, 2}; }

  /// Throws InvalidArgument for gamma <= 1 (diverging series) or a support
  /// floor other than 2.
  void validate() const;
};

/// Normalizing constant with a certified bound.
///
/// The raw series (c = 1) is summed exactly up to `cutoff`; the remainder is
/// bracketed by the trapezoid-corrected integral with one-sided error terms,
/// valid because every raw mass function here is completely monotone.
struct Normalizer {
  double c = 0.0;
  double error_bound = 0.0;   ///< |c - c_true| <= error_bound
  std::int64_t cutoff = 0;    ///< last index summed term by term
  double raw_sum_lo = 0.0;    ///< certified bracket of the raw series
  double raw_sum_hi = 0.0;
};

/// Normalizer whose raw-sum bracket (plus summation rounding) is no wider
/// than `precision`. Precision must lie in (0, 1e-6]. Throws NumericError if
/// the precision is unreachable within the summation budget.
Normalizer normalizer(const LawSpec& spec, double precision = 1e-12);

/// Raw (c = 1) mass of n for the given spec; 0 off the support.
double raw_mass(const LawSpec& spec, std::int64_t n);

struct Completed {
  std::int64_t length;
  friend bool operator==(const Completed&, const Completed&) = default;
};
struct Survives {
  friend bool operator==(const Survives&, const Survives&) = default;
};
using ExcursionOutcome = std::variant<Completed, Survives>;

class ExcursionLaw {
 public:
  static constexpr std::int64_t kDefaultHorizon = std::int64_t{1} << 24;
  /// Largest tail table the law will grow to (8 GiB of doubles).
  static constexpr std::int64_t kMaxHorizon = std::int64_t{1} << 30;

  explicit ExcursionLaw(LawSpec spec,
                        std::int64_t initial_horizon = kDefaultHorizon,
                        double precision = 1e-12);

  const LawSpec& spec() const noexcept;
  const Normalizer& normalization() const noexcept;
  double c() const noexcept { return normalization().c; }

  double pmf(std::int64_t n) const;
  /// P(Y > s). Extends the table when s is past the current horizon.
  double tail(std::int64_t s) const;
  double cdf(std::int64_t s) const { return 1.0 - tail(s); }
  /// q_n = p_{n+1} / T(n): probability that the walk on N jumps from height
  /// n back to 0.
  double hazard(std::int64_t n) const;

  /// Ensure the tail table covers [0, n]. Throws CapacityError past kMaxHorizon.
  void reserve(std::int64_t n) const;
  /// Number of tail entries currently tabulated.
  std::int64_t horizon() const noexcept;

  /// Excursion length censored at `horizon`: Survives with probability
  /// T(horizon), otherwise Completed(l) with l <= horizon drawn from the law
  /// conditioned on Y <= horizon. One uniform draw, one binary search.
  ExcursionOutcome sample_truncated(std::int64_t horizon,
                                    RandomStream& rng) const;

 private:
  struct Table;
  std::shared_ptr<Table> table_;
};

}  // namespace birkhoff
