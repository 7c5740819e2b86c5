#pragma once

// Exact finite-n renewal computations for an excursion law.
//
// u[s] = P(some partial sum Y_1 + ... + Y_j equals s), u[0] = 1, obeys
//
//     u[s] = sum_{k=2}^{s} p_k u[s-k]
//
// and the height of the walk at time n (steps since the last visit to 0)
// factorizes as P(h_n = k) = T(k) u[n-k].

#include <cstdint>
#include <span>
#include <vector>

#include "birkhoff/excursion_law.hpp"

namespace birkhoff {

struct RenewalBudget {
  /// Ceiling on N^2 / 2, the number of multiply-adds of the recursion.
  double max_operations = 2.5e10;
};

class RenewalTable {
 public:
  /// Direct O(N^2) convolution with compensated summation. Throws
  /// CapacityError when N^2 / 2 exceeds the budget.
  RenewalTable(ExcursionLaw law, std::int64_t horizon, RenewalBudget budget = {});

  const ExcursionLaw& law() const noexcept { return law_; }
  std::int64_t horizon() const noexcept { return static_cast<std::int64_t>(u_.size()) - 1; }
  std::span<const double> masses() const noexcept { return u_; }
  double u(std::int64_t s) const;

 private:
  ExcursionLaw law_;
  std::vector<double> u_;
};

RenewalTable renewal_masses(const ExcursionLaw& law, std::int64_t horizon,
                            RenewalBudget budget = {});

struct HeightDistribution {
  std::int64_t n = 0;
  std::vector<double> probs;  ///< probs[k] = P(h_n = k), k in [0, n]
};

/// Throws OutOfHorizon if n > table.horizon().
HeightDistribution height_distribution(const RenewalTable& table, std::int64_t n);

/// sum_{k=0}^{n} T(k) u[n-k] - 1. Zero in exact arithmetic for every n.
double completeness_defect(const RenewalTable& table, std::int64_t n);

/// P(h_n in [n - n^beta, n)) = sum_{k=ceil(n - n^beta)}^{n-1} P(h_n = k).
/// beta = 1 is accepted as the closed-window limit [0, n).
double window_mass(const RenewalTable& table, std::int64_t n, double beta);

/// u[s] T(s)^2 / p_s; tends to 1 for the log-squared law. Throws
/// InvalidArgument where p_s = 0.
double nagaev_ratio(const RenewalTable& table, std::int64_t s);

/// For each threshold t, P(exp(h_n^alpha - n^alpha) <= t): the exact law of
/// the last-excursion term of the normalized Birkhoff sum.
///
/// When n <= table.horizon() the height law is summed directly. Larger n are
/// accepted as long as the table covers every height whose term exceeds the
/// smallest threshold: those heights k satisfy n - k <= horizon, and the
/// remaining mass follows from sum_k P(h_n = k) = 1. Otherwise OutOfHorizon.
std::vector<double> dominant_ratio_law(const RenewalTable& table, std::int64_t n,
                                       double alpha, std::span<const double> thresholds);

}  // namespace birkhoff
