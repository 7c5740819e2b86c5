#include "birkhoff/renewal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "birkhoff/error.hpp"
#include "birkhoff/observables.hpp"

namespace birkhoff {
namespace {

// Compensated dot product over four independent lanes (TwoSum per term).
// Lanes keep the compensation order fixed, so results do not depend on the
// vector width the compiler picks.
double compensated_dot(const double* a, const double* b, std::int64_t len) {
  constexpr int kLanes = 4;
  std::array<double, kLanes> sum{};
  std::array<double, kLanes> err{};
  std::int64_t i = 0;
  for (; i + kLanes <= len; i += kLanes) {
    for (int l = 0; l < kLanes; ++l) {
      const double x = a[i + l] * b[i + l];
      const double t = sum[l] + x;
      const double bp = t - sum[l];
      err[l] += (sum[l] - (t - bp)) + (x - bp);
      sum[l] = t;
    }
  }
  for (; i < len; ++i) {
    const double x = a[i] * b[i];
    const double t = sum[0] + x;
    const double bp = t - sum[0];
    err[0] += (sum[0] - (t - bp)) + (x - bp);
    sum[0] = t;
  }
  double total = 0.0;
  double total_err = 0.0;
  for (int l = 0; l < kLanes; ++l) {
    const double t = total + sum[l];
    const double bp = t - total;
    total_err += (total - (t - bp)) + (sum[l] - bp) + err[l];
    total = t;
  }
  return total + total_err;
}

void require_in_horizon(const RenewalTable& table, std::int64_t n, const char* what) {
  if (n < 0) throw InvalidArgument(std::string(what) + ": n must be >= 0");
  if (n > table.horizon()) {
    throw OutOfHorizon(std::string(what) + ": n = " + std::to_string(n) +
                       " exceeds table horizon " + std::to_string(table.horizon()));
  }
}

// Smallest k with k >= n - n^beta, i.e. n - floor(n^beta), treating values of
// n^beta within rounding of an integer as that integer.
std::int64_t window_start(std::int64_t n, double beta) {
  const double width = std::pow(static_cast<double>(n), beta);
  double whole = std::floor(width);
  if (whole + 1.0 - width <= 1e-9 * std::max(1.0, width)) whole += 1.0;
  return std::max<std::int64_t>(0, n - static_cast<std::int64_t>(whole));
}

}  // namespace

RenewalTable::RenewalTable(ExcursionLaw law, std::int64_t horizon, RenewalBudget budget)
    : law_(std::move(law)) {
  if (horizon < 0) throw InvalidArgument("renewal_masses: horizon must be >= 0");
  const double work = 0.5 * static_cast<double>(horizon) * static_cast<double>(horizon);
  if (work > budget.max_operations) {
    throw CapacityError("renewal_masses: N = " + std::to_string(horizon) +
                        " needs ~" + std::to_string(work) +
                        " multiply-adds, over the configured budget; lower N");
  }
  law_.reserve(horizon);
  const auto n = static_cast<std::size_t>(horizon);
  // Reversed pmf: rev[n - m] = p_m, so rev[(n - s) + j] = p_{s-j} and the
  // inner product walks both arrays forward.
  std::vector<double> rev(n + 1, 0.0);
  for (std::size_t m = 0; m <= n; ++m) rev[n - m] = law_.pmf(static_cast<std::int64_t>(m));
  u_.assign(n + 1, 0.0);
  u_[0] = 1.0;
  for (std::size_t s = 2; s <= n; ++s) {
    // u[s] = sum_{j=0}^{s-2} u[j] p_{s-j}
    u_[s] = compensated_dot(u_.data(), rev.data() + (n - s),
                            static_cast<std::int64_t>(s - 1));
  }
}

double RenewalTable::u(std::int64_t s) const {
  if (s < 0 || s > horizon()) {
    throw OutOfHorizon("renewal mass index " + std::to_string(s) + " outside [0, " +
                       std::to_string(horizon()) + "]");
  }
  return u_[static_cast<std::size_t>(s)];
}

RenewalTable renewal_masses(const ExcursionLaw& law, std::int64_t horizon,
                            RenewalBudget budget) {
  return RenewalTable(law, horizon, budget);
}

HeightDistribution height_distribution(const RenewalTable& table, std::int64_t n) {
  require_in_horizon(table, n, "height_distribution");
  HeightDistribution out;
  out.n = n;
  out.probs.resize(static_cast<std::size_t>(n) + 1);
  const auto u = table.masses();
  for (std::int64_t k = 0; k <= n; ++k) {
    out.probs[static_cast<std::size_t>(k)] =
        table.law().tail(k) * u[static_cast<std::size_t>(n - k)];
  }
  return out;
}

double completeness_defect(const RenewalTable& table, std::int64_t n) {
  require_in_horizon(table, n, "completeness_defect");
  const auto u = table.masses();
  double sum = 0.0;
  double err = 0.0;
  for (std::int64_t k = 0; k <= n; ++k) {
    const double x = table.law().tail(k) * u[static_cast<std::size_t>(n - k)];
    const double t = sum + x;
    const double bp = t - sum;
    err += (sum - (t - bp)) + (x - bp);
    sum = t;
  }
  return (sum - 1.0) + err;
}

double window_mass(const RenewalTable& table, std::int64_t n, double beta) {
  require_in_horizon(table, n, "window_mass");
  if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("window_mass: beta must lie in (0, 1]");
  const std::int64_t first = beta == 1.0 ? 0 : window_start(n, beta);
  const auto u = table.masses();
  double mass = 0.0;
  for (std::int64_t k = first; k < n; ++k) {
    mass += table.law().tail(k) * u[static_cast<std::size_t>(n - k)];
  }
  return mass;
}

double nagaev_ratio(const RenewalTable& table, std::int64_t s) {
  if (s < 2) throw InvalidArgument("nagaev_ratio: s must be >= 2");
  require_in_horizon(table, s, "nagaev_ratio");
  const double p = table.law().pmf(s);
  if (p == 0.0) {
    throw InvalidArgument("nagaev_ratio: p_s = 0 at s = " + std::to_string(s) +
                          "; ratio undefined");
  }
  const double t = table.law().tail(s);
  return table.u(s) * t * t / p;
}

std::vector<double> dominant_ratio_law(const RenewalTable& table, std::int64_t n,
                                       double alpha, std::span<const double> thresholds) {
  require_alpha(alpha);
  if (n < 0) throw InvalidArgument("dominant_ratio_law: n must be >= 0");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0)) throw InvalidArgument("dominant_ratio_law: thresholds must be positive");
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      throw InvalidArgument("dominant_ratio_law: thresholds must be increasing");
    }
  }
  const ExcursionLaw& law = table.law();
  const auto u = table.masses();
  std::vector<double> out;
  out.reserve(thresholds.size());

  if (n <= table.horizon()) {
    for (const double t : thresholds) {
      const double log_t = std::log(t);
      double mass = 0.0;
      for (std::int64_t k = 0; k <= n; ++k) {
        if (log_height_ratio(k, n, alpha) <= log_t) {
          mass += law.tail(k) * u[static_cast<std::size_t>(n - k)];
        }
      }
      out.push_back(mass);
    }
    return out;
  }

  // Heights with exp(k^a - n^a) > t form an interval (k_t, n]; sum it and
  // take the complement.
  for (const double t : thresholds) {
    const double log_t = std::log(t);
    if (log_t >= 0.0) {
      out.push_back(1.0);
      continue;
    }
    double upper = 0.0;
    for (std::int64_t k = n; k >= 0; --k) {
      if (log_height_ratio(k, n, alpha) <= log_t) break;
      if (n - k > table.horizon()) {
        throw OutOfHorizon("dominant_ratio_law: threshold " + std::to_string(t) +
                           " at n = " + std::to_string(n) + " needs renewal masses past " +
                           std::to_string(table.horizon()));
      }
      upper += law.tail(k) * u[static_cast<std::size_t>(n - k)];
    }
    out.push_back(1.0 - upper);
  }
  return out;
}

}  // namespace birkhoff
