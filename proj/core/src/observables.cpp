#include "birkhoff/observables.hpp"

#include <cmath>
#include <string>

#include "birkhoff/error.hpp"

namespace birkhoff {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("alpha must lie strictly inside (0, 1), got " + std::to_string(alpha));
  }
}

ObservableSpec::ObservableSpec(double alpha, ObservableVariant variant)
    : alpha_(alpha), variant_(variant) {
  require_alpha(alpha);
}

double log_height_ratio(std::int64_t k, std::int64_t n, double alpha) {
  if (k == n) return 0.0;
  if (n == 0) return std::pow(static_cast<double>(k), alpha);
  const auto nd = static_cast<double>(n);
  const double rel = static_cast<double>(k - n) / nd;
  // n^a ((1 + rel)^a - 1)
  return std::pow(nd, alpha) * std::expm1(alpha * std::log1p(rel));
}

SignedLog step_value(std::int64_t j, double alpha) {
  if (j < 0) throw InvalidArgument("step_value: j must be >= 0");
  const double upper = std::pow(static_cast<double>(j + 1), alpha);
  // gap = j^a - (j+1)^a < 0
  const double gap = -log_height_ratio(j + 1, j, alpha);
  return SignedLog::from_log(upper + std::log(-std::expm1(gap)));
}

SignedLog excursion_sum(std::int64_t k, double alpha) {
  if (k < 0) throw InvalidArgument("excursion_sum: k must be >= 0");
  if (k == 0) return SignedLog::zero();
  const double top = std::pow(static_cast<double>(k), alpha);
  return SignedLog::from_log(top + std::log(-std::expm1(-top)));
}

EkAlphaExponent ekalpha_exponent(std::int64_t n, double beta, double alpha) {
  if (n < 2) throw InvalidArgument("ekalpha_exponent: n must be >= 2");
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("ekalpha_exponent: beta must lie in (0, 1)");
  const auto nd = static_cast<double>(n);
  const auto window = static_cast<std::int64_t>(std::ceil(std::pow(nd, beta)));
  EkAlphaExponent out;
  out.k = n - window;
  if (out.k < 0) throw InvalidArgument("ekalpha_exponent: window n^beta exceeds n");
  out.exact = log_height_ratio(out.k, n, alpha);
  out.first_order = -alpha * std::pow(nd, alpha + beta - 1.0);
  return out;
}

}  // namespace birkhoff
