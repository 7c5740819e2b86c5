#pragma once

#include <cstdint>

#include "birkhoff/signed_log.hpp"

namespace birkhoff {

enum class ObservableVariant { Plain, Decorated, Parity };

/// Exponent alpha of the stretched normalization e^{n^alpha}; the open
/// interval (0, 1) is enforced on construction.
class ObservableSpec {
 public:
  explicit ObservableSpec(double alpha, ObservableVariant variant = ObservableVariant::Plain);
  double alpha() const noexcept { return alpha_; }
  ObservableVariant variant() const noexcept { return variant_; }

 private:
  double alpha_;
  ObservableVariant variant_;
};

/// Throws InvalidArgument unless alpha lies strictly inside (0, 1).
void require_alpha(double alpha);

/// s(j) = e^{(j+1)^alpha} - e^{j^alpha} >= 0, the value of f at height j.
SignedLog step_value(std::int64_t j, double alpha);

/// e^{k^alpha} - 1: the sum of s over one excursion that reaches heights
/// 0, ..., k-1. Zero for k = 0.
SignedLog excursion_sum(std::int64_t k, double alpha);

/// k^alpha - n^alpha evaluated without cancellation for k close to n.
double log_height_ratio(std::int64_t k, std::int64_t n, double alpha);

struct EkAlphaExponent {
  std::int64_t k = 0;         ///< n - ceil(n^beta)
  double exact = 0.0;         ///< k^alpha - n^alpha
  double first_order = 0.0;   ///< -alpha n^{alpha + beta - 1}
};

/// Log of e^{k^alpha} / e^{n^alpha} at k = n - ceil(n^beta), next to its
/// first-order prediction. Requires n >= 2 and beta in (0, 1).
EkAlphaExponent ekalpha_exponent(std::int64_t n, double beta, double alpha);

}  // namespace birkhoff
