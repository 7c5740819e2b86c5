#include "birkhoff/signed_log.hpp"

#include <algorithm>

namespace birkhoff {

double SignedLog::to_double(double limit) const noexcept {
  if (sign_ == 0) return 0.0;
  const double mag = logmag_ >= std::log(limit) ? limit : std::exp(logmag_);
  return sign_ > 0 ? mag : -mag;
}

SignedLog operator+(const SignedLog& a, const SignedLog& b) noexcept {
  if (a.sign_ == 0) return b;
  if (b.sign_ == 0) return a;
  const SignedLog& big = a.logmag_ >= b.logmag_ ? a : b;
  const SignedLog& small = a.logmag_ >= b.logmag_ ? b : a;
  const double gap = small.logmag_ - big.logmag_;  // <= 0
  if (big.sign_ == small.sign_) {
    return SignedLog(big.sign_, big.logmag_ + std::log1p(std::exp(gap)));
  }
  if (-gap <= SignedLog::kCancellation) return SignedLog::zero();
  // log(1 - e^gap), accurate for gap near 0 via expm1.
  return SignedLog(big.sign_, big.logmag_ + std::log(-std::expm1(gap)));
}

SignedLog SignedLog::scaled(double factor) const noexcept {
  if (sign_ == 0 || factor == 0.0) return {};
  const int s = factor > 0.0 ? sign_ : -sign_;
  return SignedLog(s, logmag_ + std::log(std::abs(factor)));
}

}  // namespace birkhoff
