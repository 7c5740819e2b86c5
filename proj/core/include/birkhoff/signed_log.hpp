#pragma once

#include <cmath>
#include <limits>

namespace birkhoff {

/// A real number stored as sign * exp(logmag).
///
/// Sums of magnitude e^{n^alpha} overflow doubles long before the horizons
/// this library simulates, so every Birkhoff quantity is carried in this
/// form. Addition anchors the log-sum-exp at the larger magnitude. Opposite
/// signs whose log magnitudes differ by at most kCancellation collapse to an
/// exact zero.
class SignedLog {
 public:
  static constexpr double kCancellation = 1e-12;

  constexpr SignedLog() = default;

  static constexpr SignedLog zero() { return {}; }
  static SignedLog from_log(double logmag, int sign = 1) {
    if (sign == 0 || logmag == -std::numeric_limits<double>::infinity()) return {};
    return SignedLog(sign > 0 ? 1 : -1, logmag);
  }
  static SignedLog from_double(double x) {
    if (x == 0.0) return {};
    return SignedLog(x > 0.0 ? 1 : -1, std::log(std::abs(x)));
  }

  int sign() const noexcept { return sign_; }
  /// Natural log of |value|; -inf for zero.
  double logmag() const noexcept {
    return sign_ == 0 ? -std::numeric_limits<double>::infinity() : logmag_;
  }
  bool is_zero() const noexcept { return sign_ == 0; }

  /// sign * exp(logmag) clamped to +-limit.
  double to_double(double limit = 1e300) const noexcept;

  SignedLog operator-() const noexcept {
    SignedLog r = *this;
    r.sign_ = -r.sign_;
    return r;
  }

  friend SignedLog operator+(const SignedLog& a, const SignedLog& b) noexcept;
  friend SignedLog operator-(const SignedLog& a, const SignedLog& b) noexcept {
    return a + (-b);
  }
  SignedLog& operator+=(const SignedLog& b) noexcept { return *this = *this + b; }
  SignedLog& operator-=(const SignedLog& b) noexcept { return *this = *this - b; }

  /// Multiply by a real factor.
  SignedLog scaled(double factor) const noexcept;
  /// Multiply by exp(log_factor).
  SignedLog times_exp(double log_factor) const noexcept {
    if (sign_ == 0) return {};
    return SignedLog(sign_, logmag_ + log_factor);
  }

  friend bool operator==(const SignedLog&, const SignedLog&) = default;

 private:
  constexpr SignedLog(int sign, double logmag) : sign_(sign), logmag_(logmag) {}

  int sign_ = 0;
  double logmag_ = 0.0;
};

}  // namespace birkhoff
