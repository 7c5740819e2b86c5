#pragma once

// Diagnostics for candidate normalizing sequences B_1, ..., B_N and for
// Monte Carlo ratio samples.
//
// Sequences are handled as log B_n throughout. Every sequence-level fit is
// invariant under B_n -> C B_n. Thresholds used to turn numbers into verdicts
// live in GrowthThresholds and are written into every report.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace birkhoff {

struct RatioSampleSet;

class NormSeq {
 public:
  static constexpr std::size_t kMinLength = 16;

  /// log_values[i] = log B_{i+1}. Entries must be finite.
  explicit NormSeq(std::vector<double> log_values);
  static NormSeq from_values(std::span<const double> values);
  /// Sequence n -> log B_n for n = 1..N.
  static NormSeq generate(std::int64_t length, const std::function<double(std::int64_t)>& log_b);

  std::size_t size() const noexcept { return log_.size(); }
  /// log B_n, 1-based.
  double log_at(std::int64_t n) const { return log_[static_cast<std::size_t>(n - 1)]; }
  std::span<const double> log_values() const noexcept { return log_; }

  /// Throws InvalidArgument when shorter than kMinLength.
  void require_fit_length() const;

 private:
  std::vector<double> log_;
};

struct GrowthThresholds {
  double ratio_oscillation = 0.1;   ///< ln(max/min) of B_{n+1}/B_n over the last quartile
  double poly_curvature = 0.5;      ///< slope(last quarter) - slope(second quarter)
  double stretched_rms = 0.1;       ///< residual RMS of the stretched fit
  double burn_in_fraction = 0.1;    ///< indices dropped before density estimates
  double trim_fraction = 0.1;       ///< two-point fit trimmed mean
};

struct RatioProfile {
  double limit_estimate = 0.0;   ///< geometric mean of B_{n+1}/B_n over the last quartile
  double tail_min = 0.0;
  double tail_max = 0.0;
  bool converges = false;
};

struct RatioAndDoubling {
  RatioProfile profile;
  double doubling_sup = 0.0;        ///< sup_{n <= N/2} B_{2n}/B_n
  std::int64_t doubling_argmax = 0;
};

RatioAndDoubling ratio_and_doubling(const NormSeq& seq, const GrowthThresholds& th = {});

struct PolyFit {
  double exponent = 0.0;      ///< slope of log B_n against log n on the upper half
  double curvature = 0.0;
  bool superpolynomial = false;
};

PolyFit poly_fit(const NormSeq& seq, const GrowthThresholds& th = {});

struct StretchedFit {
  double alpha = 0.0;
  double residual_rms = 0.0;
  bool stretched = false;
};

/// Slope of ln(log B_n - log B_1) against ln n on the upper half of indices.
/// Anchoring at B_1 keeps the fit invariant under B_n -> C B_n. Throws
/// InvalidArgument if B_n <= B_1 anywhere on the fit range.
StretchedFit stretched_fit(const NormSeq& seq, const GrowthThresholds& th = {});

struct SubexpRow {
  double rho = 0.0;
  double max_log_over_n = 0.0;  ///< max over the last quartile of (log B_n)/n
  double tail_log_slope = 0.0;  ///< least-squares slope of log B_n against n, last quartile
  bool pass = false;            ///< tail_log_slope < rho
};

struct SubexpReport {
  std::vector<SubexpRow> rows;
  bool exponential = false;  ///< every rho on the grid fails
};

/// B_n = o(e^{rho n}) holds when log B_n - rho n eventually decreases; the
/// test reads the local growth rate of log B_n off the last quartile.
SubexpReport subexp_check(const NormSeq& seq, std::span<const double> rho_grid);

struct MaxRatioBounds {
  double global_c = 0.0;            ///< max_n B_{n+1} / max_{i<=n} B_i
  std::int64_t global_c_index = 0;  ///< n attaining it
  std::vector<std::pair<double, double>> density;  ///< (L, violation fraction)
};

/// Violation fraction of {n : B_{n+1} > L max_{i<=n} B_i} after burn-in.
MaxRatioBounds max_ratio_bounds(const NormSeq& seq, std::span<const double> l_grid,
                                const GrowthThresholds& th = {});

struct TwoPointFit {
  double mass_low = 0.0;
  double mass_high = 0.0;
  double split = 0.5;
  std::optional<double> loc_high;  ///< trimmed mean of ratios above split
};

TwoPointFit two_point_fit(std::span<const double> ratios, double split = 0.5,
                          double trim_fraction = 0.1);
TwoPointFit two_point_fit(const RatioSampleSet& samples, double split = 0.5,
                          double trim_fraction = 0.1);

/// One-sample Kolmogorov-Smirnov statistic sup |F_m - F|.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);
/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

double standard_normal_cdf(double x);

struct GrowthReport {
  std::optional<double> ratio_limit_estimate;  ///< empty: divergent/oscillating
  RatioProfile ratio_profile;
  double doubling_sup = 0.0;
  std::optional<double> poly_exponent;         ///< empty: superpolynomial
  PolyFit poly;
  std::optional<double> stretched_alpha;       ///< empty: not stretched-exp
  std::optional<StretchedFit> stretched;       ///< empty when the fit range is invalid
  SubexpReport subexp;
  double global_c = 0.0;
  std::vector<std::pair<double, double>> density_violation;
  GrowthThresholds thresholds;
  std::vector<std::string> verdicts;

  /// Density-violation fraction recorded for exactly this L, if present.
  std::optional<double> density_at(double l) const;
  bool has_verdict(const std::string& needle) const;
};

inline const std::vector<double> kDefaultRhoGrid{0.1, 0.01, 0.001};
inline const std::vector<double> kDefaultLGrid{1.5, 2.0, 3.0};

GrowthReport growth_report(const NormSeq& seq, std::span<const double> rho_grid = kDefaultRhoGrid,
                           std::span<const double> l_grid = kDefaultLGrid,
                           const GrowthThresholds& th = {});

/// Stable JSON document; floats as decimal strings with 12 significant digits.
std::string to_json(const GrowthReport& report);

}  // namespace birkhoff
