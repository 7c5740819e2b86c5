#include "birkhoff/growth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "birkhoff/error.hpp"
#include "birkhoff/simulator.hpp"

namespace birkhoff {
namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

// Least-squares line through (x_i, y_i).
LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const auto m = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit out;
  out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  out.intercept = my - out.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (out.intercept + out.slope * x[i]);
    ss += r * r;
  }
  out.rms = std::sqrt(ss / m);
  return out;
}

// Fit of log B_n against transform(n) over n in [first, last].
LineFit fit_range(const NormSeq& seq, std::int64_t first, std::int64_t last,
                  double (*xform)(std::int64_t)) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::int64_t n = first; n <= last; ++n) {
    x.push_back(xform(n));
    y.push_back(seq.log_at(n));
  }
  return fit_line(x, y);
}

double log_index(std::int64_t n) { return std::log(static_cast<double>(n)); }
double plain_index(std::int64_t n) { return static_cast<double>(n); }

// First index of the quarter starting at fraction q of [1, N].
std::int64_t quarter_start(std::int64_t n_total, int quarter) {
  return std::max<std::int64_t>(1, (n_total * quarter + 3) / 4);
}

std::string sig12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fixed_short(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

}  // namespace

NormSeq::NormSeq(std::vector<double> log_values) : log_(std::move(log_values)) {
  for (const double v : log_) {
    if (!std::isfinite(v)) throw InvalidArgument("NormSeq: log B_n must be finite");
  }
}

NormSeq NormSeq::from_values(std::span<const double> values) {
  std::vector<double> logs;
  logs.reserve(values.size());
  for (const double v : values) {
    if (!(v > 0.0)) throw InvalidArgument("NormSeq: B_n must be positive");
    logs.push_back(std::log(v));
  }
  return NormSeq(std::move(logs));
}

NormSeq NormSeq::generate(std::int64_t length,
                          const std::function<double(std::int64_t)>& log_b) {
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(std::max<std::int64_t>(length, 0)));
  for (std::int64_t n = 1; n <= length; ++n) logs.push_back(log_b(n));
  return NormSeq(std::move(logs));
}

void NormSeq::require_fit_length() const {
  if (log_.size() < kMinLength) {
    throw InvalidArgument("normalizing sequence needs at least " + std::to_string(kMinLength) +
                          " entries, got " + std::to_string(log_.size()));
  }
}

RatioAndDoubling ratio_and_doubling(const NormSeq& seq, const GrowthThresholds& th) {
  seq.require_fit_length();
  const auto n_total = static_cast<std::int64_t>(seq.size());
  RatioAndDoubling out;

  // Ratios B_{n+1}/B_n, n = 1..N-1; last quartile of that range.
  const std::int64_t last = n_total - 1;
  const std::int64_t first = quarter_start(last, 3);
  double lo = INFINITY;
  double hi = -INFINITY;
  double sum = 0.0;
  for (std::int64_t n = first; n <= last; ++n) {
    const double r = seq.log_at(n + 1) - seq.log_at(n);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    sum += r;
  }
  out.profile.limit_estimate = std::exp(sum / static_cast<double>(last - first + 1));
  out.profile.tail_min = std::exp(lo);
  out.profile.tail_max = std::exp(hi);
  out.profile.converges = (hi - lo) <= th.ratio_oscillation;

  double best = -INFINITY;
  for (std::int64_t n = 1; 2 * n <= n_total; ++n) {
    const double r = seq.log_at(2 * n) - seq.log_at(n);
    if (r > best) {
      best = r;
      out.doubling_argmax = n;
    }
  }
  out.doubling_sup = std::exp(best);
  return out;
}

PolyFit poly_fit(const NormSeq& seq, const GrowthThresholds& th) {
  seq.require_fit_length();
  const auto n_total = static_cast<std::int64_t>(seq.size());
  PolyFit out;
  out.exponent = fit_range(seq, quarter_start(n_total, 2), n_total, log_index).slope;
  const double late = fit_range(seq, quarter_start(n_total, 3), n_total, log_index).slope;
  const double early =
      fit_range(seq, quarter_start(n_total, 1), quarter_start(n_total, 2), log_index).slope;
  out.curvature = late - early;
  out.superpolynomial = out.curvature > th.poly_curvature;
  return out;
}

StretchedFit stretched_fit(const NormSeq& seq, const GrowthThresholds& th) {
  seq.require_fit_length();
  const auto n_total = static_cast<std::int64_t>(seq.size());
  const double anchor = seq.log_at(1);
  std::vector<double> x;
  std::vector<double> y;
  for (std::int64_t n = quarter_start(n_total, 2); n <= n_total; ++n) {
    const double rise = seq.log_at(n) - anchor;
    if (!(rise > 0.0)) {
      throw InvalidArgument("stretched_fit: B_n <= B_1 at n = " + std::to_string(n) +
                            "; the fit range must lie where B_n grows past B_1");
    }
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(std::log(rise));
  }
  const LineFit f = fit_line(x, y);
  StretchedFit out;
  out.alpha = f.slope;
  out.residual_rms = f.rms;
  out.stretched = f.rms <= th.stretched_rms;
  return out;
}

SubexpReport subexp_check(const NormSeq& seq, std::span<const double> rho_grid) {
  seq.require_fit_length();
  const auto n_total = static_cast<std::int64_t>(seq.size());
  const std::int64_t first = quarter_start(n_total, 3);
  double max_ratio = -INFINITY;
  for (std::int64_t n = first; n <= n_total; ++n) {
    max_ratio = std::max(max_ratio, seq.log_at(n) / static_cast<double>(n));
  }
  const double slope = fit_range(seq, first, n_total, plain_index).slope;
  SubexpReport out;
  for (const double rho : rho_grid) {
    if (!(rho > 0.0)) throw InvalidArgument("subexp_check: rho must be positive");
    out.rows.push_back({rho, max_ratio, slope, slope < rho});
  }
  out.exponential = !out.rows.empty() &&
                    std::none_of(out.rows.begin(), out.rows.end(),
                                 [](const SubexpRow& r) { return r.pass; });
  return out;
}

MaxRatioBounds max_ratio_bounds(const NormSeq& seq, std::span<const double> l_grid,
                                const GrowthThresholds& th) {
  seq.require_fit_length();
  const auto n_total = static_cast<std::int64_t>(seq.size());
  // jump[n] = log B_{n+1} - log max_{i<=n} B_i, n = 1..N-1
  std::vector<double> jump;
  jump.reserve(static_cast<std::size_t>(n_total - 1));
  double running = seq.log_at(1);
  MaxRatioBounds out;
  double best = -INFINITY;
  for (std::int64_t n = 1; n < n_total; ++n) {
    const double j = seq.log_at(n + 1) - running;
    jump.push_back(j);
    if (j > best) {
      best = j;
      out.global_c_index = n;
    }
    running = std::max(running, seq.log_at(n + 1));
  }
  out.global_c = std::exp(best);

  const auto burn = static_cast<std::size_t>(
      std::floor(th.burn_in_fraction * static_cast<double>(jump.size())));
  const auto counted = static_cast<double>(jump.size() - burn);
  for (const double l : l_grid) {
    if (!(l > 1.0)) throw InvalidArgument("max_ratio_bounds: L must exceed 1");
    const double log_l = std::log(l);
    const auto hits = std::count_if(jump.begin() + static_cast<std::ptrdiff_t>(burn), jump.end(),
                                    [&](double j) { return j > log_l; });
    out.density.emplace_back(l, static_cast<double>(hits) / counted);
  }
  return out;
}

TwoPointFit two_point_fit(std::span<const double> ratios, double split, double trim_fraction) {
  if (ratios.empty()) throw InvalidArgument("two_point_fit: no samples");
  std::vector<double> high;
  std::size_t low = 0;
  for (const double r : ratios) {
    if (r <= split) {
      ++low;
    } else {
      high.push_back(r);
    }
  }
  TwoPointFit out;
  out.split = split;
  out.mass_low = static_cast<double>(low) / static_cast<double>(ratios.size());
  out.mass_high = static_cast<double>(high.size()) / static_cast<double>(ratios.size());
  if (!high.empty()) {
    std::sort(high.begin(), high.end());
    auto cut = static_cast<std::size_t>(std::floor(trim_fraction * static_cast<double>(high.size())));
    if (2 * cut >= high.size()) cut = 0;
    const auto first = high.begin() + static_cast<std::ptrdiff_t>(cut);
    const auto last = high.end() - static_cast<std::ptrdiff_t>(cut);
    out.loc_high = std::accumulate(first, last, 0.0) / static_cast<double>(last - first);
  }
  return out;
}

TwoPointFit two_point_fit(const RatioSampleSet& samples, double split, double trim_fraction) {
  const auto values = samples.ratio_values();
  return two_point_fit(values, split, trim_fraction);
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InvalidArgument("ks_distance: no samples");
  std::vector<double> xs(samples.begin(), samples.end());
  std::sort(xs.begin(), xs.end());
  const auto m = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double f = cdf(xs[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / m),
                  std::abs(static_cast<double>(j) / m - f)});
    i = j;
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("ks_two_sample: empty sample");
  std::vector<double> xa(a.begin(), a.end());
  std::vector<double> xb(b.begin(), b.end());
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());
  const auto na = static_cast<double>(xa.size());
  const auto nb = static_cast<double>(xb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < xa.size() && j < xb.size()) {
    const double x = std::min(xa[i], xb[j]);
    while (i < xa.size() && xa[i] == x) ++i;
    while (j < xb.size() && xb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::optional<double> GrowthReport::density_at(double l) const {
  for (const auto& [level, frac] : density_violation) {
    if (level == l) return frac;
  }
  return std::nullopt;
}

bool GrowthReport::has_verdict(const std::string& needle) const {
  return std::any_of(verdicts.begin(), verdicts.end(),
                     [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

GrowthReport growth_report(const NormSeq& seq, std::span<const double> rho_grid,
                           std::span<const double> l_grid, const GrowthThresholds& th) {
  seq.require_fit_length();
  GrowthReport rep;
  rep.thresholds = th;

  const RatioAndDoubling rd = ratio_and_doubling(seq, th);
  rep.ratio_profile = rd.profile;
  rep.doubling_sup = rd.doubling_sup;
  if (rd.profile.converges) rep.ratio_limit_estimate = rd.profile.limit_estimate;

  rep.poly = poly_fit(seq, th);
  if (!rep.poly.superpolynomial) rep.poly_exponent = rep.poly.exponent;

  try {
    rep.stretched = stretched_fit(seq, th);
    if (rep.stretched->stretched) rep.stretched_alpha = rep.stretched->alpha;
  } catch (const InvalidArgument&) {
    rep.stretched.reset();
  }

  rep.subexp = subexp_check(seq, rho_grid);
  const MaxRatioBounds mb = max_ratio_bounds(seq, l_grid, th);
  rep.global_c = mb.global_c;
  rep.density_violation = mb.density;

  if (rd.profile.converges) {
    rep.verdicts.push_back("ratio B_{n+1}/B_n converges (limit ~ " +
                           fixed_short(rd.profile.limit_estimate) + ")");
  } else {
    rep.verdicts.push_back("ratio does not converge: B_{n+1}/B_n oscillates in [" +
                           fixed_short(rd.profile.tail_min) + ", " +
                           fixed_short(rd.profile.tail_max) + "]");
  }
  if (rep.poly.superpolynomial) {
    rep.verdicts.push_back("superpolynomial growth");
  } else {
    rep.verdicts.push_back("polynomial regime (exponent ~ " + fixed_short(rep.poly.exponent) + ")");
  }
  if (rep.poly.superpolynomial) {
    if (rep.stretched_alpha) {
      rep.verdicts.push_back("stretched-exponential growth (alpha ~ " +
                             fixed_short(*rep.stretched_alpha) + ")");
      if (*rep.stretched_alpha >= 0.95 && rep.subexp.exponential) {
        rep.verdicts.push_back("stretched exponent at the boundary alpha = 1; subexponential test fails");
      }
    } else {
      rep.verdicts.push_back("not stretched-exp");
    }
  }
  if (rep.subexp.exponential) {
    rep.verdicts.push_back("exponential growth: inconsistent with conservative limit theorem");
  } else {
    rep.verdicts.push_back("subexponential on the tested range");
  }
  return rep;
}

std::string to_json(const GrowthReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["ratio_limit_estimate"] =
      r.ratio_limit_estimate ? sig12(*r.ratio_limit_estimate) : "divergent/oscillating";
  j["ratio_profile"] = {{"limit_estimate", sig12(r.ratio_profile.limit_estimate)},
                        {"tail_min", sig12(r.ratio_profile.tail_min)},
                        {"tail_max", sig12(r.ratio_profile.tail_max)}};
  j["doubling_sup"] = sig12(r.doubling_sup);
  j["poly_exponent"] = r.poly_exponent ? sig12(*r.poly_exponent) : "superpolynomial";
  j["poly_curvature"] = sig12(r.poly.curvature);
  j["stretched_alpha"] = r.stretched_alpha ? sig12(*r.stretched_alpha) : "not stretched-exp";
  if (r.stretched) {
    j["stretched_fit"] = {{"alpha", sig12(r.stretched->alpha)},
                          {"residual_rms", sig12(r.stretched->residual_rms)}};
  }
  ordered_json margin = ordered_json::array();
  for (const auto& row : r.subexp.rows) {
    margin.push_back({{"rho", sig12(row.rho)},
                      {"max_log_over_n", sig12(row.max_log_over_n)},
                      {"tail_log_slope", sig12(row.tail_log_slope)},
                      {"verdict", row.pass ? "PASS" : "FAIL"}});
  }
  j["subexp_margin"] = margin;
  j["global_C"] = sig12(r.global_c);
  ordered_json density = ordered_json::array();
  for (const auto& [l, frac] : r.density_violation) {
    density.push_back({{"L", sig12(l)}, {"density", sig12(frac)}});
  }
  j["density_violation"] = density;
  j["thresholds"] = {{"ratio_oscillation", sig12(r.thresholds.ratio_oscillation)},
                     {"poly_curvature", sig12(r.thresholds.poly_curvature)},
                     {"stretched_rms", sig12(r.thresholds.stretched_rms)},
                     {"burn_in_fraction", sig12(r.thresholds.burn_in_fraction)},
                     {"trim_fraction", sig12(r.thresholds.trim_fraction)}};
  j["verdicts"] = r.verdicts;
  return j.dump(2) + "\n";
}

}  // namespace birkhoff
