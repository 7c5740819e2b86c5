#include "birkhoff/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "birkhoff/error.hpp"
#include "birkhoff/excursion_law.hpp"
#include "birkhoff/growth.hpp"
#include "birkhoff/observables.hpp"
#include "birkhoff/renewal.hpp"
#include "birkhoff/simulator.hpp"

namespace birkhoff {
namespace {

constexpr std::array<std::int64_t, 3> kRenewalGrid{1000, 10000, 100000};
constexpr std::int64_t kRenewalHorizon = 100000;

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s;
}

void add_common(VerifyResult& r, const VerifyOptions& o) {
  r.parameters.emplace_back("seed", std::to_string(o.seed));
  r.parameters.emplace_back("workers", std::to_string(o.workers));
}

ScenarioConfig scenario(Scenario s, std::int64_t n, std::int64_t samples, const VerifyOptions& o) {
  ScenarioConfig cfg;
  cfg.scenario = s;
  cfg.alpha = 0.5;
  cfg.n = n;
  cfg.samples = samples;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  return cfg;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

std::vector<double> above(const std::vector<double>& v, double threshold) {
  std::vector<double> out;
  std::copy_if(v.begin(), v.end(), std::back_inserter(out),
               [&](double x) { return x > threshold; });
  return out;
}

}  // namespace

bool VerifyResult::passed() const {
  return !lines.empty() &&
         std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.passed; });
}

const std::vector<std::string>& verification_names() {
  static const std::vector<std::string> names{"distrib-h", "limit-distrib-h", "nagaev",
                                              "theorem",   "degenerate",      "decorated",
                                              "parity",    "clt"};
  return names;
}

VerifyResult run_verification(const std::string& name, const VerifyOptions& options) {
  static const std::map<std::string, std::function<VerifyResult(const VerifyOptions&)>> table{
      {"distrib-h", verify_distrib_h},   {"limit-distrib-h", verify_limit_distrib_h},
      {"nagaev", verify_nagaev},         {"theorem", verify_theorem},
      {"degenerate", verify_degenerate}, {"decorated", verify_decorated},
      {"parity", verify_parity},         {"clt", verify_clt}};
  const auto it = table.find(name);
  if (it == table.end()) throw InvalidArgument("unknown check '" + name + "'");
  return it->second(options);
}

VerifyResult verify_distrib_h(const VerifyOptions& o) {
  VerifyResult r{"distrib-h", {}, {}};
  r.parameters.emplace_back("law", "log-squared");
  r.parameters.emplace_back("renewal_horizon", std::to_string(kRenewalHorizon));
  r.parameters.emplace_back("n_grid", "1000,10000,100000");
  r.parameters.emplace_back("k", "n/2");
  add_common(r, o);

  const ExcursionLaw law(LawSpec::log_squared(), kRenewalHorizon + 2);
  const RenewalTable table(law, kRenewalHorizon);

  double worst = 0.0;
  for (const std::int64_t n : kRenewalGrid) worst = std::max(worst, std::abs(completeness_defect(table, n)));
  r.lines.push_back({"factorization sums to 1 on the grid", worst <= 1e-9, "max defect " + num(worst)});

  std::vector<double> scaled;
  std::vector<double> dev;
  for (const std::int64_t n : kRenewalGrid) {
    const std::int64_t k = n / 2;
    const double p = law.tail(k) * table.u(n - k);
    scaled.push_back(p * std::log(static_cast<double>(k)) * static_cast<double>(n - k));
    dev.push_back(std::abs(scaled.back() - 1.0));
  }
  r.lines.push_back({"|P(h_n=n/2) log(k)(n-k) - 1| strictly decreasing", strictly_decreasing(dev),
                     "values " + join(scaled)});
  r.lines.push_back({"scaled mass in [0.5, 2] at n = 1e5", scaled.back() >= 0.5 && scaled.back() <= 2.0,
                     num(scaled.back())});
  return r;
}

VerifyResult verify_limit_distrib_h(const VerifyOptions& o) {
  VerifyResult r{"limit-distrib-h", {}, {}};
  r.parameters.emplace_back("renewal_horizon", std::to_string(kRenewalHorizon));
  r.parameters.emplace_back("beta_grid", "0.5,0.3");
  r.parameters.emplace_back("tolerance_at_1e5", "0.15");
  add_common(r, o);

  const ExcursionLaw law(LawSpec::log_squared(), kRenewalHorizon + 2);
  const RenewalTable table(law, kRenewalHorizon);
  for (const double beta : {0.5, 0.3}) {
    std::vector<double> mass;
    std::vector<double> dev;
    for (const std::int64_t n : kRenewalGrid) {
      mass.push_back(window_mass(table, n, beta));
      dev.push_back(std::abs(mass.back() - beta));
    }
    r.lines.push_back({"beta=" + num(beta) + ": |window - beta| decreasing", strictly_decreasing(dev),
                       "masses " + join(mass)});
    r.lines.push_back({"beta=" + num(beta) + ": |window - beta| < 0.15 at n = 1e5", dev.back() < 0.15,
                       num(dev.back())});
  }
  return r;
}

VerifyResult verify_nagaev(const VerifyOptions& o) {
  VerifyResult r{"nagaev", {}, {}};
  r.parameters.emplace_back("renewal_horizon", std::to_string(kRenewalHorizon));
  r.parameters.emplace_back("s_grid", "1000,10000,100000");
  add_common(r, o);

  const ExcursionLaw law(LawSpec::log_squared(), kRenewalHorizon + 2);
  const RenewalTable table(law, kRenewalHorizon);
  std::vector<double> ratio;
  std::vector<double> dev;
  for (const std::int64_t s : kRenewalGrid) {
    ratio.push_back(nagaev_ratio(table, s));
    dev.push_back(std::abs(ratio.back() - 1.0));
  }
  r.lines.push_back({"u_s T(s)^2 / p_s approaches 1 monotonically", strictly_decreasing(dev),
                     "ratios " + join(ratio)});
  return r;
}

VerifyResult verify_theorem(const VerifyOptions& o) {
  constexpr double kAlpha = 0.5;
  constexpr std::int64_t kN = 1000000;
  constexpr std::int64_t kSmallN = 10000;
  constexpr std::int64_t kSamples = 20000;
  constexpr double kSplit = 0.5;
  constexpr double kTol = 0.15;

  VerifyResult r{"theorem", {}, {}};
  r.parameters.emplace_back("alpha", num(kAlpha));
  r.parameters.emplace_back("n", std::to_string(kN));
  r.parameters.emplace_back("trend_n", std::to_string(kSmallN));
  r.parameters.emplace_back("samples", std::to_string(kSamples));
  r.parameters.emplace_back("split", num(kSplit));
  r.parameters.emplace_back("tolerance", num(kTol));
  add_common(r, o);

  const RatioSampleSet big = run(scenario(Scenario::Stretched, kN, kSamples, o));
  const auto values = big.ratio_values();
  const double frac = static_cast<double>(std::count_if(values.begin(), values.end(),
                                                        [](double v) { return v > kSplit; })) /
                      static_cast<double>(values.size());

  const ExcursionLaw law(LawSpec::log_squared(), kN + 2);
  const RenewalTable table(law, 8192);
  const std::array<double, 1> grid{kSplit};
  const double predicted = 1.0 - dominant_ratio_law(table, kN, kAlpha, grid)[0];
  const double se = std::sqrt(predicted * (1.0 - predicted) / static_cast<double>(kSamples));
  r.lines.push_back({"P(ratio > 0.5) within 3 SE of the dominant-term law",
                     std::abs(frac - predicted) <= 3.0 * se,
                     "MC " + num(frac) + " vs exact " + num(predicted) + " (SE " + num(se) + ")"});

  const TwoPointFit fit = two_point_fit(values, kSplit);
  const double loc = fit.loc_high.value_or(NAN);
  r.lines.push_back({"mass_low within 0.15 of alpha", std::abs(fit.mass_low - kAlpha) <= kTol,
                     num(fit.mass_low)});
  r.lines.push_back({"loc_high within 0.15 of 1", std::abs(loc - 1.0) <= kTol, num(loc)});

  const RatioSampleSet small = run(scenario(Scenario::Stretched, kSmallN, kSamples, o));
  const TwoPointFit fit_small = two_point_fit(small, kSplit);
  const auto deviation = [&](const TwoPointFit& f) {
    return std::max(std::abs(f.mass_low - kAlpha), std::abs(f.loc_high.value_or(NAN) - 1.0));
  };
  const double dev_small = deviation(fit_small);
  const double dev_big = deviation(fit);
  r.lines.push_back({"two-point deviation shrinks from n = 1e4 to 1e6", dev_big < dev_small,
                     num(dev_small) + " -> " + num(dev_big)});
  return r;
}

VerifyResult verify_degenerate(const VerifyOptions& o) {
  constexpr std::int64_t kN = 100000;
  constexpr std::int64_t kSamples = 10000;
  VerifyResult r{"degenerate", {}, {}};
  r.parameters.emplace_back("gamma", "2");
  r.parameters.emplace_back("alpha", "0.5");
  r.parameters.emplace_back("n", std::to_string(kN));
  r.parameters.emplace_back("samples", std::to_string(kSamples));
  add_common(r, o);

  ScenarioConfig cfg = scenario(Scenario::Degenerate, kN, kSamples, o);
  cfg.gamma = 2.0;
  const RatioSampleSet set = run(cfg);
  const double med = median(set.ratio_values());
  r.lines.push_back({"median ratio < 1e-3", med < 1e-3, num(med)});

  std::array<double, 4> quartile{};
  for (const auto& rec : set.records) {
    const double x = static_cast<double>(rec.height) / static_cast<double>(kN);
    quartile[static_cast<std::size_t>(std::min(3, static_cast<int>(x * 4.0)))] += 1.0;
  }
  for (auto& q : quartile) q /= static_cast<double>(set.records.size());
  const bool spread = std::all_of(quartile.begin(), quartile.end(), [](double q) { return q > 0.05; });
  r.lines.push_back({"each quartile of [0,1] holds > 5% of h/n", spread,
                     "masses " + join({quartile.begin(), quartile.end()})});
  return r;
}

VerifyResult verify_decorated(const VerifyOptions& o) {
  constexpr std::int64_t kN = 1000000;
  constexpr std::int64_t kSmallN = 10000;
  constexpr std::int64_t kSamples = 10000;
  constexpr double kCut = 0.05;
  VerifyResult r{"decorated", {}, {}};
  r.parameters.emplace_back("marks", "uniform");
  r.parameters.emplace_back("alpha", "0.5");
  r.parameters.emplace_back("n", std::to_string(kN));
  r.parameters.emplace_back("trend_n", std::to_string(kSmallN));
  r.parameters.emplace_back("samples", std::to_string(kSamples));
  r.parameters.emplace_back("conditioning_cut", num(kCut));
  add_common(r, o);

  const auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  const auto ks_at = [&](std::int64_t n) {
    ScenarioConfig cfg = scenario(Scenario::Decorated, n, kSamples, o);
    cfg.mark_law = MarkLaw::Uniform01;
    const auto high = above(run(cfg).ratio_values(), kCut);
    return high.empty() ? 1.0 : ks_distance(high, uniform_cdf);
  };
  const double ks_big = ks_at(kN);
  const double ks_small = ks_at(kSmallN);
  r.lines.push_back({"KS(ratio | ratio > 0.05, U[0,1]) < 0.15 at n = 1e6", ks_big < 0.15, num(ks_big)});
  r.lines.push_back({"KS nonincreasing from n = 1e4 to 1e6", ks_big <= ks_small,
                     num(ks_small) + " -> " + num(ks_big)});
  return r;
}

VerifyResult verify_parity(const VerifyOptions& o) {
  constexpr double kAlpha = 0.5;
  constexpr std::int64_t kN = 1000000;
  constexpr std::int64_t kSamples = 10000;
  VerifyResult r{"parity", {}, {}};
  r.parameters.emplace_back("alpha", num(kAlpha));
  r.parameters.emplace_back("n", std::to_string(kN));
  r.parameters.emplace_back("samples", std::to_string(kSamples));
  r.parameters.emplace_back("split_p0", "0.5");
  r.parameters.emplace_back("split_q1", "0.25");
  add_common(r, o);

  // B_{n+1}/B_n divided by e^{(n+1)^a - n^a} alternates between 1/2 and 2.
  bool alternates = true;
  for (std::int64_t n = 1; n < 64; ++n) {
    const double log_ratio = parity_log_normalization(n + 1, kAlpha) - parity_log_normalization(n, kAlpha) -
                             log_height_ratio(n + 1, n, kAlpha);
    const double expected = (n % 2 == 0) ? 0.5 : 2.0;
    alternates = alternates && std::abs(std::exp(log_ratio) - expected) < 1e-12;
  }
  r.lines.push_back({"B_{n+1}/B_n alternates around factors 1/2 and 2", alternates, ""});

  ScenarioConfig cfg = scenario(Scenario::Parity, kN, kSamples, o);
  cfg.start = StartState::AtZero;
  const TwoPointFit p0 = two_point_fit(run(cfg), 0.5);
  cfg.start = StartState::AtOne;
  const TwoPointFit q1 = two_point_fit(run(cfg), 0.25);
  const double loc_p = p0.loc_high.value_or(NAN);
  const double loc_q = q1.loc_high.value_or(NAN);
  r.lines.push_back({"P at 0: high cluster within 0.15 of 1", std::abs(loc_p - 1.0) <= 0.15, num(loc_p)});
  const double factor = loc_p / loc_q;
  r.lines.push_back({"Q at 1: high cluster separated by factor 2 +- 20%",
                     factor >= 1.6 && factor <= 2.4,
                     "loc " + num(loc_q) + ", factor " + num(factor)});
  return r;
}

VerifyResult verify_clt(const VerifyOptions& o) {
  constexpr std::int64_t kN = 1000;
  constexpr std::int64_t kSamples = 100000;
  VerifyResult r{"clt", {}, {}};
  r.parameters.emplace_back("n", std::to_string(kN));
  r.parameters.emplace_back("samples", std::to_string(kSamples));
  add_common(r, o);

  const auto values = run(scenario(Scenario::IidGaussian, kN, kSamples, o)).ratio_values();
  const double ks = ks_distance(values, standard_normal_cdf);
  r.lines.push_back({"KS to standard normal < 0.02", ks < 0.02, num(ks)});
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  const double bound = 3.0 / std::sqrt(static_cast<double>(kSamples));
  r.lines.push_back({"sample mean within 3/sqrt(m) of 0", std::abs(mean) <= bound, num(mean)});
  return r;
}

}  // namespace birkhoff
