#include "birkhoff/excursion_law.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include "birkhoff/error.hpp"

namespace birkhoff {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Summation variable and its derivatives for the raw series of each kind.
// For the even-only law the series is indexed by m with n = 2m.
struct RawSeries {
  LawSpec spec;

  std::int64_t first_index() const { return spec.kind == LawKind::LogSquaredEvenOnly ? 1 : 2; }

  double term(double x) const {
    switch (spec.kind) {
      case LawKind::LogSquared: {
        const double l = std::log(x);
        return 1.0 / (x * l * l);
      }
      case LawKind::LogSquaredEvenOnly: {
        const double n = 2.0 * x;
        const double l = std::log(n);
        return 1.0 / (n * l * l);
      }
      case LawKind::PowerLaw:
        return std::pow(x, -spec.gamma);
    }
    return 0.0;
  }

  // Integral of term() over [x, inf).
  double integral_from(double x) const {
    switch (spec.kind) {
      case LawKind::LogSquared:
        return 1.0 / std::log(x);
      case LawKind::LogSquaredEvenOnly:
        return 0.5 / std::log(2.0 * x);
      case LawKind::PowerLaw:
        return std::pow(x, 1.0 - spec.gamma) / (spec.gamma - 1.0);
    }
    return 0.0;
  }

  // f(x) = 1/(x L^2): f' = -(L + 2)/(x^2 L^3), f'' = (2L^2 + 6L + 6)/(x^3 L^4).
  static double log_sq_d1(double x) {
    const double l = std::log(x);
    return -(l + 2.0) / (x * x * l * l * l);
  }
  static double log_sq_d2(double x) {
    const double l = std::log(x);
    return (2.0 * l * l + 6.0 * l + 6.0) / (x * x * x * l * l * l * l);
  }

  double d1(double x) const {
    switch (spec.kind) {
      case LawKind::LogSquared:
        return log_sq_d1(x);
      case LawKind::LogSquaredEvenOnly:
        return 2.0 * log_sq_d1(2.0 * x);
      case LawKind::PowerLaw:
        return -spec.gamma * std::pow(x, -spec.gamma - 1.0);
    }
    return 0.0;
  }

  double d2(double x) const {
    switch (spec.kind) {
      case LawKind::LogSquared:
        return log_sq_d2(x);
      case LawKind::LogSquaredEvenOnly:
        return 4.0 * log_sq_d2(2.0 * x);
      case LawKind::PowerLaw:
        return spec.gamma * (spec.gamma + 1.0) * std::pow(x, -spec.gamma - 2.0);
    }
    return 0.0;
  }
};

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double err = 0.0;

  void add(double x) noexcept {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      err += (sum - t) + x;
    } else {
      err += (x - t) + sum;
    }
    sum = t;
  }
  double value() const noexcept { return sum + err; }
};

constexpr std::int64_t kChunkBits = 20;
constexpr std::int64_t kChunkSize = std::int64_t{1} << kChunkBits;
constexpr std::int64_t kChunkMask = kChunkSize - 1;
constexpr std::int64_t kMaxChunks = ExcursionLaw::kMaxHorizon / kChunkSize;
constexpr std::int64_t kNormalizerBudget = std::int64_t{1} << 27;

}  // namespace

std::string to_string(LawKind kind) {
  switch (kind) {
    case LawKind::LogSquared:
      return "log-squared";
    case LawKind::LogSquaredEvenOnly:
      return "log-squared-even";
    case LawKind::PowerLaw:
      return "power";
  }
  return "unknown";
}

void LawSpec::validate() const {
  if (support_floor != 2) {
    throw InvalidArgument("excursion laws are supported on {2, 3, ...}; support_floor must be 2");
  }
  if (kind == LawKind::PowerLaw && !(gamma > 1.0 && std::isfinite(gamma))) {
    throw InvalidArgument("power law requires gamma > 1: sum of n^-gamma diverges for gamma <= 1");
  }
}

double raw_mass(const LawSpec& spec, std::int64_t n) {
  if (n < 2) return 0.0;
  const auto x = static_cast<double>(n);
  switch (spec.kind) {
    case LawKind::LogSquared: {
      const double l = std::log(x);
      return 1.0 / (x * l * l);
    }
    case LawKind::LogSquaredEvenOnly: {
      if (n % 2 != 0) return 0.0;
      const double l = std::log(x);
      return 1.0 / (x * l * l);
    }
    case LawKind::PowerLaw:
      return std::pow(x, -spec.gamma);
  }
  return 0.0;
}

Normalizer normalizer(const LawSpec& spec, double precision) {
  spec.validate();
  if (!(precision > 0.0 && precision <= 1e-6)) {
    throw InvalidArgument("normalizer precision must lie in (0, 1e-6]");
  }
  const RawSeries series{spec};

  CompensatedSum partial;
  std::int64_t next = series.first_index();
  std::int64_t cutoff = 1024;
  for (;;) {
    for (; next <= cutoff; ++next) partial.add(series.term(static_cast<double>(next)));
    const double s = partial.value();
    const auto x = static_cast<double>(cutoff);
    // Sum over j > cutoff = integral - term/2 + E, with
    // -g'(x+1)/12 <= E <= (g''(x) - g'(x))/12 for completely monotone g.
    const double base = series.integral_from(x) - 0.5 * series.term(x);
    const double e_lo = -series.d1(x + 1.0) / 12.0;
    const double e_hi = (series.d2(x) - series.d1(x)) / 12.0;
    // Rounding: a few ulps per evaluated term plus the compensated sum itself.
    const double rounding = 8.0 * kEps * (s + std::abs(base)) + 4.0 * kEps * e_hi;
    const double lo = s + base + e_lo - rounding;
    const double hi = s + base + e_hi + rounding;
    if (hi - lo <= precision) {
      Normalizer out;
      out.raw_sum_lo = lo;
      out.raw_sum_hi = hi;
      out.c = 2.0 / (lo + hi);
      out.error_bound = (hi - lo) / (2.0 * lo * lo) + 2.0 * kEps * out.c;
      out.cutoff = cutoff;
      return out;
    }
    if (cutoff >= kNormalizerBudget) {
      throw NumericError("normalizer: precision " + std::to_string(precision) +
                         " not reachable within the summation budget");
    }
    cutoff *= 2;
  }
}

struct ExcursionLaw::Table {
  LawSpec spec;
  Normalizer norm;

  std::mutex grow_mutex;
  std::atomic<std::int64_t> size{0};
  std::unique_ptr<std::atomic<double*>[]> chunks;
  std::vector<std::unique_ptr<double[]>> owned;  // guarded by grow_mutex
  CompensatedSum cumulative;                     // guarded by grow_mutex

  double at(std::int64_t k) const noexcept {
    return chunks[k >> kChunkBits].load(std::memory_order_relaxed)[k & kChunkMask];
  }

  double pmf(std::int64_t n) const { return norm.c * raw_mass(spec, n); }

  void grow_to(std::int64_t wanted) {
    if (wanted > ExcursionLaw::kMaxHorizon) {
      throw CapacityError("excursion law tail table would exceed " +
                          std::to_string(ExcursionLaw::kMaxHorizon) + " entries");
    }
    std::lock_guard lock(grow_mutex);
    const std::int64_t current = size.load(std::memory_order_relaxed);
    if (wanted <= current) return;
    const std::int64_t target =
        std::min(ExcursionLaw::kMaxHorizon, std::max(wanted, 2 * current));
    const std::int64_t chunks_needed = (target + kChunkSize - 1) >> kChunkBits;
    for (auto c = static_cast<std::int64_t>(owned.size()); c < chunks_needed; ++c) {
      owned.push_back(std::make_unique<double[]>(kChunkSize));
      chunks[c].store(owned.back().get(), std::memory_order_relaxed);
    }
    for (std::int64_t k = current; k < target; ++k) {
      cumulative.add(pmf(k));
      // 1 - sum is exact once sum >= 1/2; the low-order part is subtracted last.
      const double t = (1.0 - cumulative.sum) - cumulative.err;
      owned[k >> kChunkBits][k & kChunkMask] = t;
    }
    size.store(target, std::memory_order_release);
  }

  void ensure(std::int64_t n) {
    if (n < size.load(std::memory_order_acquire)) return;
    grow_to(n + 1);
  }
};

ExcursionLaw::ExcursionLaw(LawSpec spec, std::int64_t initial_horizon, double precision)
    : table_(std::make_shared<Table>()) {
  spec.validate();
  table_->spec = spec;
  table_->norm = normalizer(spec, precision);
  table_->chunks = std::make_unique<std::atomic<double*>[]>(kMaxChunks);
  for (std::int64_t i = 0; i < kMaxChunks; ++i) table_->chunks[i].store(nullptr);
  table_->grow_to(std::max<std::int64_t>(initial_horizon, 16));
}

const LawSpec& ExcursionLaw::spec() const noexcept { return table_->spec; }
const Normalizer& ExcursionLaw::normalization() const noexcept { return table_->norm; }

double ExcursionLaw::pmf(std::int64_t n) const {
  if (n < 0) throw InvalidArgument("pmf: n must be >= 0");
  return table_->pmf(n);
}

double ExcursionLaw::tail(std::int64_t s) const {
  if (s < 0) throw InvalidArgument("tail: s must be >= 0");
  table_->ensure(s);
  return table_->at(s);
}

double ExcursionLaw::hazard(std::int64_t n) const {
  const double t = tail(n);
  if (!(t > 0.0)) {
    throw std::logic_error("hazard: tail vanished at n = " + std::to_string(n) +
                           " for an infinitely supported law");
  }
  return table_->pmf(n + 1) / t;
}

void ExcursionLaw::reserve(std::int64_t n) const {
  if (n < 0) return;
  table_->ensure(n);
}

std::int64_t ExcursionLaw::horizon() const noexcept {
  return table_->size.load(std::memory_order_acquire);
}

ExcursionOutcome ExcursionLaw::sample_truncated(std::int64_t horizon,
                                                RandomStream& rng) const {
  if (horizon < 1) throw InvalidArgument("sample_truncated: horizon must be >= 1");
  table_->ensure(horizon);
  const Table& t = *table_;
  const double v = rng.uniform();
  if (v < t.at(horizon)) return Survives{};
  // Smallest l in [2, horizon] with T(l) <= v; T(1) = 1 > v.
  std::int64_t lo = 2;
  std::int64_t hi = horizon;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (t.at(mid) <= v) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return Completed{lo};
}

}  // namespace birkhoff
