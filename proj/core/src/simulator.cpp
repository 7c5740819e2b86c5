#include "birkhoff/simulator.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "birkhoff/error.hpp"
#include "birkhoff/observables.hpp"

namespace birkhoff {
namespace {

constexpr std::int64_t kLawHeadroom = 2;

template <class Fn>
std::vector<TrajectoryRecord> run_trajectories(const ScenarioConfig& cfg, Fn&& fn) {
  std::vector<TrajectoryRecord> records(static_cast<std::size_t>(cfg.samples));
  const auto workers = static_cast<std::int64_t>(cfg.workers);
  const auto block_begin = [&](std::int64_t w) { return cfg.samples * w / workers; };

  auto work = [&](std::int64_t w) {
    RandomStream rng(cfg.seed, static_cast<std::uint64_t>(w));
    HeightPath scratch;
    for (std::int64_t i = block_begin(w); i < block_begin(w + 1); ++i) {
      fn(rng, scratch, records[static_cast<std::size_t>(i)]);
    }
  };

  if (workers == 1) {
    work(0);
    return records;
  }
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          failures[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return records;
}

void require_scenario(const ScenarioConfig& cfg, Scenario expected) {
  cfg.validate();
  if (cfg.scenario != expected) {
    throw InvalidArgument("scenario mismatch: config is " + to_string(cfg.scenario) +
                          ", runner expects " + to_string(expected));
  }
}

SignedLog birkhoff_sum(const HeightPath& path, double alpha) {
  SignedLog total = excursion_sum(path.final_height, alpha);
  for (const std::int64_t len : path.lengths) total += excursion_sum(len, alpha);
  return total;
}

RatioSampleSet run_excursion_sums(const ScenarioConfig& cfg, const ExcursionLaw& law) {
  law.reserve(cfg.n + kLawHeadroom);
  const double log_norm = std::pow(static_cast<double>(cfg.n), cfg.alpha);
  RatioSampleSet out;
  out.config = cfg;
  out.normalization_logmag = log_norm;
  out.records = run_trajectories(cfg, [&](RandomStream& rng, HeightPath& path,
                                          TrajectoryRecord& rec) {
    simulate_height_path(law, cfg.n, rng, path);
    rec.ratio = birkhoff_sum(path, cfg.alpha).times_exp(-log_norm);
    rec.height = path.final_height;
    rec.excursions = static_cast<std::int64_t>(path.lengths.size());
  });
  return out;
}

double draw_mark(MarkLaw law, RandomStream& rng) {
  return law == MarkLaw::Uniform01 ? rng.uniform() : rng.normal();
}

// log g(k) for the parity observable: e^{k^a}, halved at odd heights.
double parity_log_g(std::int64_t k, double alpha) {
  const double base = std::pow(static_cast<double>(k), alpha);
  return (k % 2 == 0) ? base : base - std::numbers::ln2;
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Stretched:
      return "stretched";
    case Scenario::Degenerate:
      return "degenerate";
    case Scenario::Decorated:
      return "decorated";
    case Scenario::Parity:
      return "parity";
    case Scenario::IidGaussian:
      return "iid-gaussian";
  }
  return "unknown";
}

std::string to_string(StartState s) { return s == StartState::AtZero ? "p0" : "q1"; }
std::string to_string(MarkLaw m) { return m == MarkLaw::Uniform01 ? "uniform" : "gaussian"; }

Scenario parse_scenario(const std::string& name) {
  for (const Scenario s : {Scenario::Stretched, Scenario::Degenerate, Scenario::Decorated,
                           Scenario::Parity, Scenario::IidGaussian}) {
    if (to_string(s) == name) return s;
  }
  throw InvalidArgument("unknown scenario '" + name + "'");
}

StartState parse_start(const std::string& name) {
  if (name == "p0") return StartState::AtZero;
  if (name == "q1") return StartState::AtOne;
  throw InvalidArgument("unknown start '" + name + "' (expected p0 or q1)");
}

MarkLaw parse_mark_law(const std::string& name) {
  if (name == "uniform") return MarkLaw::Uniform01;
  if (name == "gaussian") return MarkLaw::Gaussian01;
  throw InvalidArgument("unknown mark law '" + name + "' (expected uniform or gaussian)");
}

void ScenarioConfig::validate() const {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  if (workers < 1) throw InvalidArgument("workers must be >= 1");
  if (scenario != Scenario::IidGaussian) require_alpha(alpha);
  if (scenario == Scenario::Degenerate && !(gamma > 1.0)) {
    throw InvalidArgument("degenerate scenario requires gamma > 1");
  }
  if (n > ExcursionLaw::kMaxHorizon - 2 * kLawHeadroom) {
    throw InvalidArgument("n exceeds the largest supported horizon");
  }
}

std::vector<double> RatioSampleSet::ratio_values() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.ratio.to_double());
  return out;
}

void simulate_height_path(const ExcursionLaw& law, std::int64_t n, RandomStream& rng,
                          HeightPath& out) {
  if (n < 0) throw InvalidArgument("simulate_height_path: n must be >= 0");
  out.lengths.clear();
  std::int64_t remaining = n;
  while (remaining > 0) {
    const ExcursionOutcome outcome = law.sample_truncated(remaining, rng);
    if (const auto* done = std::get_if<Completed>(&outcome)) {
      out.lengths.push_back(done->length);
      remaining -= done->length;
    } else {
      break;
    }
  }
  out.final_height = remaining;
}

HeightPath simulate_height_path(const ExcursionLaw& law, std::int64_t n, RandomStream& rng) {
  HeightPath out;
  simulate_height_path(law, n, rng, out);
  return out;
}

double parity_log_normalization(std::int64_t n, double alpha) {
  return parity_log_g(n, alpha);
}

RatioSampleSet run_stretched(const ScenarioConfig& config) {
  require_scenario(config, Scenario::Stretched);
  const ExcursionLaw law(LawSpec::log_squared(), config.n + kLawHeadroom);
  return run_excursion_sums(config, law);
}

RatioSampleSet run_degenerate(const ScenarioConfig& config) {
  require_scenario(config, Scenario::Degenerate);
  const ExcursionLaw law(LawSpec::power(config.gamma), config.n + kLawHeadroom);
  return run_excursion_sums(config, law);
}

RatioSampleSet run_decorated(const ScenarioConfig& config) {
  require_scenario(config, Scenario::Decorated);
  const ExcursionLaw law(LawSpec::log_squared(), config.n + kLawHeadroom);
  const double log_norm = std::pow(static_cast<double>(config.n), config.alpha);
  RatioSampleSet out;
  out.config = config;
  out.normalization_logmag = log_norm;
  out.records = run_trajectories(config, [&](RandomStream& rng, HeightPath& path,
                                             TrajectoryRecord& rec) {
    // Marks are drawn at time 0 and at every return to 0.
    const double first = draw_mark(config.mark_law, rng);
    simulate_height_path(law, config.n, rng, path);
    double last = first;
    for (std::size_t i = 0; i < path.lengths.size(); ++i) last = draw_mark(config.mark_law, rng);
    // S_n f = g(T^n x) - g(x) with g(k, t) = t e^{k^alpha}.
    const double top = std::pow(static_cast<double>(path.final_height), config.alpha);
    const SignedLog sum = SignedLog::from_log(top).scaled(last) - SignedLog::from_double(first);
    rec.ratio = sum.times_exp(-log_norm);
    rec.height = path.final_height;
    rec.excursions = static_cast<std::int64_t>(path.lengths.size());
    rec.mark = last;
  });
  return out;
}

RatioSampleSet run_parity(const ScenarioConfig& config) {
  require_scenario(config, Scenario::Parity);
  const ExcursionLaw law(LawSpec::log_squared_even(), config.n + kLawHeadroom);
  const double log_norm = parity_log_normalization(config.n, config.alpha);
  // A path from height 1 is a path from 0 observed one step later: the step
  // 0 -> 1 is forced because q_0 = 0.
  const bool from_one = config.start == StartState::AtOne;
  const std::int64_t steps = from_one ? config.n + 1 : config.n;
  const SignedLog g_start = SignedLog::from_log(parity_log_g(from_one ? 1 : 0, config.alpha));
  RatioSampleSet out;
  out.config = config;
  out.normalization_logmag = log_norm;
  out.records = run_trajectories(config, [&](RandomStream& rng, HeightPath& path,
                                             TrajectoryRecord& rec) {
    simulate_height_path(law, steps, rng, path);
    const SignedLog g_end = SignedLog::from_log(parity_log_g(path.final_height, config.alpha));
    rec.ratio = (g_end - g_start).times_exp(-log_norm);
    rec.height = path.final_height;
    rec.excursions = static_cast<std::int64_t>(path.lengths.size());
  });
  return out;
}

RatioSampleSet run_iid_gaussian(const ScenarioConfig& config) {
  require_scenario(config, Scenario::IidGaussian);
  const double scale = 1.0 / std::sqrt(static_cast<double>(config.n));
  RatioSampleSet out;
  out.config = config;
  out.normalization_logmag = 0.5 * std::log(static_cast<double>(config.n));
  out.records = run_trajectories(config, [&](RandomStream& rng, HeightPath&,
                                             TrajectoryRecord& rec) {
    double sum = 0.0;
    for (std::int64_t i = 0; i < config.n; ++i) sum += rng.normal();
    rec.ratio = SignedLog::from_double(sum * scale);
  });
  return out;
}

RatioSampleSet run(const ScenarioConfig& config) {
  config.validate();
  switch (config.scenario) {
    case Scenario::Stretched:
      return run_stretched(config);
    case Scenario::Degenerate:
      return run_degenerate(config);
    case Scenario::Decorated:
      return run_decorated(config);
    case Scenario::Parity:
      return run_parity(config);
    case Scenario::IidGaussian:
      return run_iid_gaussian(config);
  }
  throw InvalidArgument("unknown scenario");
}

}  // namespace birkhoff
