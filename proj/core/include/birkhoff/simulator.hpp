#pragma once

// Monte Carlo engine for the walk on N with return hazards q_n.
//
// Trajectories are simulated one excursion at a time: each step draws a
// horizon-censored excursion length, so a trajectory of length n costs
// O(number of returns) rather than O(n). Every scenario reduces a trajectory
// to (completed excursion lengths, final height) and evaluates its Birkhoff
// sum in closed form through SignedLog.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "birkhoff/excursion_law.hpp"
#include "birkhoff/rng.hpp"
#include "birkhoff/signed_log.hpp"

namespace birkhoff {

enum class Scenario { Stretched, Degenerate, Decorated, Parity, IidGaussian };
enum class StartState { AtZero, AtOne };  // P (paths from 0), Q (paths from 1)
enum class MarkLaw { Uniform01, Gaussian01 };

std::string to_string(Scenario s);
std::string to_string(StartState s);
std::string to_string(MarkLaw m);
Scenario parse_scenario(const std::string& name);
StartState parse_start(const std::string& name);
MarkLaw parse_mark_law(const std::string& name);

struct ScenarioConfig {
  Scenario scenario = Scenario::Stretched;
  double alpha = 0.5;      // unused by IidGaussian
  double gamma = 2.0;      // Degenerate only
  std::int64_t n = 1000;
  std::int64_t samples = 1000;
  std::uint64_t seed = 1;
  int workers = 1;
  StartState start = StartState::AtZero;  // Parity only
  MarkLaw mark_law = MarkLaw::Uniform01;  // Decorated only

  /// Throws InvalidArgument on non-positive counts, alpha outside (0, 1),
  /// or gamma <= 1 for the degenerate scenario.
  void validate() const;
};

struct TrajectoryRecord {
  SignedLog ratio;                ///< S_n f / B_n
  std::int64_t height = 0;        ///< height of the walk at time n
  std::int64_t excursions = 0;    ///< completed excursions before time n
  std::optional<double> mark;     ///< last mark (Decorated only)
};

struct RatioSampleSet {
  ScenarioConfig config;
  std::vector<TrajectoryRecord> records;
  double normalization_logmag = 0.0;  ///< log B_n

  /// Ratios as doubles, clamped to +-1e300.
  std::vector<double> ratio_values() const;
};

struct HeightPath {
  std::vector<std::int64_t> lengths;  ///< completed excursion lengths
  std::int64_t final_height = 0;
};

/// Walk from height 0 for n steps. Invariant: sum(lengths) + final_height == n.
HeightPath simulate_height_path(const ExcursionLaw& law, std::int64_t n, RandomStream& rng);
/// Same, reusing `out` to avoid allocation in hot loops.
void simulate_height_path(const ExcursionLaw& law, std::int64_t n, RandomStream& rng,
                          HeightPath& out);

/// log B_n for the parity example: n^alpha, minus ln 2 for odd n.
double parity_log_normalization(std::int64_t n, double alpha);

RatioSampleSet run_stretched(const ScenarioConfig& config);
RatioSampleSet run_degenerate(const ScenarioConfig& config);
RatioSampleSet run_decorated(const ScenarioConfig& config);
RatioSampleSet run_parity(const ScenarioConfig& config);
RatioSampleSet run_iid_gaussian(const ScenarioConfig& config);

/// Dispatch on config.scenario. Samples are split into contiguous blocks, one
/// per worker; worker w draws from RandomStream(seed, w). Records come back in
/// sample order, so output is a pure function of (config, seed, workers).
RatioSampleSet run(const ScenarioConfig& config);

}  // namespace birkhoff
