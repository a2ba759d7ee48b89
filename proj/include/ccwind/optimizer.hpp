#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ccwind/curiosity.hpp"
#include "ccwind/dynamics.hpp"
#include "ccwind/random.hpp"

namespace ccwind {

enum class DirectionMode { axis_aligned, unit_sphere };

struct RandomSearchConfig {
  std::size_t n_loops = 50;
  std::size_t n_changes = 6;
  double max_magnitude = 50.0;  // N
  DirectionMode direction_mode = DirectionMode::axis_aligned;
  std::uint64_t seed = 0;
};

void validate(const RandomSearchConfig& cfg);

/// Change times uniform in (0, total_time), sorted, with t = 0 prepended.
std::vector<double> sample_change_times(std::size_t n_changes, double total_time, Rng& rng);

/// n_changes + 1 segments, magnitude uniform in [0, max_magnitude],
/// direction from `direction_mode`.
ThrustSchedule sample_random_schedule(const RandomSearchConfig& cfg, double total_time, Rng& rng);

struct ScoreSummary {
  double max = 0.0;
  double mean = 0.0;
};

ScoreSummary summarize(const std::vector<LoopRecord>& records);

struct RandomSearchResult {
  std::vector<LoopRecord> records;
  ScoreSummary summary;
};

/// Loop i samples its schedule from derive_seed(cfg.seed, i). Loops that throw
/// are kept as score-0 records carrying the error text.
RandomSearchResult random_search(const EnvironmentGroup& group1, const EnvironmentGroup& group2,
                                 const RandomSearchConfig& cfg, const EvalContext& ctx);

struct CemConfig {
  std::size_t n_samples = 30;
  std::size_t n_elite = 4;
  std::size_t max_iterations = 20;
  std::size_t stall_patience = 5;
  double min_sigma = 0.1;  // N; stop once every magnitude sigma is below it
  std::size_t n_changes = 6;
  double max_magnitude = 50.0;
  double init_mu_mag = 25.0;
  double init_sigma_mag = 50.0;
  Vec3 init_mu_dir{0.0, 0.0, 0.0};
  Vec3 init_sigma_dir{0.33, 0.33, 0.33};
  std::uint64_t seed = 0;
};

void validate(const CemConfig& cfg);

/// Per-segment Gaussian over thrust magnitude and raw direction components.
/// Change times are drawn once per run and stay fixed.
struct CemState {
  std::vector<double> change_times;
  std::vector<double> mu_mag, sigma_mag;
  std::vector<Vec3> mu_dir, sigma_dir;
  std::size_t iteration = 0;

  std::size_t segments() const noexcept { return change_times.size(); }
};

CemState cem_initial_state(const CemConfig& cfg, double total_time, Rng& rng);

/// One candidate: the parameters actually evaluated (clamped magnitude,
/// unit direction) and the schedule built from them.
struct CemSample {
  std::vector<double> magnitudes;
  std::vector<Vec3> directions;
  ThrustSchedule schedule;
};

std::vector<CemSample> cem_sample(const CemState& state, const CemConfig& cfg, Rng& rng);

/// Refit mean and population variance (divide by n_elite) per coordinate to
/// the n_elite best samples. Ties in score go to the lower sample index.
CemState cem_update(const CemState& state, const std::vector<CemSample>& samples,
                    const std::vector<double>& scores, const CemConfig& cfg);

struct CemIteration {
  std::size_t iteration = 0;
  double max = 0.0;
  double mean = 0.0;
  double best_so_far = 0.0;
};

struct CemResult {
  std::vector<CemIteration> history;
  LoopRecord best;
  CemState final_state;
  std::vector<LoopRecord> records;  // every evaluated sample, in order
  std::size_t evaluations = 0;
};

CemResult cem_run(const EnvironmentGroup& group1, const EnvironmentGroup& group2, const CemConfig& cfg,
                  const EvalContext& ctx);

}  // namespace ccwind
