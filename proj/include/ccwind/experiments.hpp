#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccwind/curiosity.hpp"
#include "ccwind/optimizer.hpp"
#include "ccwind/wind.hpp"

namespace ccwind {

struct SpeedRange {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const SpeedRange&, const SpeedRange&) = default;
};

/// Wind-speed classes (m/s).
inline constexpr SpeedRange kLightRange{0.45, 1.34};
inline constexpr SpeedRange kStrongRange{11.18, 13.86};

struct GroupSpec {
  WindFamily family = WindFamily::constant;
  std::string speed_class = "light";
  SpeedRange range = kLightRange;
  std::size_t n_environments = 5;
  int direction_sign = +1;
  std::array<bool, 3> axes{true, true, false};
  /// Per-axis speed ranges; when set they replace `range` on each active axis.
  std::optional<std::array<SpeedRange, 3>> axis_ranges;

  double shear_alpha = 0.143;
  double shear_ref_altitude = 1.0;
  double shear_min_altitude = 0.1;

  Vec3 turbulence_sigma{2.5, 2.5, 1.5};
  Vec3 turbulence_scale_length{200.0, 200.0, 50.0};
};

struct ScenarioSpec {
  std::string name;
  GroupSpec group1;
  GroupSpec group2;
};

/// The environments of one group before they become wind models: one
/// velocity per environment (sign applied), ascending in speed.
struct GroupPlan {
  GroupSpec spec;
  std::vector<Vec3> velocities;
};

/// Evenly spaced speeds over each group's range. Two groups of the same
/// family and the same range split that range: the lower half goes to
/// group 1, the upper half to group 2.
std::pair<GroupPlan, GroupPlan> plan_groups(const ScenarioSpec& spec);

/// Wind models for a plan. Dryden environments take their noise seed from
/// (seed, group_index, environment index) and their grid from `sim`.
EnvironmentGroup materialize(const GroupPlan& plan, const SimConfig& sim, std::uint64_t seed, int group_index,
                             const std::string& label);

std::pair<EnvironmentGroup, EnvironmentGroup> build_environments(const ScenarioSpec& spec, const SimConfig& sim,
                                                                 std::uint64_t seed);

GroupSpec make_group(WindFamily family, const std::string& speed_class, std::size_t n = 5);

/// The seven wind-condition pairs compared in the wind-speed experiment.
std::vector<ScenarioSpec> wind_speed_catalog();
ScenarioSpec direction_scenario();  // light constant vs light shear
ScenarioSpec cem_scenario();        // light shear vs light constant
/// Strong shear vs light constant with the explicit per-axis speeds used in
/// the worked single-loop example.
ScenarioSpec example_scenario();

struct ExperimentSettings {
  EvalContext eval;
  RandomSearchConfig search;
  CemConfig cem;
  std::uint64_t seed = 0;
};

struct SweepPoint {
  double sweep_value = 0.0;
  std::vector<LoopRecord> records;
  ScoreSummary summary;
  std::vector<Vec3> group1_velocities, group2_velocities;
};

struct ExperimentResult {
  std::string experiment;
  std::string scenario;
  std::string sweep_label;  // empty when there is no sweep
  ScenarioSpec spec;
  std::uint64_t seed = 0;
  std::vector<SweepPoint> points;
  ScoreSummary summary;  // over all records of all points
  std::optional<nlohmann::json> extra;
};

/// Random search at one fixed scenario.
ExperimentResult run_scenario(const ScenarioSpec& spec, const ExperimentSettings& settings,
                              const std::string& experiment = "windspeed");

std::vector<ExperimentResult> run_experiment_windspeed(const std::vector<ScenarioSpec>& scenarios,
                                                       const ExperimentSettings& settings);

/// Starts at `start_n` per group and drops the closest pair (top of the lower
/// group, bottom of the upper group) until 3 per group remain.
ExperimentResult run_experiment_range_similarity(const ScenarioSpec& spec, const ExperimentSettings& settings,
                                                 std::size_t start_n = 10);

/// Sizes 10, 8, 6, 4, 3 per group by removing median-speed environments.
ExperimentResult run_experiment_env_count(const ScenarioSpec& spec, const ExperimentSettings& settings,
                                          std::vector<std::size_t> sizes = {10, 8, 6, 4, 3});

ExperimentResult run_experiment_thrust_changes(const ScenarioSpec& spec, const ExperimentSettings& settings,
                                               std::vector<std::size_t> changes = {0, 2, 4, 6, 8, 10, 12});

/// Same-direction and opposite-direction (group 2 sign flipped) runs.
std::pair<ExperimentResult, ExperimentResult> run_experiment_direction(const ScenarioSpec& spec,
                                                                       const ExperimentSettings& settings);

struct CemExperimentResult {
  CemResult cem;
  ExperimentResult baseline;  // random search with the same evaluation count
  ScenarioSpec spec;
  std::uint64_t seed = 0;
};

CemExperimentResult run_experiment_cem(const ScenarioSpec& spec, const ExperimentSettings& settings);

// Sweep helpers, exposed for tests.
void drop_closest_pair(GroupPlan& a, GroupPlan& b);
void drop_median(GroupPlan& plan);

// Persistence. Files are written to a temporary name and renamed into place.
nlohmann::json to_json(const ScenarioSpec& spec);
nlohmann::json summary_json(const ExperimentResult& result);
std::string records_csv(const ExperimentResult& result);
std::string trajectory_csv(const Trajectory& trajectory);

/// Writes <stem>.csv and <stem>.json (and trajectory dumps under <stem>/
/// when `dump_trajectories`), returns the written paths.
std::vector<std::filesystem::path> persist_results(const ExperimentResult& result, const std::filesystem::path& dir,
                                                   const std::string& stem, bool dump_trajectories = false);
std::vector<std::filesystem::path> persist_cem(const CemExperimentResult& result, const std::filesystem::path& dir,
                                               const std::string& stem);

void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string slug(const std::string& name);

}  // namespace ccwind
