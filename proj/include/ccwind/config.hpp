#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccwind/dynamics.hpp"
#include "ccwind/experiments.hpp"
#include "ccwind/kmeans.hpp"
#include "ccwind/optimizer.hpp"

namespace ccwind {

/// Fully resolved run configuration. Only the `uav` section (mass, drag_coeff,
/// cross_section, air_density) is mandatory; everything else has defaults.
struct RunConfig {
  std::uint64_t seed = 0;
  UavParams uav;
  SimConfig sim;
  Metric metric;
  KMeansOptions kmeans;
  RandomSearchConfig search;
  CemConfig cem;
  SpeedRange light = kLightRange;
  SpeedRange strong = kStrongRange;

  std::vector<ScenarioSpec> scenarios;         // wind-speed experiment
  std::vector<std::string> sweep_scenarios;    // names from `scenarios` used by the sweeps
  ScenarioSpec direction;
  ScenarioSpec cem_scenario;

  // `simulate` subcommand
  ThrustSchedule schedule;
  WindModel wind = ConstantWind{};
};

/// Throws ConfigError naming the offending field by its dotted path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const WindModel& wind);

ExperimentSettings settings_from(const RunConfig& config, std::size_t jobs);

/// Looks up a scenario by name in config.scenarios; ConfigError if absent.
const ScenarioSpec& find_scenario(const RunConfig& config, const std::string& name);

}  // namespace ccwind
