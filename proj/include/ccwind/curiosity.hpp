#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccwind/dynamics.hpp"
#include "ccwind/kmeans.hpp"
#include "ccwind/wind.hpp"

namespace ccwind {

/// Environments sharing one wind condition; one ground-truth cluster.
struct EnvironmentGroup {
  std::string label;
  std::vector<WindModel> environments;
};

/// Throws ParameterError if empty or if families are mixed.
void validate(const EnvironmentGroup& group);

/// Everything a loop evaluation needs besides the schedule and the groups.
struct EvalContext {
  UavParams uav;
  SimConfig sim;
  Metric metric;
  KMeansOptions kmeans;
  std::uint64_t seed = 0;  // environment noise and clustering restarts
  std::size_t jobs = 1;
  bool keep_trajectories = false;
};

struct LoopRecord {
  ThrustSchedule schedule;
  std::vector<int> assignments_group1;
  std::vector<int> assignments_group2;
  bool correct = false;
  double silhouette_raw = 0.0;
  double score = 0.0;
  bool degenerate = false;
  std::string error;  // set when the loop failed; score is then 0

  /// group1 environments first, then group2. Filled only when
  /// EvalContext::keep_trajectories is set.
  std::vector<Trajectory> trajectories;
};

/// 100 * silhouette when every trajectory is correctly separated, else 0.
double curiosity_score(bool correct, double silhouette_raw);

/// Simulates the schedule in every environment of both groups, clusters all
/// trajectories with k = 2 and scores the split.
LoopRecord evaluate_schedule(const ThrustSchedule& schedule, const EnvironmentGroup& group1,
                             const EnvironmentGroup& group2, const EvalContext& ctx);

/// Loop record that failed with `what`; score 0.
LoopRecord failed_record(const ThrustSchedule& schedule, std::string what);

// Serialization. CSV lists are space separated; the schedule is written as
// "t@fx fy fz" segments joined by ';'.
std::string loop_record_csv_header();
std::string to_csv_row(const LoopRecord& record);
nlohmann::json to_json(const ThrustSchedule& schedule);
ThrustSchedule schedule_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LoopRecord& record);
LoopRecord loop_record_from_json(const nlohmann::json& j);
std::string format_schedule(const ThrustSchedule& schedule);

}  // namespace ccwind
