#include "ccwind/curiosity.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "ccwind/error.hpp"
#include "ccwind/parallel.hpp"
#include "ccwind/random.hpp"
#include "ccwind/silhouette.hpp"

namespace ccwind {

void validate(const EnvironmentGroup& group) {
  if (group.environments.empty()) throw ParameterError("environment group '" + group.label + "' is empty");
  const WindFamily family = family_of(group.environments.front());
  for (const WindModel& m : group.environments) {
    if (family_of(m) != family)
      throw ParameterError("environment group '" + group.label + "' mixes wind model families");
    validate(m);
  }
}

double curiosity_score(bool correct, double silhouette_raw) {
  if (!correct) return 0.0;
  return std::clamp(100.0 * silhouette_raw, 0.0, 100.0);
}

LoopRecord failed_record(const ThrustSchedule& schedule, std::string what) {
  LoopRecord r;
  r.schedule = schedule;
  r.error = std::move(what);
  return r;
}

LoopRecord evaluate_schedule(const ThrustSchedule& schedule, const EnvironmentGroup& group1,
                             const EnvironmentGroup& group2, const EvalContext& ctx) {
  validate(group1);
  validate(group2);
  if (schedule.empty()) throw ScheduleError("thrust schedule is empty");

  const std::size_t n1 = group1.environments.size();
  const std::size_t n = n1 + group2.environments.size();
  std::vector<Trajectory> trajectories(n);
  parallel_for(n, ctx.jobs, [&](std::size_t i) {
    const WindModel& wind = i < n1 ? group1.environments[i] : group2.environments[i - n1];
    trajectories[i] = simulate(ctx.uav, schedule, WindField(wind, ctx.sim.initial_altitude_offset, ctx.seed), ctx.sim);
  });

  std::vector<Series> series;
  series.reserve(n);
  for (const Trajectory& t : trajectories) series.push_back(Series::from_points(t.positions));

  LoopRecord record;
  record.schedule = schedule;
  if (ctx.keep_trajectories) record.trajectories = trajectories;

  const bool all_identical =
      std::all_of(series.begin(), series.end(), [&](const Series& s) { return s == series.front(); });
  if (all_identical) {
    record.degenerate = true;
    record.assignments_group1.assign(n1, 0);
    record.assignments_group2.assign(n - n1, 0);
    return record;
  }

  // Cluster in a canonical (lexicographic) order so the result does not
  // depend on which group is listed first.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(series[a].data().begin(), series[a].data().end(), series[b].data().begin(),
                                        series[b].data().end());
  });
  std::vector<Series> canonical;
  canonical.reserve(n);
  for (std::size_t i : order) canonical.push_back(series[i]);

  KMeansOptions km = ctx.kmeans;
  km.seed = derive_seed(ctx.seed, 0x6b6d65616e73ULL);
  const ClusterModel model = kmeans(canonical, 2, ctx.metric, km);
  std::vector<int> labels(n);
  for (std::size_t r = 0; r < n; ++r) labels[order[r]] = model.assignments[r];
  record.assignments_group1.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n1));
  record.assignments_group2.assign(labels.begin() + static_cast<std::ptrdiff_t>(n1), labels.end());

  const auto uniform = [](const std::vector<int>& v) {
    return std::all_of(v.begin(), v.end(), [&](int l) { return l == v.front(); });
  };
  record.correct = uniform(record.assignments_group1) && uniform(record.assignments_group2) &&
                   record.assignments_group1.front() != record.assignments_group2.front();
  record.silhouette_raw = silhouette(canonical, model.assignments, ctx.metric);
  record.score = curiosity_score(record.correct, record.silhouette_raw);
  return record;
}

namespace {

std::string join_ints(const std::vector<int>& v) {
  return fmt::format("{}", fmt::join(v, " "));
}

}  // namespace

std::string format_schedule(const ThrustSchedule& schedule) {
  std::string out;
  for (const ThrustSegment& s : schedule.segments()) {
    if (!out.empty()) out += ';';
    out += fmt::format("{}@{} {} {}", s.start_time, s.force.x, s.force.y, s.force.z);
  }
  return out;
}

std::string loop_record_csv_header() {
  return "schedule,assignments_group1,assignments_group2,correct,silhouette_raw,score";
}

std::string to_csv_row(const LoopRecord& r) {
  return fmt::format("{},{},{},{},{},{}", format_schedule(r.schedule), join_ints(r.assignments_group1),
                     join_ints(r.assignments_group2), r.correct ? "true" : "false", r.silhouette_raw, r.score);
}

nlohmann::json to_json(const ThrustSchedule& schedule) {
  nlohmann::json segs = nlohmann::json::array();
  for (const ThrustSegment& s : schedule.segments())
    segs.push_back({{"start_time", s.start_time}, {"force", {s.force.x, s.force.y, s.force.z}}});
  return segs;
}

ThrustSchedule schedule_from_json(const nlohmann::json& j) {
  std::vector<ThrustSegment> segs;
  for (const auto& s : j) {
    const auto& f = s.at("force");
    segs.push_back({s.at("start_time").get<double>(), {f.at(0).get<double>(), f.at(1).get<double>(), f.at(2).get<double>()}});
  }
  return ThrustSchedule(std::move(segs));
}

nlohmann::json to_json(const LoopRecord& r) {
  nlohmann::json j = {{"schedule", to_json(r.schedule)},
                      {"assignments_group1", r.assignments_group1},
                      {"assignments_group2", r.assignments_group2},
                      {"correct", r.correct},
                      {"silhouette_raw", r.silhouette_raw},
                      {"score", r.score}};
  if (r.degenerate) j["degenerate"] = true;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

LoopRecord loop_record_from_json(const nlohmann::json& j) {
  LoopRecord r;
  r.schedule = schedule_from_json(j.at("schedule"));
  r.assignments_group1 = j.at("assignments_group1").get<std::vector<int>>();
  r.assignments_group2 = j.at("assignments_group2").get<std::vector<int>>();
  r.correct = j.at("correct").get<bool>();
  r.silhouette_raw = j.at("silhouette_raw").get<double>();
  r.score = j.at("score").get<double>();
  r.degenerate = j.value("degenerate", false);
  r.error = j.value("error", std::string{});
  return r;
}

}  // namespace ccwind
