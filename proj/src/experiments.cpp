#include "ccwind/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "ccwind/error.hpp"
#include "ccwind/random.hpp"

namespace ccwind {

namespace {

constexpr std::uint64_t kSearchStream = 1;
constexpr std::uint64_t kEvalStream = 2;
constexpr std::uint64_t kCemStream = 3;
constexpr std::uint64_t kEnvStream = 4;

std::vector<double> linspace(const SpeedRange& r, std::size_t n) {
  if (r.hi < r.lo) throw ParameterError(fmt::format("speed range [{}, {}] is inverted", r.lo, r.hi));
  if (n == 1) return {0.5 * (r.lo + r.hi)};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

void set_axis(Vec3& v, int a, double value) { (a == 0 ? v.x : a == 1 ? v.y : v.z) = value; }

SpeedRange range_for_axis(const GroupSpec& g, int a) {
  return g.axis_ranges ? (*g.axis_ranges)[static_cast<std::size_t>(a)] : g.range;
}

// Velocities for `total` evenly spaced environments, of which [first, first+count) are kept.
std::vector<Vec3> spaced_velocities(const GroupSpec& g, std::size_t total, std::size_t first, std::size_t count) {
  std::vector<Vec3> out(count);
  for (int a = 0; a < 3; ++a) {
    if (!g.axes[static_cast<std::size_t>(a)]) continue;
    const std::vector<double> speeds = linspace(range_for_axis(g, a), total);
    for (std::size_t i = 0; i < count; ++i) set_axis(out[i], a, g.direction_sign * speeds[first + i]);
  }
  return out;
}

void check_group(const GroupSpec& g, const char* which) {
  if (g.n_environments < 1) throw ParameterError(std::string(which) + ": n_environments must be >= 1");
  if (g.direction_sign != 1 && g.direction_sign != -1)
    throw ParameterError(std::string(which) + ": direction_sign must be +1 or -1");
  for (int a = 0; a < 3; ++a) {
    const SpeedRange r = range_for_axis(g, a);
    if (r.hi < r.lo) throw ParameterError(fmt::format("{}: speed range [{}, {}] is inverted", which, r.lo, r.hi));
  }
}

bool shares_range(const GroupSpec& a, const GroupSpec& b) {
  return a.family == b.family && a.range == b.range && a.axis_ranges == b.axis_ranges && a.axes == b.axes;
}

double mean_speed(const GroupPlan& p) {
  double s = 0.0;
  for (const Vec3& v : p.velocities) s += norm(v);
  return p.velocities.empty() ? 0.0 : s / static_cast<double>(p.velocities.size());
}

ScoreSummary summarize_points(const std::vector<SweepPoint>& points) {
  std::vector<LoopRecord> all;
  for (const SweepPoint& p : points) all.insert(all.end(), p.records.begin(), p.records.end());
  return summarize(all);
}

ExperimentSettings derived(const ExperimentSettings& s) {
  ExperimentSettings out = s;
  out.search.seed = derive_seed(s.seed, kSearchStream);
  out.eval.seed = derive_seed(s.seed, kEvalStream);
  out.cem.seed = derive_seed(s.seed, kCemStream);
  return out;
}

SweepPoint run_point(const GroupPlan& g1, const GroupPlan& g2, const ExperimentSettings& s, double sweep_value,
                     const std::string& name) {
  const std::uint64_t env_seed = derive_seed(s.seed, kEnvStream);
  const EnvironmentGroup e1 = materialize(g1, s.eval.sim, env_seed, 1, name + " / group 1");
  const EnvironmentGroup e2 = materialize(g2, s.eval.sim, env_seed, 2, name + " / group 2");
  RandomSearchResult rs = random_search(e1, e2, s.search, s.eval);
  SweepPoint p;
  p.sweep_value = sweep_value;
  p.records = std::move(rs.records);
  p.summary = rs.summary;
  p.group1_velocities = g1.velocities;
  p.group2_velocities = g2.velocities;
  return p;
}

ExperimentResult make_result(std::string experiment, const ScenarioSpec& spec, const ExperimentSettings& s,
                             std::string sweep_label, std::vector<SweepPoint> points) {
  ExperimentResult r;
  r.experiment = std::move(experiment);
  r.scenario = spec.name;
  r.spec = spec;
  r.seed = s.seed;
  r.sweep_label = std::move(sweep_label);
  r.points = std::move(points);
  r.summary = summarize_points(r.points);
  return r;
}

nlohmann::json vec_json(const Vec3& v) { return {v.x, v.y, v.z}; }

}  // namespace

std::pair<GroupPlan, GroupPlan> plan_groups(const ScenarioSpec& spec) {
  check_group(spec.group1, "group1");
  check_group(spec.group2, "group2");
  GroupPlan p1{spec.group1, {}}, p2{spec.group2, {}};
  const std::size_t n1 = spec.group1.n_environments, n2 = spec.group2.n_environments;
  if (shares_range(spec.group1, spec.group2)) {
    p1.velocities = spaced_velocities(spec.group1, n1 + n2, 0, n1);
    p2.velocities = spaced_velocities(spec.group2, n1 + n2, n1, n2);
  } else {
    p1.velocities = spaced_velocities(spec.group1, n1, 0, n1);
    p2.velocities = spaced_velocities(spec.group2, n2, 0, n2);
  }
  return {std::move(p1), std::move(p2)};
}

EnvironmentGroup materialize(const GroupPlan& plan, const SimConfig& sim, std::uint64_t seed, int group_index,
                             const std::string& label) {
  EnvironmentGroup g;
  g.label = label;
  const GroupSpec& s = plan.spec;
  for (std::size_t i = 0; i < plan.velocities.size(); ++i) {
    const Vec3& v = plan.velocities[i];
    switch (s.family) {
      case WindFamily::constant:
        g.environments.emplace_back(ConstantWind{v});
        break;
      case WindFamily::shear:
        g.environments.emplace_back(ShearWind{v, s.shear_ref_altitude, s.shear_alpha, s.shear_min_altitude});
        break;
      case WindFamily::turbulence: {
        DrydenWind d;
        d.mean_wind = v;
        d.sigma = s.turbulence_sigma;
        d.scale_length = s.turbulence_scale_length;
        const double airspeed = std::max(norm(v), 1.0);
        d.airspeed = {airspeed, airspeed, airspeed};
        d.dt = sim.dt;
        d.horizon = sim.total_time;
        d.seed = derive_seed(derive_seed(seed, static_cast<std::uint64_t>(group_index)), i);
        g.environments.emplace_back(d);
        break;
      }
    }
  }
  validate(g);
  return g;
}

std::pair<EnvironmentGroup, EnvironmentGroup> build_environments(const ScenarioSpec& spec, const SimConfig& sim,
                                                                 std::uint64_t seed) {
  auto [p1, p2] = plan_groups(spec);
  return {materialize(p1, sim, seed, 1, spec.name + " / group 1"),
          materialize(p2, sim, seed, 2, spec.name + " / group 2")};
}

GroupSpec make_group(WindFamily family, const std::string& speed_class, std::size_t n) {
  GroupSpec g;
  g.family = family;
  g.speed_class = speed_class;
  if (speed_class == "light") {
    g.range = kLightRange;
  } else if (speed_class == "strong") {
    g.range = kStrongRange;
  } else {
    throw ParameterError("unknown speed class '" + speed_class + "'");
  }
  g.n_environments = n;
  return g;
}

std::vector<ScenarioSpec> wind_speed_catalog() {
  using F = WindFamily;
  return {
      {"light constant vs light constant", make_group(F::constant, "light"), make_group(F::constant, "light")},
      {"light constant vs strong constant", make_group(F::constant, "light"), make_group(F::constant, "strong")},
      {"strong constant vs strong constant", make_group(F::constant, "strong"), make_group(F::constant, "strong")},
      {"light shear vs light shear", make_group(F::shear, "light"), make_group(F::shear, "light")},
      {"light shear vs strong shear", make_group(F::shear, "light"), make_group(F::shear, "strong")},
      {"strong shear vs strong shear", make_group(F::shear, "strong"), make_group(F::shear, "strong")},
      {"light constant vs strong turbulence", make_group(F::constant, "light"), make_group(F::turbulence, "strong")},
  };
}

ScenarioSpec direction_scenario() {
  return {"light constant vs light shear", make_group(WindFamily::constant, "light"),
          make_group(WindFamily::shear, "light")};
}

ScenarioSpec cem_scenario() {
  return {"light shear vs light constant", make_group(WindFamily::shear, "light"),
          make_group(WindFamily::constant, "light")};
}

ScenarioSpec example_scenario() {
  ScenarioSpec s{"strong shear vs light constant", make_group(WindFamily::shear, "strong"),
                 make_group(WindFamily::constant, "light")};
  s.group1.axis_ranges = std::array<SpeedRange, 3>{SpeedRange{2.1, 2.5}, SpeedRange{10.1, 10.5}, SpeedRange{0, 0}};
  s.group2.axis_ranges = std::array<SpeedRange, 3>{SpeedRange{1.1, 1.5}, SpeedRange{1.1, 1.5}, SpeedRange{0, 0}};
  return s;
}

void drop_closest_pair(GroupPlan& a, GroupPlan& b) {
  GroupPlan& lower = mean_speed(a) <= mean_speed(b) ? a : b;
  GroupPlan& upper = &lower == &a ? b : a;
  if (lower.velocities.empty() || upper.velocities.empty()) throw ParameterError("sweep: group exhausted");
  auto by_speed = [](const Vec3& x, const Vec3& y) { return norm(x) < norm(y); };
  lower.velocities.erase(std::max_element(lower.velocities.begin(), lower.velocities.end(), by_speed));
  upper.velocities.erase(std::min_element(upper.velocities.begin(), upper.velocities.end(), by_speed));
}

void drop_median(GroupPlan& plan) {
  auto& v = plan.velocities;
  if (v.size() < 3) throw ParameterError("sweep: cannot drop a median from fewer than 3 environments");
  std::stable_sort(v.begin(), v.end(), [](const Vec3& x, const Vec3& y) { return norm(x) < norm(y); });
  v.erase(v.begin() + static_cast<std::ptrdiff_t>((v.size() - 1) / 2));
}

ExperimentResult run_scenario(const ScenarioSpec& spec, const ExperimentSettings& settings,
                              const std::string& experiment) {
  const ExperimentSettings s = derived(settings);
  auto [g1, g2] = plan_groups(spec);
  std::vector<SweepPoint> points;
  points.push_back(run_point(g1, g2, s, 0.0, spec.name));
  return make_result(experiment, spec, settings, "", std::move(points));
}

std::vector<ExperimentResult> run_experiment_windspeed(const std::vector<ScenarioSpec>& scenarios,
                                                       const ExperimentSettings& settings) {
  std::vector<ExperimentResult> out;
  out.reserve(scenarios.size());
  for (const ScenarioSpec& spec : scenarios) out.push_back(run_scenario(spec, settings, "windspeed"));
  return out;
}

ExperimentResult run_experiment_range_similarity(const ScenarioSpec& spec, const ExperimentSettings& settings,
                                                 std::size_t start_n) {
  if (start_n < 3) throw ParameterError("range similarity: start_n must be >= 3");
  const ExperimentSettings s = derived(settings);
  ScenarioSpec start = spec;
  start.group1.n_environments = start_n;
  start.group2.n_environments = start_n;
  auto [g1, g2] = plan_groups(start);
  std::vector<SweepPoint> points;
  for (std::size_t n = start_n;; --n) {
    points.push_back(run_point(g1, g2, s, static_cast<double>(n), spec.name));
    if (n == 3) break;
    drop_closest_pair(g1, g2);
  }
  return make_result("range_similarity", start, settings, "environments_per_group", std::move(points));
}

ExperimentResult run_experiment_env_count(const ScenarioSpec& spec, const ExperimentSettings& settings,
                                          std::vector<std::size_t> sizes) {
  if (sizes.empty()) throw ParameterError("env count: no sweep sizes");
  if (!std::is_sorted(sizes.rbegin(), sizes.rend()) || sizes.back() < 3)
    throw ParameterError("env count: sizes must be non-increasing and >= 3");
  const ExperimentSettings s = derived(settings);
  ScenarioSpec start = spec;
  start.group1.n_environments = sizes.front();
  start.group2.n_environments = sizes.front();
  auto [g1, g2] = plan_groups(start);
  std::vector<SweepPoint> points;
  for (std::size_t target : sizes) {
    while (g1.velocities.size() > target) drop_median(g1);
    while (g2.velocities.size() > target) drop_median(g2);
    points.push_back(run_point(g1, g2, s, static_cast<double>(target), spec.name));
  }
  return make_result("env_count", start, settings, "environments_per_group", std::move(points));
}

ExperimentResult run_experiment_thrust_changes(const ScenarioSpec& spec, const ExperimentSettings& settings,
                                               std::vector<std::size_t> changes) {
  auto [g1, g2] = plan_groups(spec);
  std::vector<SweepPoint> points;
  for (std::size_t c : changes) {
    ExperimentSettings s = derived(settings);
    s.search.n_changes = c;
    points.push_back(run_point(g1, g2, s, static_cast<double>(c), spec.name));
  }
  return make_result("thrust_changes", spec, settings, "thrust_changes", std::move(points));
}

std::pair<ExperimentResult, ExperimentResult> run_experiment_direction(const ScenarioSpec& spec,
                                                                       const ExperimentSettings& settings) {
  ScenarioSpec same = spec;
  same.name = spec.name + " - same direction";
  same.group1.direction_sign = +1;
  same.group2.direction_sign = +1;
  ScenarioSpec opposite = same;
  opposite.name = spec.name + " - opposite direction";
  opposite.group2.direction_sign = -1;
  return {run_scenario(same, settings, "direction"), run_scenario(opposite, settings, "direction")};
}

CemExperimentResult run_experiment_cem(const ScenarioSpec& spec, const ExperimentSettings& settings) {
  const ExperimentSettings s = derived(settings);
  auto [e1, e2] = build_environments(spec, s.eval.sim, derive_seed(s.seed, kEnvStream));
  CemExperimentResult out;
  out.spec = spec;
  out.seed = settings.seed;
  out.cem = cem_run(e1, e2, s.cem, s.eval);

  ExperimentSettings baseline = settings;
  baseline.search.n_loops = out.cem.evaluations;
  baseline.search.n_changes = s.cem.n_changes;
  baseline.search.max_magnitude = s.cem.max_magnitude;
  out.baseline = run_scenario(spec, baseline, "cem_baseline");
  return out;
}

std::string slug(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

nlohmann::json to_json(const ScenarioSpec& spec) {
  auto group = [](const GroupSpec& g) {
    nlohmann::json axes = nlohmann::json::array();
    for (int a = 0; a < 3; ++a)
      if (g.axes[static_cast<std::size_t>(a)]) axes.push_back(std::string(1, "xyz"[a]));
    nlohmann::json j = {{"family", to_string(g.family)},
                        {"speed_class", g.speed_class},
                        {"range", {g.range.lo, g.range.hi}},
                        {"n_environments", g.n_environments},
                        {"direction_sign", g.direction_sign},
                        {"axes", axes}};
    if (g.axis_ranges) {
      nlohmann::json ar = nlohmann::json::array();
      for (const SpeedRange& r : *g.axis_ranges) ar.push_back({r.lo, r.hi});
      j["axis_ranges"] = ar;
    }
    if (g.family == WindFamily::shear)
      j["shear"] = {{"alpha", g.shear_alpha},
                    {"ref_altitude", g.shear_ref_altitude},
                    {"min_altitude", g.shear_min_altitude}};
    if (g.family == WindFamily::turbulence)
      j["turbulence"] = {{"sigma", vec_json(g.turbulence_sigma)},
                         {"scale_length", vec_json(g.turbulence_scale_length)}};
    return j;
  };
  return {{"name", spec.name}, {"group1", group(spec.group1)}, {"group2", group(spec.group2)}};
}

nlohmann::json summary_json(const ExperimentResult& r) {
  nlohmann::json points = nlohmann::json::array();
  for (const SweepPoint& p : r.points) {
    std::size_t correct = 0, failed = 0;
    for (const LoopRecord& rec : p.records) {
      correct += rec.correct ? 1 : 0;
      failed += rec.error.empty() ? 0 : 1;
    }
    nlohmann::json g1 = nlohmann::json::array(), g2 = nlohmann::json::array();
    for (const Vec3& v : p.group1_velocities) g1.push_back(vec_json(v));
    for (const Vec3& v : p.group2_velocities) g2.push_back(vec_json(v));
    points.push_back({{"sweep_value", p.sweep_value},
                      {"loops", p.records.size()},
                      {"correct_loops", correct},
                      {"failed_loops", failed},
                      {"max", p.summary.max},
                      {"mean", p.summary.mean},
                      {"group1_wind", g1},
                      {"group2_wind", g2}});
  }
  nlohmann::json j = {{"experiment", r.experiment},
                      {"scenario", to_json(r.spec)},
                      {"seed", r.seed},
                      {"max", r.summary.max},
                      {"mean", r.summary.mean},
                      {"points", points}};
  if (!r.sweep_label.empty()) j["sweep"] = r.sweep_label;
  if (r.extra) j["extra"] = *r.extra;
  return j;
}

std::string records_csv(const ExperimentResult& r) {
  std::string out = "index,sweep_value," + loop_record_csv_header() + "\n";
  for (const SweepPoint& p : r.points)
    for (std::size_t i = 0; i < p.records.size(); ++i)
      out += fmt::format("{},{},{}\n", i, p.sweep_value, to_csv_row(p.records[i]));
  return out;
}

std::string trajectory_csv(const Trajectory& t) {
  std::string out = "t,x,y,z\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    out += fmt::format("{},{},{},{}\n", t.times[i], t.positions[i].x, t.positions[i].y, t.positions[i].z);
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::vector<std::filesystem::path> persist_results(const ExperimentResult& r, const std::filesystem::path& dir,
                                                   const std::string& stem, bool dump_trajectories) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written{dir / (stem + ".csv"), dir / (stem + ".json")};
  write_file_atomic(written[0], records_csv(r));
  write_file_atomic(written[1], summary_json(r).dump(2) + "\n");

  if (dump_trajectories) {
    const std::filesystem::path tdir = dir / (stem + "_trajectories");
    std::filesystem::create_directories(tdir, ec);
    if (ec) throw Error("cannot create " + tdir.string() + ": " + ec.message());
    for (std::size_t p = 0; p < r.points.size(); ++p) {
      for (std::size_t l = 0; l < r.points[p].records.size(); ++l) {
        const LoopRecord& rec = r.points[p].records[l];
        const std::size_t n1 = rec.assignments_group1.size();
        for (std::size_t e = 0; e < rec.trajectories.size(); ++e) {
          const auto name = fmt::format("p{:02}_l{:03}_g{}_e{:02}.csv", p, l, e < n1 ? 1 : 2, e < n1 ? e : e - n1);
          written.push_back(tdir / name);
          write_file_atomic(written.back(), trajectory_csv(rec.trajectories[e]));
        }
      }
    }
  }
  return written;
}

std::vector<std::filesystem::path> persist_cem(const CemExperimentResult& r, const std::filesystem::path& dir,
                                               const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());

  std::string csv = "iteration,max,mean,best_so_far\n";
  nlohmann::json history = nlohmann::json::array();
  for (const CemIteration& it : r.cem.history) {
    csv += fmt::format("{},{},{},{}\n", it.iteration, it.max, it.mean, it.best_so_far);
    history.push_back({{"iteration", it.iteration}, {"max", it.max}, {"mean", it.mean}, {"best_so_far", it.best_so_far}});
  }
  nlohmann::json j = {{"experiment", "cem"},
                      {"scenario", to_json(r.spec)},
                      {"seed", r.seed},
                      {"evaluations", r.cem.evaluations},
                      {"history", history},
                      {"best", to_json(r.cem.best)},
                      {"baseline", {{"loops", r.baseline.points.empty() ? 0 : r.baseline.points[0].records.size()},
                                    {"max", r.baseline.summary.max},
                                    {"mean", r.baseline.summary.mean}}}};
  std::vector<std::filesystem::path> written{dir / (stem + ".csv"), dir / (stem + ".json")};
  write_file_atomic(written[0], csv);
  write_file_atomic(written[1], j.dump(2) + "\n");
  for (auto& p : persist_results(r.baseline, dir, stem + "_baseline")) written.push_back(p);
  return written;
}

}  // namespace ccwind
