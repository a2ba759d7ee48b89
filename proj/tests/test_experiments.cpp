#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ccwind/error.hpp"
#include "ccwind/experiments.hpp"

using namespace ccwind;
namespace fs = std::filesystem;

namespace {

ExperimentSettings quick(std::size_t loops = 1) {
  ExperimentSettings s;
  s.search.n_loops = loops;
  s.eval.kmeans.n_init = 2;
  s.seed = 11;
  return s;
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream f(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(f, line)) ++n;
  return n;
}

std::string read_all(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("ccwind_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(PlanGroups, WorkedExampleVelocities) {
  const auto [p1, p2] = plan_groups(example_scenario());
  ASSERT_EQ(p1.velocities.size(), 5u);
  ASSERT_EQ(p2.velocities.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(p1.velocities[i].x, 2.1 + 0.1 * i, 1e-12);
    EXPECT_NEAR(p1.velocities[i].y, 10.1 + 0.1 * i, 1e-12);
    EXPECT_EQ(p1.velocities[i].z, 0.0);
    EXPECT_NEAR(p2.velocities[i].x, 1.1 + 0.1 * i, 1e-12);
    EXPECT_NEAR(p2.velocities[i].y, 1.1 + 0.1 * i, 1e-12);
    EXPECT_EQ(p2.velocities[i].z, 0.0);
  }
  const auto [e1, e2] = build_environments(example_scenario(), SimConfig{}, 0);
  EXPECT_EQ(family_of(e1.environments[0]), WindFamily::shear);
  EXPECT_EQ(family_of(e2.environments[0]), WindFamily::constant);
}

TEST(PlanGroups, SingleEnvironmentTakesMidpoint) {
  ScenarioSpec s = direction_scenario();
  s.group1.n_environments = 1;
  const auto [p1, p2] = plan_groups(s);
  ASSERT_EQ(p1.velocities.size(), 1u);
  EXPECT_NEAR(p1.velocities[0].x, 0.5 * (kLightRange.lo + kLightRange.hi), 1e-12);
}

TEST(PlanGroups, RejectsInvalidGroups) {
  ScenarioSpec s = direction_scenario();
  s.group2.range = {3.0, 1.0};
  EXPECT_THROW(plan_groups(s), ParameterError);
  s = direction_scenario();
  s.group1.n_environments = 0;
  EXPECT_THROW(plan_groups(s), ParameterError);
  s = direction_scenario();
  s.group1.direction_sign = 0;
  EXPECT_THROW(plan_groups(s), ParameterError);
  EXPECT_THROW(make_group(WindFamily::constant, "gale"), ParameterError);
}

TEST(PlanGroups, SameFamilySameRangeIsSplit) {
  const ScenarioSpec s = wind_speed_catalog().front();
  const auto [p1, p2] = plan_groups(s);
  ASSERT_EQ(p1.velocities.size(), 5u);
  ASSERT_EQ(p2.velocities.size(), 5u);
  EXPECT_NEAR(p1.velocities.front().x, kLightRange.lo, 1e-12);
  EXPECT_NEAR(p2.velocities.back().x, kLightRange.hi, 1e-12);
  EXPECT_LT(norm(p1.velocities.back()), norm(p2.velocities.front()));
  const double step = (kLightRange.hi - kLightRange.lo) / 9.0;
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(p2.velocities[i].x, kLightRange.lo + step * (5 + i), 1e-12);
}

TEST(PlanGroups, DirectionSignApplied) {
  ScenarioSpec s = direction_scenario();
  s.group2.direction_sign = -1;
  const auto [p1, p2] = plan_groups(s);
  for (const Vec3& v : p1.velocities) EXPECT_GT(v.x, 0.0);
  for (const Vec3& v : p2.velocities) {
    EXPECT_LT(v.x, 0.0);
    EXPECT_LT(v.y, 0.0);
  }
}

TEST(PlanGroups, TurbulenceSeedsDifferPerEnvironment) {
  const ScenarioSpec s = wind_speed_catalog().back();
  const auto [a1, a2] = build_environments(s, SimConfig{}, 4);
  const auto [b1, b2] = build_environments(s, SimConfig{}, 4);
  ASSERT_EQ(a2.environments.size(), 5u);
  const auto& d0 = std::get<DrydenWind>(a2.environments[0]);
  const auto& d1 = std::get<DrydenWind>(a2.environments[1]);
  EXPECT_NE(d0.seed, d1.seed);
  EXPECT_EQ(d0.seed, std::get<DrydenWind>(b2.environments[0]).seed);
  EXPECT_EQ(d0.horizon, 12.0);
}

TEST(Catalog, SevenPairs) {
  const auto c = wind_speed_catalog();
  ASSERT_EQ(c.size(), 7u);
  for (const auto& s : c) {
    EXPECT_EQ(s.group1.n_environments, 5u);
    EXPECT_EQ(s.group2.n_environments, 5u);
  }
  EXPECT_EQ(c[1].group2.range, kStrongRange);
  EXPECT_EQ(c.back().group2.family, WindFamily::turbulence);
}

TEST(SweepHelpers, DropClosestPairWidensGap) {
  ScenarioSpec s = wind_speed_catalog().front();
  s.group1.n_environments = s.group2.n_environments = 10;
  auto [g1, g2] = plan_groups(s);
  double gap = norm(g2.velocities.front()) - norm(g1.velocities.back());
  for (std::size_t n = 10; n > 3; --n) {
    drop_closest_pair(g1, g2);
    ASSERT_EQ(g1.velocities.size(), n - 1);
    ASSERT_EQ(g2.velocities.size(), n - 1);
    const double next = norm(g2.velocities.front()) - norm(g1.velocities.back());
    EXPECT_GT(next, gap);
    gap = next;
  }
  EXPECT_NEAR(g1.velocities.front().x, kLightRange.lo, 1e-12);
  EXPECT_NEAR(g2.velocities.back().x, kLightRange.hi, 1e-12);
}

TEST(SweepHelpers, DropClosestPairHandlesReversedGroups) {
  ScenarioSpec s = wind_speed_catalog()[1];
  std::swap(s.group1, s.group2);
  auto [strong, light] = plan_groups(s);
  const double light_max = norm(light.velocities.back());
  const double strong_min = norm(strong.velocities.front());
  drop_closest_pair(strong, light);
  for (const Vec3& v : light.velocities) EXPECT_LT(norm(v), light_max);
  for (const Vec3& v : strong.velocities) EXPECT_GT(norm(v), strong_min);
}

TEST(SweepHelpers, DropMedianKeepsEndpoints) {
  ScenarioSpec s = direction_scenario();
  s.group1.n_environments = 10;
  auto [g1, g2] = plan_groups(s);
  const Vec3 lo = g1.velocities.front(), hi = g1.velocities.back();
  for (std::size_t n = 10; n > 3; --n) {
    drop_median(g1);
    EXPECT_EQ(g1.velocities.size(), n - 1);
    EXPECT_EQ(g1.velocities.front(), lo);
    EXPECT_EQ(g1.velocities.back(), hi);
  }
  GroupPlan tiny{s.group1, {Vec3{1, 0, 0}, Vec3{2, 0, 0}}};
  EXPECT_THROW(drop_median(tiny), ParameterError);
}

TEST(Experiments, RangeSimilaritySweep) {
  const ExperimentResult r = run_experiment_range_similarity(wind_speed_catalog().front(), quick());
  ASSERT_EQ(r.points.size(), 8u);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const SweepPoint& p = r.points[i];
    EXPECT_EQ(p.sweep_value, 10.0 - static_cast<double>(i));
    EXPECT_EQ(p.group1_velocities.size(), p.group2_velocities.size());
    EXPECT_EQ(p.group1_velocities.size(), 10 - i);
    EXPECT_EQ(p.records.size(), 1u);
  }
}

TEST(Experiments, EnvCountSweep) {
  const ExperimentResult r = run_experiment_env_count(direction_scenario(), quick());
  const std::vector<double> sizes{10, 8, 6, 4, 3};
  ASSERT_EQ(r.points.size(), sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    EXPECT_EQ(r.points[i].sweep_value, sizes[i]);
    EXPECT_EQ(r.points[i].group1_velocities.size(), static_cast<std::size_t>(sizes[i]));
    EXPECT_EQ(r.points[i].group1_velocities.front(), r.points[0].group1_velocities.front());
    EXPECT_EQ(r.points[i].group2_velocities.back(), r.points[0].group2_velocities.back());
  }
  EXPECT_THROW(run_experiment_env_count(direction_scenario(), quick(), {3, 5}), ParameterError);
  EXPECT_THROW(run_experiment_env_count(direction_scenario(), quick(), {4, 2}), ParameterError);
}

TEST(Experiments, ThrustChangeSweep) {
  const ExperimentResult r = run_experiment_thrust_changes(wind_speed_catalog()[1], quick());
  ASSERT_EQ(r.points.size(), 7u);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const std::size_t changes = 2 * i;
    EXPECT_EQ(r.points[i].sweep_value, static_cast<double>(changes));
    for (const LoopRecord& rec : r.points[i].records) EXPECT_EQ(rec.schedule.size(), changes + 1);
  }
}

TEST(Experiments, DirectionFlipsOnlyGroupTwo) {
  const auto [same, opposite] = run_experiment_direction(direction_scenario(), quick());
  EXPECT_EQ(same.spec.group1.direction_sign, 1);
  EXPECT_EQ(same.spec.group2.direction_sign, 1);
  EXPECT_EQ(opposite.spec.group1.direction_sign, 1);
  EXPECT_EQ(opposite.spec.group2.direction_sign, -1);
  EXPECT_EQ(same.points[0].group1_velocities, opposite.points[0].group1_velocities);
  for (std::size_t i = 0; i < 5; ++i)
    EXPECT_EQ(opposite.points[0].group2_velocities[i], -1.0 * same.points[0].group2_velocities[i]);
}

TEST(Experiments, SummaryRecomputableFromRecords) {
  const ExperimentResult r = run_scenario(wind_speed_catalog()[1], quick(3));
  ASSERT_EQ(r.points[0].records.size(), 3u);
  double mx = 0.0, sum = 0.0;
  for (const LoopRecord& rec : r.points[0].records) {
    mx = std::max(mx, rec.score);
    sum += rec.score;
  }
  EXPECT_NEAR(r.summary.max, mx, 1e-12);
  EXPECT_NEAR(r.summary.mean, sum / 3.0, 1e-12);
}

TEST(Experiments, SameSeedSameResult) {
  const ExperimentResult a = run_scenario(direction_scenario(), quick(2));
  const ExperimentResult b = run_scenario(direction_scenario(), quick(2));
  EXPECT_EQ(summary_json(a).dump(), summary_json(b).dump());
  EXPECT_EQ(records_csv(a), records_csv(b));
  ExperimentSettings threaded = quick(2);
  threaded.eval.jobs = 3;
  EXPECT_EQ(records_csv(a), records_csv(run_scenario(direction_scenario(), threaded)));
}

TEST(Persistence, WritesCsvJsonAndTrajectories) {
  ExperimentSettings s = quick(2);
  s.eval.keep_trajectories = true;
  const ExperimentResult r = run_scenario(wind_speed_catalog()[1], s);
  const fs::path dir = scratch_dir("persist");
  const auto written = persist_results(r, dir, "run", true);
  ASSERT_EQ(written.size(), 2u + 2u * 10u);
  EXPECT_EQ(count_lines(dir / "run.csv"), 3u);
  const auto j = nlohmann::json::parse(read_all(dir / "run.json"));
  EXPECT_EQ(j["max"].get<double>(), r.summary.max);
  EXPECT_EQ(j["mean"].get<double>(), r.summary.mean);
  EXPECT_EQ(j["points"][0]["loops"].get<std::size_t>(), 2u);
  EXPECT_EQ(j["scenario"]["name"], wind_speed_catalog()[1].name);
  EXPECT_EQ(count_lines(written[2]), 122u);
  EXPECT_EQ(written[2].filename(), "p00_l000_g1_e00.csv");
  for (const auto& e : fs::directory_iterator(dir)) EXPECT_NE(e.path().extension(), ".tmp");
  fs::remove_all(dir);
}

TEST(Persistence, CemFiles) {
  ExperimentSettings s = quick();
  s.cem.n_samples = 4;
  s.cem.n_elite = 2;
  s.cem.max_iterations = 2;
  s.cem.n_changes = 1;
  const CemExperimentResult r = run_experiment_cem(wind_speed_catalog()[1], s);
  EXPECT_EQ(r.cem.evaluations, 8u);
  EXPECT_EQ(r.baseline.points[0].records.size(), 8u);
  for (const LoopRecord& rec : r.baseline.points[0].records) EXPECT_EQ(rec.schedule.size(), 2u);
  const fs::path dir = scratch_dir("cem");
  persist_cem(r, dir, "cem");
  EXPECT_EQ(count_lines(dir / "cem.csv"), 1u + r.cem.history.size());
  const auto j = nlohmann::json::parse(read_all(dir / "cem.json"));
  EXPECT_EQ(j["evaluations"].get<std::size_t>(), 8u);
  EXPECT_EQ(j["baseline"]["max"].get<double>(), r.baseline.summary.max);
  EXPECT_TRUE(fs::exists(dir / "cem_baseline.csv"));
  fs::remove_all(dir);
}

TEST(Persistence, AtomicWriteReplacesAndReportsPath) {
  const fs::path dir = scratch_dir("atomic");
  write_file_atomic(dir / "a.txt", "first");
  write_file_atomic(dir / "a.txt", "second");
  EXPECT_EQ(read_all(dir / "a.txt"), "second");
  EXPECT_FALSE(fs::exists(dir / "a.txt.tmp"));
  try {
    write_file_atomic(dir / "missing" / "b.txt", "x");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
  }
  fs::remove_all(dir);
}

TEST(Persistence, TrajectoryCsvFormat) {
  Trajectory t;
  t.times = {0.0, 0.1};
  t.positions = {{0, 0, 0}, {1, 2, 3.5}};
  t.velocities = {{}, {}};
  EXPECT_EQ(trajectory_csv(t), "t,x,y,z\n0,0,0,0\n0.1,1,2,3.5\n");
}

TEST(Slug, Normalizes) {
  EXPECT_EQ(slug("light constant vs strong constant"), "light_constant_vs_strong_constant");
  EXPECT_EQ(slug("A -- B!"), "a_b");
}
