#include <random>

#include <gtest/gtest.h>

#include "ccwind/curiosity.hpp"
#include "ccwind/error.hpp"
#include "ccwind/experiments.hpp"
#include "ccwind/optimizer.hpp"

using namespace ccwind;

namespace {

ThrustSchedule table_schedule() { return ThrustSchedule({{0.0, {0, 0, 40}}, {4.0, {15, 0, 0}}, {10.0, {0, 45, 0}}}); }

EnvironmentGroup constant_group(const std::string& label, double base, std::size_t n) {
  EnvironmentGroup g{label, {}};
  for (std::size_t i = 0; i < n; ++i) g.environments.push_back(ConstantWind{{base + 0.1 * i, base + 0.1 * i, 0}});
  return g;
}

}  // namespace

TEST(CuriosityScore, ZeroingAndClamp) {
  EXPECT_EQ(curiosity_score(false, 0.9), 0.0);
  EXPECT_EQ(curiosity_score(true, 0.5), 50.0);
  EXPECT_EQ(curiosity_score(true, -0.3), 0.0);
  EXPECT_EQ(curiosity_score(true, 1.0), 100.0);
}

TEST(EvaluateSchedule, WorkedExampleSeparatesGroups) {
  const auto [g1, g2] = build_environments(example_scenario(), SimConfig{}, 0);
  EvalContext ctx;
  const LoopRecord r = evaluate_schedule(table_schedule(), g1, g2, ctx);
  ASSERT_EQ(r.assignments_group1.size(), 5u);
  ASSERT_EQ(r.assignments_group2.size(), 5u);
  EXPECT_TRUE(r.correct);
  for (int l : r.assignments_group1) EXPECT_EQ(l, r.assignments_group1.front());
  for (int l : r.assignments_group2) EXPECT_NE(l, r.assignments_group1.front());
  EXPECT_GT(r.score, 85.0);
  EXPECT_DOUBLE_EQ(r.score, 100.0 * r.silhouette_raw);
}

TEST(EvaluateSchedule, IdenticalGroupsScoreZero) {
  const EnvironmentGroup g = constant_group("same", 0.5, 5);
  const LoopRecord r = evaluate_schedule(table_schedule(), g, g, EvalContext{});
  EXPECT_FALSE(r.correct);
  EXPECT_EQ(r.score, 0.0);
}

TEST(EvaluateSchedule, AllIdenticalTrajectoriesAreDegenerate) {
  const EnvironmentGroup g{"calm", {ConstantWind{}, ConstantWind{}}};
  const LoopRecord r = evaluate_schedule(table_schedule(), g, g, EvalContext{});
  EXPECT_TRUE(r.degenerate);
  EXPECT_FALSE(r.correct);
  EXPECT_EQ(r.score, 0.0);
}

TEST(EvaluateSchedule, OpposedStrongWindsAlwaysSeparate) {
  const EnvironmentGroup east = constant_group("east", 50.0, 5);
  const EnvironmentGroup west = constant_group("west", -50.4, 5);
  RandomSearchConfig rs;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    EvalContext ctx;
    ctx.seed = seed;
    const LoopRecord r = evaluate_schedule(sample_random_schedule(rs, 12.0, rng), east, west, ctx);
    EXPECT_TRUE(r.correct) << "seed " << seed;
    EXPECT_GT(r.score, 90.0) << "seed " << seed;
  }
}

TEST(EvaluateSchedule, SymmetricInGroupOrder) {
  const auto [g1, g2] = build_environments(direction_scenario(), SimConfig{}, 3);
  RandomSearchConfig rs;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Rng rng(seed);
    const ThrustSchedule s = sample_random_schedule(rs, 12.0, rng);
    EvalContext ctx;
    ctx.seed = seed;
    const LoopRecord ab = evaluate_schedule(s, g1, g2, ctx);
    const LoopRecord ba = evaluate_schedule(s, g2, g1, ctx);
    EXPECT_EQ(ab.score, ba.score);
    EXPECT_EQ(ab.correct, ba.correct);
    EXPECT_EQ(ab.silhouette_raw, ba.silhouette_raw);
  }
}

TEST(EvaluateSchedule, DeterministicAndJobIndependent) {
  ScenarioSpec spec = wind_speed_catalog().back();  // includes Dryden environments
  const auto [g1, g2] = build_environments(spec, SimConfig{}, 9);
  EvalContext one, many;
  one.seed = many.seed = 5;
  many.jobs = 4;
  const LoopRecord a = evaluate_schedule(table_schedule(), g1, g2, one);
  const LoopRecord b = evaluate_schedule(table_schedule(), g1, g2, many);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(EvaluateSchedule, KeepsTrajectoriesOnRequest) {
  const EnvironmentGroup a = constant_group("a", 1.0, 2), b = constant_group("b", 9.0, 3);
  EvalContext ctx;
  EXPECT_TRUE(evaluate_schedule(table_schedule(), a, b, ctx).trajectories.empty());
  ctx.keep_trajectories = true;
  const LoopRecord r = evaluate_schedule(table_schedule(), a, b, ctx);
  ASSERT_EQ(r.trajectories.size(), 5u);
  EXPECT_EQ(r.trajectories[0].size(), 121u);
}

TEST(EnvironmentGroup, Validation) {
  EXPECT_THROW(validate(EnvironmentGroup{"empty", {}}), ParameterError);
  EXPECT_THROW(validate(EnvironmentGroup{"mixed", {ConstantWind{}, ShearWind{}}}), ParameterError);
  EXPECT_NO_THROW(validate(EnvironmentGroup{"ok", {ShearWind{}, ShearWind{{1, 1, 0}}}}));
}

TEST(LoopRecord, CsvRow) {
  LoopRecord r;
  r.schedule = table_schedule();
  r.assignments_group1 = {1, 1};
  r.assignments_group2 = {0, 0};
  r.correct = true;
  r.silhouette_raw = 0.5;
  r.score = 50.0;
  EXPECT_EQ(loop_record_csv_header(), "schedule,assignments_group1,assignments_group2,correct,silhouette_raw,score");
  EXPECT_EQ(to_csv_row(r), "0@0 0 40;4@15 0 0;10@0 45 0,1 1,0 0,true,0.5,50");
}

TEST(LoopRecord, JsonRoundTrip) {
  const auto [g1, g2] = build_environments(example_scenario(), SimConfig{}, 0);
  const LoopRecord r = evaluate_schedule(table_schedule(), g1, g2, EvalContext{});
  const LoopRecord back = loop_record_from_json(nlohmann::json::parse(to_json(r).dump()));
  EXPECT_EQ(back.schedule, r.schedule);
  EXPECT_EQ(back.assignments_group1, r.assignments_group1);
  EXPECT_EQ(back.assignments_group2, r.assignments_group2);
  EXPECT_EQ(back.correct, r.correct);
  EXPECT_EQ(back.silhouette_raw, r.silhouette_raw);
  EXPECT_EQ(back.score, r.score);
}
