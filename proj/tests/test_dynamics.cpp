#include <cmath>

#include <gtest/gtest.h>

#include "ccwind/dynamics.hpp"
#include "ccwind/error.hpp"
#include "ccwind/grid.hpp"
#include "oracles.hpp"

using namespace ccwind;

namespace {

ThrustSchedule example_schedule() { return ThrustSchedule({{0.0, {0, 0, 40}}, {4.0, {15, 0, 0}}, {10.0, {0, 45, 0}}}); }

UavParams dragless() {
  UavParams p;
  p.drag_coeff = 0.0;
  return p;
}

}  // namespace

TEST(ThrustSchedule, PiecewiseLookup) {
  const ThrustSchedule s = example_schedule();
  EXPECT_EQ(thrust_at(s, 5.0), (Vec3{15, 0, 0}));
  EXPECT_EQ(thrust_at(s, 0.0), (Vec3{0, 0, 40}));
  EXPECT_EQ(thrust_at(s, 3.999), (Vec3{0, 0, 40}));
  EXPECT_EQ(thrust_at(s, 4.0), (Vec3{15, 0, 0}));  // left-closed
  EXPECT_EQ(thrust_at(s, 11.9), (Vec3{0, 45, 0}));
}

TEST(ThrustSchedule, ConstantScheduleAnyTime) {
  const ThrustSchedule s = ThrustSchedule::constant({1, 2, 3});
  for (double t : {0.0, 0.5, 7.3, 1e6}) EXPECT_EQ(thrust_at(s, t), (Vec3{1, 2, 3}));
}

TEST(ThrustSchedule, RejectsInvalid) {
  EXPECT_THROW(ThrustSchedule(std::vector<ThrustSegment>{}), ScheduleError);
  EXPECT_THROW(ThrustSchedule(std::vector<ThrustSegment>{{1.0, {}}}), ScheduleError);
  EXPECT_THROW(ThrustSchedule({{0.0, {}}, {2.0, {}}, {2.0, {}}}), ScheduleError);
  EXPECT_THROW(ThrustSchedule({{0.0, {}}, {3.0, {}}, {2.0, {}}}), ScheduleError);
  EXPECT_THROW(thrust_at(ThrustSchedule{}, 0.0), ScheduleError);
  EXPECT_THROW(ThrustSchedule::constant({60, 0, 0}).check_magnitude(50.0), ScheduleError);
  EXPECT_NO_THROW(ThrustSchedule::constant({30, 40, 0}).check_magnitude(50.0));
}

TEST(NetForce, GravityOnly) {
  const Vec3 f = net_force(UavParams{}, {}, {});
  EXPECT_DOUBLE_EQ(f.x, 0.0);
  EXPECT_DOUBLE_EQ(f.y, 0.0);
  EXPECT_DOUBLE_EQ(f.z, -19.62);
}

TEST(NetForce, QuadraticDrag) {
  UavParams p;
  p.gravity_accel = 0.0;
  const Vec3 f = net_force(p, {}, {10, 0, 0});
  EXPECT_NEAR(f.x, -0.06125, 1e-15);
  EXPECT_DOUBLE_EQ(f.y, 0.0);
  EXPECT_DOUBLE_EQ(f.z, 0.0);
}

TEST(NetForce, ZeroAirspeedPassesThrust) {
  const Vec3 f = net_force(UavParams{}, {3, -4, 5}, {});
  EXPECT_EQ(f, (Vec3{3, -4, 5 - 19.62}));
}

TEST(Step, HoverEquilibrium) {
  const WindField calm(ConstantWind{});
  const State s0{{1, 2, 3}, {}};
  const State s1 = step(s0, dragless(), ThrustSchedule::constant({0, 0, 19.62}), calm, 0.0, 0.1);
  EXPECT_EQ(s1.position, s0.position);
  EXPECT_EQ(s1.velocity, s0.velocity);
}

TEST(Step, DragOpposesSignedWind) {
  UavParams p;
  p.gravity_accel = 0.0;
  const WindField wind(ConstantWind{{3, -2, 0}});
  for (int sign : {+1, -1}) {
    const State s = step({}, p, ThrustSchedule::constant({}), wind, 0.0, 0.1, sign);
    EXPECT_LT(s.velocity.x * sign, 0.0);
    EXPECT_GT(s.velocity.y * sign, 0.0);
    EXPECT_DOUBLE_EQ(s.velocity.z, 0.0);
  }
}

TEST(Simulate, SampleCount) {
  const Trajectory t = simulate(UavParams{}, example_schedule(), ConstantWind{{1.1, 1.1, 0}}, SimConfig{});
  ASSERT_EQ(t.size(), 121u);
  EXPECT_EQ(t.positions.size(), 121u);
  EXPECT_EQ(t.velocities.size(), 121u);
  for (std::size_t k = 0; k < t.size(); ++k) EXPECT_NEAR(t.times[k], 0.1 * static_cast<double>(k), 1e-12);
  EXPECT_EQ(sample_count(12.0, 0.1), 121u);
  EXPECT_EQ(sample_count(1.0, 0.3), 4u);
}

TEST(Simulate, BallisticMatchesClosedForm) {
  const Vec3 thrust{7, -3, 25};
  const UavParams p = dragless();
  SimConfig cfg;
  cfg.initial_position = {1, 2, 3};
  cfg.initial_velocity = {0.5, -1, 2};
  const Trajectory t = simulate(p, ThrustSchedule::constant(thrust), ConstantWind{{4, 4, 0}}, cfg);
  const Vec3 a{thrust.x / p.mass, thrust.y / p.mass, thrust.z / p.mass - p.gravity_accel};
  for (std::size_t k = 0; k < t.size(); ++k) {
    const Vec3 expect{oracle::euler_position(1, 0.5, a.x, 0.1, k), oracle::euler_position(2, -1, a.y, 0.1, k),
                      oracle::euler_position(3, 2, a.z, 0.1, k)};
    EXPECT_NEAR(t.positions[k].x, expect.x, 1e-9 * std::max(1.0, std::abs(expect.x)));
    EXPECT_NEAR(t.positions[k].y, expect.y, 1e-9 * std::max(1.0, std::abs(expect.y)));
    EXPECT_NEAR(t.positions[k].z, expect.z, 1e-9 * std::max(1.0, std::abs(expect.z)));
  }
}

TEST(Simulate, FreeFallStaysOnAxis) {
  const Trajectory t = simulate(UavParams{}, ThrustSchedule::constant({}), ConstantWind{}, SimConfig{});
  for (std::size_t k = 1; k < t.size(); ++k) {
    EXPECT_EQ(t.positions[k].x, 0.0);
    EXPECT_EQ(t.positions[k].y, 0.0);
    EXPECT_LT(t.positions[k].z, t.positions[k - 1].z);
  }
}

TEST(Simulate, DragDissipatesEnergy) {
  UavParams p;
  p.gravity_accel = 0.0;
  p.drag_coeff = 2.0;
  SimConfig cfg;
  cfg.initial_velocity = {40, -25, 10};
  const Trajectory t = simulate(p, ThrustSchedule::constant({}), ConstantWind{}, cfg);
  for (std::size_t k = 1; k < t.size(); ++k) EXPECT_LE(dot(t.velocities[k], t.velocities[k]), dot(t.velocities[k - 1], t.velocities[k - 1]));
}

TEST(Simulate, MirroredWindMirrorsHorizontalDrift) {
  const ThrustSchedule s = ThrustSchedule::constant({0, 0, 30});
  const Trajectory a = simulate(UavParams{}, s, ConstantWind{{2.0, -1.5, 0}}, SimConfig{});
  const Trajectory b = simulate(UavParams{}, s, ConstantWind{{-2.0, 1.5, 0}}, SimConfig{});
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_DOUBLE_EQ(a.positions[k].x, -b.positions[k].x);
    EXPECT_DOUBLE_EQ(a.positions[k].y, -b.positions[k].y);
    EXPECT_DOUBLE_EQ(a.positions[k].z, b.positions[k].z);
  }
}

TEST(Simulate, Deterministic) {
  DrydenWind d;
  d.mean_wind = {12, 12, 0};
  d.airspeed = {17, 17, 17};
  const Trajectory a = simulate(UavParams{}, example_schedule(), d, SimConfig{}, 99);
  const Trajectory b = simulate(UavParams{}, example_schedule(), d, SimConfig{}, 99);
  const Trajectory c = simulate(UavParams{}, example_schedule(), d, SimConfig{}, 100);
  EXPECT_EQ(a.positions, b.positions);
  EXPECT_NE(a.positions, c.positions);
}

TEST(Simulate, DivergenceNamesStep) {
  UavParams p;
  p.drag_coeff = 1e300;
  SimConfig cfg;
  cfg.initial_velocity = {1e10, 0, 0};
  try {
    simulate(p, ThrustSchedule::constant({}), ConstantWind{}, cfg);
    FAIL() << "expected divergence";
  } catch (const SimulationDiverged& e) {
    EXPECT_GE(e.step(), 1u);
    EXPECT_NE(std::string(e.what()).find(std::to_string(e.step())), std::string::npos);
  }
}

TEST(Simulate, RejectsInvalidConfig) {
  SimConfig cfg;
  cfg.dt = 0.0;
  EXPECT_THROW(simulate(UavParams{}, ThrustSchedule::constant({}), ConstantWind{}, cfg), ParameterError);
  UavParams p;
  p.mass = 0.0;
  EXPECT_THROW(simulate(p, ThrustSchedule::constant({}), ConstantWind{}, SimConfig{}), ParameterError);
}
