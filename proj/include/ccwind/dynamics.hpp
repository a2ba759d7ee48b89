#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ccwind/vec3.hpp"
#include "ccwind/wind.hpp"

namespace ccwind {

/// Point-mass airframe. Defaults describe a 2 kg micro UAV.
struct UavParams {
  double mass = 2.0;            // kg
  double drag_coeff = 0.1;      // C_D
  double cross_section = 0.01;  // m^2
  double air_density = 1.225;   // kg/m^3
  double gravity_accel = 9.81;  // m/s^2
};

void validate(const UavParams& params);

struct ThrustSegment {
  double start_time = 0.0;  // s
  Vec3 force;               // N

  friend bool operator==(const ThrustSegment&, const ThrustSegment&) = default;
};

/// Piecewise-constant thrust. Segment i applies on [start_i, start_{i+1}).
class ThrustSchedule {
 public:
  ThrustSchedule() = default;
  /// Throws ScheduleError unless segments are non-empty, start at t = 0 and
  /// strictly increase.
  explicit ThrustSchedule(std::vector<ThrustSegment> segments);

  static ThrustSchedule constant(const Vec3& force) { return ThrustSchedule({{0.0, force}}); }

  const std::vector<ThrustSegment>& segments() const noexcept { return segments_; }
  bool empty() const noexcept { return segments_.empty(); }
  std::size_t size() const noexcept { return segments_.size(); }

  /// Throws ScheduleError if any segment exceeds `max_magnitude` newtons.
  void check_magnitude(double max_magnitude) const;

  friend bool operator==(const ThrustSchedule&, const ThrustSchedule&) = default;

 private:
  std::vector<ThrustSegment> segments_;
};

struct SimConfig {
  double dt = 0.1;
  double total_time = 12.0;
  Vec3 initial_position;
  Vec3 initial_velocity;
  double initial_altitude_offset = 100.0;  // m, added to z for the shear profile
  int relative_velocity_sign = +1;         // v_air = v_ground + sign * v_wind
};

void validate(const SimConfig& config);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;  // ground frame

  std::size_t size() const noexcept { return times.size(); }
};

/// Force of the last segment starting at or before t.
Vec3 thrust_at(const ThrustSchedule& schedule, double t);

/// thrust + quadratic drag against the relative airflow + weight.
Vec3 net_force(const UavParams& params, const Vec3& thrust, const Vec3& v_air);

struct State {
  Vec3 position;
  Vec3 velocity;
};

/// One semi-implicit Euler step: velocity first, then position with the
/// updated velocity.
State step(const State& state, const UavParams& params, const ThrustSchedule& schedule,
           const WindField& wind, double t, double dt, int relative_velocity_sign = +1);

/// Integrates from the configured initial state. Returns
/// sample_count(total_time, dt) samples including t = 0. `seed` only
/// affects stochastic (Dryden) wind.
Trajectory simulate(const UavParams& params, const ThrustSchedule& schedule, const WindModel& wind,
                    const SimConfig& config, std::uint64_t seed = 0);

/// Same as above with an already realized field.
Trajectory simulate(const UavParams& params, const ThrustSchedule& schedule, const WindField& wind,
                    const SimConfig& config);

}  // namespace ccwind
