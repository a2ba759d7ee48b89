#include "ccwind/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccwind/error.hpp"
#include "ccwind/grid.hpp"

namespace ccwind {

void validate(const UavParams& p) {
  if (!(p.mass > 0.0)) throw ParameterError("uav: mass must be > 0");
  if (!(p.drag_coeff >= 0.0)) throw ParameterError("uav: drag_coeff must be >= 0");
  if (!(p.cross_section >= 0.0)) throw ParameterError("uav: cross_section must be >= 0");
  if (!(p.air_density > 0.0)) throw ParameterError("uav: air_density must be > 0");
  if (!std::isfinite(p.gravity_accel)) throw ParameterError("uav: gravity_accel must be finite");
}

void validate(const SimConfig& c) {
  if (!(c.dt > 0.0)) throw ParameterError("sim: dt must be > 0");
  if (!(c.total_time >= c.dt)) throw ParameterError("sim: total_time must be >= dt");
  if (c.total_time / c.dt > 1e9) throw ParameterError("sim: total_time/dt too large");
  if (c.relative_velocity_sign != 1 && c.relative_velocity_sign != -1)
    throw ParameterError("sim: relative_velocity_sign must be +1 or -1");
  if (!is_finite(c.initial_position) || !is_finite(c.initial_velocity) ||
      !std::isfinite(c.initial_altitude_offset))
    throw ParameterError("sim: initial state must be finite");
}

ThrustSchedule::ThrustSchedule(std::vector<ThrustSegment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw ScheduleError("thrust schedule is empty");
  if (segments_.front().start_time != 0.0) throw ScheduleError("first thrust segment must start at t = 0");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (!is_finite(segments_[i].force) || !std::isfinite(segments_[i].start_time))
      throw ScheduleError("thrust segment " + std::to_string(i) + " is not finite");
    if (i > 0 && !(segments_[i].start_time > segments_[i - 1].start_time))
      throw ScheduleError("thrust change times must be strictly increasing");
  }
}

void ThrustSchedule::check_magnitude(double max_magnitude) const {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (norm(segments_[i].force) > max_magnitude * (1.0 + 1e-12))
      throw ScheduleError("thrust segment " + std::to_string(i) + " exceeds max magnitude " +
                          std::to_string(max_magnitude) + " N");
  }
}

Vec3 thrust_at(const ThrustSchedule& schedule, double t) {
  const auto& segs = schedule.segments();
  if (segs.empty()) throw ScheduleError("thrust schedule is empty");
  auto it = std::upper_bound(segs.begin(), segs.end(), t,
                             [](double value, const ThrustSegment& s) { return value < s.start_time; });
  if (it == segs.begin()) return segs.front().force;  // t < 0 is outside the contract
  return std::prev(it)->force;
}

Vec3 net_force(const UavParams& p, const Vec3& thrust, const Vec3& v_air) {
  const double q = 0.5 * p.air_density * p.drag_coeff * p.cross_section;
  const Vec3 drag = v_air * (-q * norm(v_air));
  const Vec3 gravity{0.0, 0.0, -p.gravity_accel * p.mass};
  return thrust + drag + gravity;
}

State step(const State& s, const UavParams& params, const ThrustSchedule& schedule, const WindField& wind,
           double t, double dt, int relative_velocity_sign) {
  const Vec3 v_wind = wind.at(t, s.position);
  const Vec3 v_air = s.velocity + static_cast<double>(relative_velocity_sign) * v_wind;
  const Vec3 accel = net_force(params, thrust_at(schedule, t), v_air) / params.mass;
  State next;
  next.velocity = s.velocity + accel * dt;
  next.position = s.position + next.velocity * dt;
  return next;
}

Trajectory simulate(const UavParams& params, const ThrustSchedule& schedule, const WindModel& wind,
                    const SimConfig& config, std::uint64_t seed) {
  return simulate(params, schedule, WindField(wind, config.initial_altitude_offset, seed), config);
}

Trajectory simulate(const UavParams& params, const ThrustSchedule& schedule, const WindField& wind,
                    const SimConfig& config) {
  validate(params);
  validate(config);
  if (schedule.empty()) throw ScheduleError("thrust schedule is empty");

  const std::size_t n = sample_count(config.total_time, config.dt);
  Trajectory traj;
  traj.times.reserve(n);
  traj.positions.reserve(n);
  traj.velocities.reserve(n);

  State s{config.initial_position, config.initial_velocity};
  traj.times.push_back(0.0);
  traj.positions.push_back(s.position);
  traj.velocities.push_back(s.velocity);
  for (std::size_t k = 1; k < n; ++k) {
    const double t = static_cast<double>(k - 1) * config.dt;
    s = step(s, params, schedule, wind, t, config.dt, config.relative_velocity_sign);
    if (!is_finite(s.position) || !is_finite(s.velocity)) throw SimulationDiverged(k, "non-finite state");
    traj.times.push_back(static_cast<double>(k) * config.dt);
    traj.positions.push_back(s.position);
    traj.velocities.push_back(s.velocity);
  }
  return traj;
}

}  // namespace ccwind
