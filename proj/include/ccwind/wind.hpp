#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "ccwind/vec3.hpp"

namespace ccwind {

struct ConstantWind {
  Vec3 velocity;
};

/// Power-law shear: horizontal speed scales with (z / ref_altitude)^alpha.
/// Altitudes below min_altitude are clamped to it.
struct ShearWind {
  Vec3 ref_velocity;  // z component ignored
  double ref_altitude = 1.0;
  double alpha = 0.143;
  double min_altitude = 0.1;
};

/// Dryden turbulence on top of a mean wind. Gusts are a time series generated
/// once from `seed`; `dt` and `horizon` fix the sampling grid.
struct DrydenWind {
  Vec3 mean_wind;
  Vec3 sigma{2.5, 2.5, 1.5};
  Vec3 scale_length{200.0, 200.0, 50.0};
  Vec3 airspeed{1.0, 1.0, 1.0};
  double dt = 0.1;
  double horizon = 12.0;
  std::uint64_t seed = 0;
};

using WindModel = std::variant<ConstantWind, ShearWind, DrydenWind>;

enum class WindFamily { constant, shear, turbulence };

WindFamily family_of(const WindModel& model);
const char* to_string(WindFamily family);

/// Throws ParameterError when the model violates its parameter domain.
void validate(const WindModel& model);

struct GustSeries {
  double dt = 0.0;
  std::vector<Vec3> samples;  // one Vec3 of (u, v, w) gust per time step
};

/// Difference equation y[k] = b0 w[k] + b1 w[k-1] + b2 w[k-2] - a1 y[k-1] - a2 y[k-2].
struct DiscreteFilter {
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  /// Moduli of the roots of z^2 + a1 z + a2. First-order filters have
  /// a2 == 0 and report a pole at the origin.
  std::array<double, 2> pole_moduli() const;
};

/// Tustin discretisations of the longitudinal (first-order), lateral and
/// vertical (second-order) Dryden shaping filters at step `dt`.
std::array<DiscreteFilter, 3> dryden_filters(const Vec3& sigma, const Vec3& scale_length,
                                             const Vec3& airspeed, double dt);

/// Drives white noise through the shaping filters. The noise has variance
/// pi/dt so the continuous-time spectra (one-sided normalisation) produce
/// gust variance sigma^2.
GustSeries build_dryden_series(const DrydenWind& params);

/// A wind model bound to a concrete realization. Constant and shear fields
/// are analytic; Dryden fields hold their precomputed gust series.
class WindField {
 public:
  /// `altitude_offset` converts simulated z into altitude above ground for
  /// the shear profile. `seed_salt` perturbs the Dryden seed (0 keeps it).
  explicit WindField(WindModel model, double altitude_offset = 0.0, std::uint64_t seed_salt = 0);

  Vec3 at(double t, const Vec3& position) const;

  const WindModel& model() const noexcept { return model_; }
  const GustSeries* gusts() const noexcept { return gusts_.get(); }

 private:
  WindModel model_;
  double altitude_offset_;
  std::shared_ptr<const GustSeries> gusts_;
};

inline Vec3 wind_at(const WindField& field, double t, const Vec3& position) {
  return field.at(t, position);
}

}  // namespace ccwind
