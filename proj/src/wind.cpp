#include "ccwind/wind.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ccwind/error.hpp"
#include "ccwind/grid.hpp"
#include "ccwind/random.hpp"

namespace ccwind {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double component(const Vec3& v, int axis) { return axis == 0 ? v.x : axis == 1 ? v.y : v.z; }

DiscreteFilter first_order(double gain, double time_constant, double dt) {
  const double c = 2.0 / dt;
  const double d = 1.0 + time_constant * c;
  DiscreteFilter f;
  f.b0 = gain / d;
  f.b1 = gain / d;
  f.a1 = (1.0 - time_constant * c) / d;
  return f;
}

// gain * (1 + zero_tc s) / (1 + tc s)^2
DiscreteFilter second_order(double gain, double time_constant, double zero_tc, double dt) {
  const double c = 2.0 / dt;
  const double p = 1.0 + time_constant * c;
  const double m = 1.0 - time_constant * c;
  const double d = p * p;
  DiscreteFilter f;
  f.b0 = gain * (1.0 + zero_tc * c) / d;
  f.b1 = 2.0 * gain / d;
  f.b2 = gain * (1.0 - zero_tc * c) / d;
  f.a1 = 2.0 * m / p;
  f.a2 = (m / p) * (m / p);
  return f;
}

}  // namespace

WindFamily family_of(const WindModel& model) {
  return std::visit(Overloaded{[](const ConstantWind&) { return WindFamily::constant; },
                               [](const ShearWind&) { return WindFamily::shear; },
                               [](const DrydenWind&) { return WindFamily::turbulence; }},
                    model);
}

const char* to_string(WindFamily family) {
  switch (family) {
    case WindFamily::constant: return "constant";
    case WindFamily::shear: return "shear";
    case WindFamily::turbulence: return "turbulence";
  }
  return "unknown";
}

void validate(const WindModel& model) {
  std::visit(Overloaded{
                 [](const ConstantWind& w) {
                   if (!is_finite(w.velocity)) throw ParameterError("constant wind: non-finite velocity");
                 },
                 [](const ShearWind& w) {
                   if (!is_finite(w.ref_velocity)) throw ParameterError("shear wind: non-finite reference velocity");
                   if (!(w.ref_altitude > 0.0)) throw ParameterError("shear wind: ref_altitude must be > 0");
                   if (!(w.alpha >= 0.0)) throw ParameterError("shear wind: alpha must be >= 0");
                   if (!(w.min_altitude > 0.0)) throw ParameterError("shear wind: min_altitude must be > 0");
                 },
                 [](const DrydenWind& w) {
                   for (int a = 0; a < 3; ++a) {
                     if (!(component(w.sigma, a) >= 0.0)) throw ParameterError("dryden: sigma must be >= 0");
                     if (!(component(w.scale_length, a) > 0.0))
                       throw ParameterError("dryden: scale_length must be > 0");
                     if (!(component(w.airspeed, a) > 0.0)) throw ParameterError("dryden: airspeed must be > 0");
                   }
                   if (!(w.dt > 0.0)) throw ParameterError("dryden: dt must be > 0");
                   if (!(w.horizon >= w.dt)) throw ParameterError("dryden: horizon must be >= dt");
                 },
             },
             model);
}

std::array<double, 2> DiscreteFilter::pole_moduli() const {
  const double disc = a1 * a1 - 4.0 * a2;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    return {std::abs((-a1 + r) / 2.0), std::abs((-a1 - r) / 2.0)};
  }
  const double mod = std::sqrt(a2);
  return {mod, mod};
}

std::array<DiscreteFilter, 3> dryden_filters(const Vec3& sigma, const Vec3& scale_length,
                                             const Vec3& airspeed, double dt) {
  if (!(dt > 0.0)) throw ParameterError("dryden: dt must be > 0");
  std::array<DiscreteFilter, 3> out;
  for (int a = 0; a < 3; ++a) {
    const double s = component(sigma, a);
    const double l = component(scale_length, a);
    const double v = component(airspeed, a);
    if (!(l > 0.0) || !(v > 0.0)) throw ParameterError("dryden: scale_length and airspeed must be > 0");
    const double tc = l / v;
    if (a == 0) {
      out[a] = first_order(s * std::sqrt(2.0 * l / (std::numbers::pi * v)), tc, dt);
    } else {
      out[a] = second_order(s * std::sqrt(l / (std::numbers::pi * v)), tc, std::sqrt(3.0) * tc, dt);
    }
  }
  return out;
}

GustSeries build_dryden_series(const DrydenWind& params) {
  validate(WindModel{params});
  const auto filters = dryden_filters(params.sigma, params.scale_length, params.airspeed, params.dt);
  const std::size_t n = sample_count(params.horizon, params.dt);
  const double noise_scale = std::sqrt(std::numbers::pi / params.dt);

  GustSeries series;
  series.dt = params.dt;
  series.samples.assign(n, Vec3{});

  for (int a = 0; a < 3; ++a) {
    const DiscreteFilter& f = filters[a];
    Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(a)));
    std::normal_distribution<double> normal(0.0, 1.0);
    double w1 = 0.0, w2 = 0.0, y1 = 0.0, y2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double w = noise_scale * normal(rng);
      const double y = f.b0 * w + f.b1 * w1 + f.b2 * w2 - f.a1 * y1 - f.a2 * y2;
      w2 = w1;
      w1 = w;
      y2 = y1;
      y1 = y;
      Vec3& s = series.samples[k];
      (a == 0 ? s.x : a == 1 ? s.y : s.z) = y;
    }
  }
  return series;
}

WindField::WindField(WindModel model, double altitude_offset, std::uint64_t seed_salt)
    : model_(std::move(model)), altitude_offset_(altitude_offset) {
  validate(model_);
  if (auto* dryden = std::get_if<DrydenWind>(&model_)) {
    DrydenWind realized = *dryden;
    if (seed_salt != 0) realized.seed = derive_seed(realized.seed, seed_salt);
    gusts_ = std::make_shared<const GustSeries>(build_dryden_series(realized));
  }
}

Vec3 WindField::at(double t, const Vec3& position) const {
  return std::visit(
      Overloaded{
          [](const ConstantWind& w) { return w.velocity; },
          [&](const ShearWind& w) {
            const double altitude = std::max(position.z + altitude_offset_, w.min_altitude);
            const double scale = std::pow(altitude / w.ref_altitude, w.alpha);
            return Vec3{w.ref_velocity.x * scale, w.ref_velocity.y * scale, 0.0};
          },
          [&](const DrydenWind& w) {
            const double idx = std::round(t / gusts_->dt);
            if (idx < 0.0 || idx >= static_cast<double>(gusts_->samples.size()))
              throw OutOfHorizon("dryden: t=" + std::to_string(t) + " outside precomputed horizon");
            return w.mean_wind + gusts_->samples[static_cast<std::size_t>(idx)];
          },
      },
      model_);
}

}  // namespace ccwind
