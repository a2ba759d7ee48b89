#pragma once

#include <cmath>
#include <cstddef>

namespace ccwind {

/// Number of samples on [0, horizon] at spacing dt, including t = 0.
/// Tolerates the rounding in e.g. 12 / 0.1.
inline std::size_t sample_count(double horizon, double dt) {
  return static_cast<std::size_t>(std::floor(horizon / dt + 1e-9)) + 1;
}

}  // namespace ccwind
