#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ccwind/series.hpp"

namespace ccwind {

struct BarycenterResult {
  Series barycenter;
  /// Objective after each accepted iterate, starting with the initial guess.
  /// Non-increasing.
  std::vector<double> objective;
};

/// DTW barycenter averaging. Each iteration aligns every series to the
/// current barycenter and replaces each barycenter point by the mean of the
/// points aligned to it. An iterate that would raise the summed DTW cost is
/// rejected and iteration stops; it also stops after `max_iters` or when the
/// relative improvement drops below 1e-6.
BarycenterResult dba(std::span<const Series> set, const Series& init, std::size_t max_iters);

inline Series dba_barycenter(std::span<const Series> set, const Series& init, std::size_t max_iters) {
  return dba(set, init, max_iters).barycenter;
}

/// Minimises sum_i soft_dtw(b, set[i], gamma) by gradient descent with
/// backtracking from `init`. Same stopping rules as dba.
BarycenterResult soft_dtw_barycenter(std::span<const Series> set, const Series& init, double gamma,
                                     std::size_t max_iters);

}  // namespace ccwind
