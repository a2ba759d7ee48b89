#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ccwind/series.hpp"

namespace ccwind {

/// Classic DTW: Euclidean local cost, steps (1,0) (0,1) (1,1), no window.
/// Returns the accumulated cost of the optimal warping path.
double dtw(const Series& a, const Series& b);

struct WarpingPath {
  double cost = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> steps;  // (index in a, index in b), from (0,0)
};

WarpingPath dtw_path(const Series& a, const Series& b);

/// Soft-DTW with the same local cost; the min over predecessors is replaced
/// by -gamma * log(sum exp(-x / gamma)). Tends to dtw(a, b) as gamma -> 0+.
double soft_dtw(const Series& a, const Series& b, double gamma);

struct SoftDtwGradient {
  double value = 0.0;
  Series gradient;  // d value / d a, same shape as a
};

/// Value and gradient with respect to the first argument (backward
/// recursion on the soft alignment matrix).
SoftDtwGradient soft_dtw_grad(const Series& a, const Series& b, double gamma);

/// soft_dtw(a, b) - (soft_dtw(a, a) + soft_dtw(b, b)) / 2. Zero for a == b.
double soft_dtw_divergence(const Series& a, const Series& b, double gamma);

}  // namespace ccwind
