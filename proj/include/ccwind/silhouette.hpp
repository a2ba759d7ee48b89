#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ccwind/kmeans.hpp"
#include "ccwind/series.hpp"

namespace ccwind {

/// Row-major symmetric n x n matrix of pairwise dissimilarities.
struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<double> values;
  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

DistanceMatrix pairwise_dissimilarity(std::span<const Series> set, const Metric& metric);

/// Mean silhouette over all samples. Samples in singleton clusters
/// contribute 0. Throws UndefinedScore when fewer than two clusters appear.
double silhouette(const DistanceMatrix& distances, std::span<const int> labels);

double silhouette(std::span<const Series> set, std::span<const int> labels, const Metric& metric);

}  // namespace ccwind
