#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccwind/series.hpp"

namespace ccwind {

struct Metric {
  enum class Kind { dtw, softdtw };
  Kind kind = Kind::dtw;
  double gamma = 1.0;  // soft-DTW smoothing, ignored for dtw

  static Metric classic() { return {}; }
  static Metric soft(double gamma) { return {Kind::softdtw, gamma}; }

  std::string name() const;
};

/// Cost that k-means minimises: dtw, or raw soft-DTW.
double metric_cost(const Metric& metric, const Series& a, const Series& b);

/// Symmetric dissimilarity used for silhouettes: dtw, or the soft-DTW
/// divergence (zero on the diagonal).
double metric_dissimilarity(const Metric& metric, const Series& a, const Series& b);

struct KMeansOptions {
  std::size_t n_init = 5;
  std::size_t max_iters = 50;
  std::size_t barycenter_iters = 10;
  std::uint64_t seed = 0;
};

struct ClusterModel {
  std::size_t k = 0;
  std::vector<int> assignments;
  std::vector<Series> centroids;
  double inertia = 0.0;
  Metric metric;
  /// Inertia after every assignment step of the winning restart.
  std::vector<double> inertia_history;
};

/// Lloyd iterations with DBA (or soft-DTW) barycenters, best of n_init seeded
/// restarts by inertia. A cluster left empty is re-seeded with the series
/// farthest from its own centroid.
ClusterModel kmeans(std::span<const Series> set, std::size_t k, const Metric& metric,
                    const KMeansOptions& options = {});

}  // namespace ccwind
