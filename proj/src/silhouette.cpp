#include "ccwind/silhouette.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "ccwind/error.hpp"

namespace ccwind {

DistanceMatrix pairwise_dissimilarity(std::span<const Series> set, const Metric& metric) {
  DistanceMatrix d{set.size(), std::vector<double>(set.size() * set.size(), 0.0)};
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const double v = metric_dissimilarity(metric, set[i], set[j]);
      d.values[i * d.n + j] = v;
      d.values[j * d.n + i] = v;
    }
  }
  return d;
}

double silhouette(const DistanceMatrix& distances, std::span<const int> labels) {
  const std::size_t n = distances.n;
  if (labels.size() != n) throw ParameterError("silhouette: label count does not match series count");

  // Compact cluster ids so arbitrary labels work.
  std::map<int, std::size_t> ids;
  for (int l : labels) ids.emplace(l, ids.size());
  if (ids.size() < 2) throw UndefinedScore("silhouette: needs at least two clusters");
  const std::size_t k = ids.size();
  std::vector<std::size_t> cluster(n), sizes(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    cluster[i] = ids.at(labels[i]);
    ++sizes[cluster[i]];
  }

  double total = 0.0;
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < n; ++i) {
    if (sizes[cluster[i]] == 1) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) sums[cluster[j]] += distances(i, j);
    const double a = sums[cluster[i]] / static_cast<double>(sizes[cluster[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != cluster[i]) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

double silhouette(std::span<const Series> set, std::span<const int> labels, const Metric& metric) {
  return silhouette(pairwise_dissimilarity(set, metric), labels);
}

}  // namespace ccwind
