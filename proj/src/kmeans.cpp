#include "ccwind/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "ccwind/barycenter.hpp"
#include "ccwind/dtw.hpp"
#include "ccwind/error.hpp"
#include "ccwind/random.hpp"

namespace ccwind {

std::string Metric::name() const { return kind == Kind::dtw ? "dtw" : "softdtw"; }

double metric_cost(const Metric& metric, const Series& a, const Series& b) {
  return metric.kind == Metric::Kind::dtw ? dtw(a, b) : soft_dtw(a, b, metric.gamma);
}

double metric_dissimilarity(const Metric& metric, const Series& a, const Series& b) {
  return metric.kind == Metric::Kind::dtw ? dtw(a, b) : soft_dtw_divergence(a, b, metric.gamma);
}

namespace {

struct Restart {
  std::vector<int> labels;
  std::vector<Series> centroids;
  std::vector<double> costs;  // cost of each series to its centroid
  std::vector<double> history;
  double inertia = 0.0;
};

void assign(std::span<const Series> set, const Metric& metric, Restart& r) {
  const std::size_t k = r.centroids.size();
  r.labels.assign(set.size(), 0);
  r.costs.assign(set.size(), 0.0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      const double cost = metric_cost(metric, set[i], r.centroids[c]);
      if (cost < best) {
        best = cost;
        r.labels[i] = static_cast<int>(c);
      }
    }
    r.costs[i] = best;
  }

  // Empty clusters take the worst-fitting series of a cluster with >1 member.
  for (std::size_t c = 0; c < k; ++c) {
    if (std::find(r.labels.begin(), r.labels.end(), static_cast<int>(c)) != r.labels.end()) continue;
    std::vector<std::size_t> sizes(k, 0);
    for (int l : r.labels) ++sizes[static_cast<std::size_t>(l)];
    std::size_t worst = set.size();
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (sizes[static_cast<std::size_t>(r.labels[i])] < 2) continue;
      if (worst == set.size() || r.costs[i] > r.costs[worst]) worst = i;
    }
    if (worst == set.size()) break;  // unreachable when set.size() >= k
    r.labels[worst] = static_cast<int>(c);
    r.centroids[c] = set[worst];
    r.costs[worst] = metric_cost(metric, set[worst], set[worst]);
  }
  r.inertia = std::accumulate(r.costs.begin(), r.costs.end(), 0.0);
  r.history.push_back(r.inertia);
}

void update(std::span<const Series> set, const Metric& metric, std::size_t barycenter_iters, Restart& r) {
  for (std::size_t c = 0; c < r.centroids.size(); ++c) {
    std::vector<Series> members;
    for (std::size_t i = 0; i < set.size(); ++i)
      if (r.labels[i] == static_cast<int>(c)) members.push_back(set[i]);
    if (members.empty()) continue;
    r.centroids[c] = metric.kind == Metric::Kind::dtw
                         ? dba(members, r.centroids[c], barycenter_iters).barycenter
                         : soft_dtw_barycenter(members, r.centroids[c], metric.gamma, barycenter_iters).barycenter;
  }
}

Restart run_restart(std::span<const Series> set, const std::vector<std::size_t>& init, const Metric& metric,
                    const KMeansOptions& opt) {
  Restart r;
  for (std::size_t idx : init) r.centroids.push_back(set[idx]);
  assign(set, metric, r);
  for (std::size_t it = 0; it < opt.max_iters; ++it) {
    const std::vector<int> previous = r.labels;
    update(set, metric, opt.barycenter_iters, r);
    assign(set, metric, r);
    if (r.labels == previous) break;
  }
  return r;
}

}  // namespace

ClusterModel kmeans(std::span<const Series> set, std::size_t k, const Metric& metric, const KMeansOptions& opt) {
  if (k < 1) throw ParameterError("kmeans: k must be >= 1");
  if (set.size() < k) throw ParameterError("kmeans: fewer series than clusters");
  if (opt.n_init < 1) throw ParameterError("kmeans: n_init must be >= 1");
  if (metric.kind == Metric::Kind::softdtw && !(metric.gamma > 0.0))
    throw ParameterError("kmeans: soft-dtw gamma must be > 0");
  for (const Series& s : set)
    if (s.empty() || s.dim() != set[0].dim()) throw ParameterError("kmeans: series must share a dimension");

  // Restarts drawing the same initial subset converge identically.
  std::map<std::vector<std::size_t>, std::size_t> seen;
  std::vector<Restart> results;
  std::size_t best = 0;
  for (std::size_t restart = 0; restart < opt.n_init; ++restart) {
    Rng rng(derive_seed(opt.seed, restart));
    std::vector<std::size_t> order(set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> init(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));

    std::vector<std::size_t> key = init;
    std::sort(key.begin(), key.end());
    if (seen.contains(key)) continue;
    seen.emplace(key, results.size());

    results.push_back(run_restart(set, init, metric, opt));
    if (results.back().inertia < results[best].inertia) best = results.size() - 1;
  }

  Restart& win = results[best];
  ClusterModel model;
  model.k = k;
  model.assignments = std::move(win.labels);
  model.centroids = std::move(win.centroids);
  model.inertia = win.inertia;
  model.metric = metric;
  model.inertia_history = std::move(win.history);
  return model;
}

}  // namespace ccwind
