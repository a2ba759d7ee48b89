#include <random>

#include <gtest/gtest.h>

#include "ccwind/dtw.hpp"
#include "ccwind/error.hpp"
#include "ccwind/silhouette.hpp"
#include "oracles.hpp"

using namespace ccwind;

namespace {

std::vector<Series> random_set(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::vector<Series> set;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(3 * (3 + i % 4));
    for (double& x : v) x = u(rng);
    set.push_back(Series(3, v));
  }
  return set;
}

std::vector<std::vector<double>> dtw_matrix(const std::vector<Series>& set) {
  std::vector<std::vector<double>> d(set.size(), std::vector<double>(set.size(), 0.0));
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = 0; j < set.size(); ++j) d[i][j] = dtw(set[i], set[j]);
  return d;
}

std::vector<int> random_labels(std::mt19937_64& rng, std::size_t n, int k) {
  std::uniform_int_distribution<int> pick(0, k - 1);
  for (;;) {
    std::vector<int> l(n);
    for (int& x : l) x = pick(rng);
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    for (int x : l) seen[static_cast<std::size_t>(x)] = true;
    if (std::count(seen.begin(), seen.end(), true) >= 2) return l;
  }
}

std::vector<Series> two_constant_clusters() {
  std::vector<Series> set;
  for (double base : {0.0, 1000.0})
    for (double jitter : {0.0, 0.1, 0.2}) set.push_back(Series::scalar({base + jitter, base + jitter}));
  return set;
}

}  // namespace

TEST(Silhouette, MatchesNaiveFormula) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 9);
    const auto set = random_set(rng, n);
    const auto labels = random_labels(rng, n, 2 + trial % 3);
    const double expect = oracle::naive_silhouette(dtw_matrix(set), labels);
    EXPECT_NEAR(silhouette(set, labels, Metric::classic()), expect, 1e-12);
  }
}

TEST(Silhouette, LabelPermutationInvariant) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const auto set = random_set(rng, 8);
    const auto labels = random_labels(rng, 8, 3);
    std::vector<int> perm{2, 0, 1};
    std::vector<int> relabeled;
    for (int l : labels) relabeled.push_back(perm[static_cast<std::size_t>(l)]);
    EXPECT_EQ(silhouette(set, labels, Metric::classic()), silhouette(set, relabeled, Metric::classic()));
  }
}

TEST(Silhouette, TightFarClustersNearOne) {
  const auto set = two_constant_clusters();
  EXPECT_GT(silhouette(set, std::vector<int>{0, 0, 0, 1, 1, 1}, Metric::classic()), 0.99);
}

TEST(Silhouette, SwappedAssignmentsNegative) {
  const auto set = two_constant_clusters();
  EXPECT_LT(silhouette(set, std::vector<int>{0, 0, 1, 1, 1, 0}, Metric::classic()), 0.0);
}

TEST(Silhouette, InterleavedIdenticalPointsZero) {
  const std::vector<Series> set(4, Series::scalar({3, 1}));
  EXPECT_EQ(silhouette(set, std::vector<int>{0, 1, 0, 1}, Metric::classic()), 0.0);
}

TEST(Silhouette, SingletonsContributeZero) {
  const std::vector<Series> set{Series::scalar({0}), Series::scalar({1}), Series::scalar({10})};
  const std::vector<int> labels{0, 0, 1};
  const double d01 = 1.0, d02 = 10.0, d12 = 9.0;
  const double s0 = (d02 - d01) / d02, s1 = (d12 - d01) / d12;
  EXPECT_NEAR(silhouette(set, labels, Metric::classic()), (s0 + s1 + 0.0) / 3.0, 1e-15);
}

TEST(Silhouette, SingleClusterUndefined) {
  const std::vector<Series> set{Series::scalar({0}), Series::scalar({1})};
  EXPECT_THROW(silhouette(set, std::vector<int>{0, 0}, Metric::classic()), UndefinedScore);
}

TEST(Silhouette, SoftMetricUsesDivergence) {
  const auto set = two_constant_clusters();
  const Metric soft = Metric::soft(1.0);
  const DistanceMatrix d = pairwise_dissimilarity(set, soft);
  for (std::size_t i = 0; i < set.size(); ++i) {
    EXPECT_NEAR(d(i, i), 0.0, 1e-12);
    for (std::size_t j = 0; j < set.size(); ++j) EXPECT_NEAR(d(i, j), soft_dtw_divergence(set[i], set[j], 1.0), 1e-12);
  }
  EXPECT_GT(silhouette(set, std::vector<int>{0, 0, 0, 1, 1, 1}, soft), 0.99);
}
