#include "ccwind/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ccwind/error.hpp"

namespace ccwind {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_pair(const Series& a, const Series& b) {
  if (a.empty() || b.empty()) throw ParameterError("dtw: series must be non-empty");
  if (a.dim() != b.dim()) throw ParameterError("dtw: dimensionality mismatch");
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("soft-dtw: gamma must be > 0");
}

inline double min3(double a, double b, double c) { return std::min(a, std::min(b, c)); }

double softmin3(double a, double b, double c, double gamma) {
  const double lo = std::min({a, b, c});
  if (lo == kInf) return kInf;
  const double s = std::exp(-(a - lo) / gamma) + std::exp(-(b - lo) / gamma) + std::exp(-(c - lo) / gamma);
  return lo - gamma * std::log(s);
}

// (n+1) x (m+1) accumulated soft cost, R[0][0] = 0, other borders +inf.
struct SoftTable {
  std::size_t n, m;
  std::vector<double> r;
  std::vector<double> d;  // n x m local costs
  double at(std::size_t i, std::size_t j) const { return r[i * (m + 1) + j]; }
};

SoftTable soft_forward(const Series& a, const Series& b, double gamma) {
  SoftTable t{a.length(), b.length(), {}, {}};
  const std::size_t w = t.m + 1;
  t.r.assign((t.n + 1) * w, kInf);
  t.d.resize(t.n * t.m);
  t.r[0] = 0.0;
  for (std::size_t i = 1; i <= t.n; ++i) {
    for (std::size_t j = 1; j <= t.m; ++j) {
      const double cost = point_distance(a.point(i - 1), b.point(j - 1));
      t.d[(i - 1) * t.m + (j - 1)] = cost;
      t.r[i * w + j] = cost + softmin3(t.r[(i - 1) * w + j - 1], t.r[(i - 1) * w + j], t.r[i * w + j - 1], gamma);
    }
  }
  return t;
}

}  // namespace

double dtw(const Series& a, const Series& b) {
  check_pair(a, b);
  const std::size_t n = a.length(), m = b.length(), dim = a.dim();
  const double* bd = b.data().data();
  std::vector<double> prev(m + 1, kInf), cur(m + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const auto ai = a.point(i - 1);
    cur[0] = kInf;
    double left = kInf;
    for (std::size_t j = 1; j <= m; ++j) {
      left = point_distance(ai, {bd + (j - 1) * dim, dim}) + min3(prev[j - 1], prev[j], left);
      cur[j] = left;
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

WarpingPath dtw_path(const Series& a, const Series& b) {
  check_pair(a, b);
  const std::size_t n = a.length(), m = b.length(), w = m + 1, dim = a.dim();
  const double* bd = b.data().data();
  std::vector<double> acc((n + 1) * w, kInf);
  acc[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const auto ai = a.point(i - 1);
    const double* up = &acc[(i - 1) * w];
    double* row = &acc[i * w];
    for (std::size_t j = 1; j <= m; ++j) row[j] = point_distance(ai, {bd + (j - 1) * dim, dim}) + min3(up[j - 1], up[j], row[j - 1]);
  }

  WarpingPath path;
  path.cost = acc[n * w + m];
  std::size_t i = n, j = m;
  while (true) {
    path.steps.emplace_back(i - 1, j - 1);
    if (i == 1 && j == 1) break;
    // Diagonal wins ties, then the step in a, then the step in b.
    const double diag = acc[(i - 1) * w + j - 1];
    const double up = acc[(i - 1) * w + j];
    const double left = acc[i * w + j - 1];
    if (diag <= up && diag <= left) {
      --i;
      --j;
    } else if (up <= left) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(path.steps.begin(), path.steps.end());
  return path;
}

double soft_dtw(const Series& a, const Series& b, double gamma) {
  check_pair(a, b);
  check_gamma(gamma);
  const std::size_t n = a.length(), m = b.length();
  std::vector<double> prev(m + 1, kInf), cur(m + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = kInf;
    const auto ai = a.point(i - 1);
    for (std::size_t j = 1; j <= m; ++j)
      cur[j] = point_distance(ai, b.point(j - 1)) + softmin3(prev[j - 1], prev[j], cur[j - 1], gamma);
    std::swap(prev, cur);
  }
  return prev[m];
}

SoftDtwGradient soft_dtw_grad(const Series& a, const Series& b, double gamma) {
  check_pair(a, b);
  check_gamma(gamma);
  const SoftTable t = soft_forward(a, b, gamma);
  const std::size_t n = t.n, m = t.m;

  // e(i, j) for 1 <= i <= n+1, 1 <= j <= m+1; row/col n+1, m+1 are the
  // sentinel border with r = -inf except the corner.
  const std::size_t w = m + 2;
  std::vector<double> e((n + 2) * w, 0.0);
  auto r_ext = [&](std::size_t i, std::size_t j) {
    if (i == n + 1 && j == m + 1) return t.at(n, m);
    if (i == n + 1 || j == m + 1) return -kInf;
    return t.at(i, j);
  };
  auto d_ext = [&](std::size_t i, std::size_t j) {
    if (i == n + 1 || j == m + 1) return 0.0;
    return t.d[(i - 1) * m + (j - 1)];
  };
  e[(n + 1) * w + (m + 1)] = 1.0;
  for (std::size_t i = n; i >= 1; --i) {
    for (std::size_t j = m; j >= 1; --j) {
      const double rij = t.at(i, j);
      const double wa = std::exp((r_ext(i + 1, j) - rij - d_ext(i + 1, j)) / gamma);
      const double wb = std::exp((r_ext(i, j + 1) - rij - d_ext(i, j + 1)) / gamma);
      const double wc = std::exp((r_ext(i + 1, j + 1) - rij - d_ext(i + 1, j + 1)) / gamma);
      e[i * w + j] = e[(i + 1) * w + j] * wa + e[i * w + j + 1] * wb + e[(i + 1) * w + j + 1] * wc;
    }
  }

  SoftDtwGradient out;
  out.value = t.at(n, m);
  out.gradient = Series(a.dim(), std::vector<double>(a.data().size(), 0.0));
  for (std::size_t i = 1; i <= n; ++i) {
    auto g = out.gradient.point(i - 1);
    const auto ai = a.point(i - 1);
    for (std::size_t j = 1; j <= m; ++j) {
      const double weight = e[i * w + j];
      const double dist = t.d[(i - 1) * m + (j - 1)];
      if (weight == 0.0 || dist == 0.0) continue;  // subgradient 0 at coincident points
      const auto bj = b.point(j - 1);
      for (std::size_t k = 0; k < a.dim(); ++k) g[k] += weight * (ai[k] - bj[k]) / dist;
    }
  }
  return out;
}

double soft_dtw_divergence(const Series& a, const Series& b, double gamma) {
  return soft_dtw(a, b, gamma) - 0.5 * (soft_dtw(a, a, gamma) + soft_dtw(b, b, gamma));
}

}  // namespace ccwind
