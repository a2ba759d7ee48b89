#include "ccwind/barycenter.hpp"

#include <cmath>

#include "ccwind/dtw.hpp"
#include "ccwind/error.hpp"

namespace ccwind {

namespace {

constexpr double kRelTol = 1e-6;

void check_inputs(std::span<const Series> set, const Series& init) {
  if (set.empty()) throw ParameterError("barycenter: empty series set");
  if (init.empty()) throw ParameterError("barycenter: empty initial series");
  for (const Series& s : set)
    if (s.dim() != init.dim()) throw ParameterError("barycenter: dimensionality mismatch");
}

bool converged(double before, double after) {
  const double scale = std::max(std::abs(before), 1e-300);
  return (before - after) / scale < kRelTol;
}

struct Alignment {
  double cost = 0.0;
  std::vector<WarpingPath> paths;
};

Alignment align(std::span<const Series> set, const Series& barycenter) {
  Alignment al;
  al.paths.reserve(set.size());
  for (const Series& s : set) {
    al.paths.push_back(dtw_path(barycenter, s));
    al.cost += al.paths.back().cost;
  }
  return al;
}

Series average_aligned(std::span<const Series> set, const Alignment& al, const Series& shape) {
  const std::size_t dim = shape.dim();
  std::vector<double> sum(shape.data().size(), 0.0);
  std::vector<std::size_t> count(shape.length(), 0);
  for (std::size_t s = 0; s < set.size(); ++s) {
    for (const auto& [bi, sj] : al.paths[s].steps) {
      const auto p = set[s].point(sj);
      for (std::size_t d = 0; d < dim; ++d) sum[bi * dim + d] += p[d];
      ++count[bi];
    }
  }
  for (std::size_t i = 0; i < count.size(); ++i)
    for (std::size_t d = 0; d < dim; ++d) sum[i * dim + d] /= static_cast<double>(count[i]);
  return Series(dim, std::move(sum));
}

double soft_objective(std::span<const Series> set, const Series& b, double gamma, Series* grad) {
  double total = 0.0;
  if (grad) *grad = Series(b.dim(), std::vector<double>(b.data().size(), 0.0));
  for (const Series& s : set) {
    if (grad) {
      SoftDtwGradient g = soft_dtw_grad(b, s, gamma);
      total += g.value;
      for (std::size_t k = 0; k < g.gradient.data().size(); ++k) grad->data()[k] += g.gradient.data()[k];
    } else {
      total += soft_dtw(b, s, gamma);
    }
  }
  return total;
}

}  // namespace

BarycenterResult dba(std::span<const Series> set, const Series& init, std::size_t max_iters) {
  check_inputs(set, init);
  BarycenterResult out{init, {}};
  Alignment current = align(set, out.barycenter);
  out.objective.push_back(current.cost);

  for (std::size_t it = 0; it < max_iters; ++it) {
    Series candidate = average_aligned(set, current, out.barycenter);
    Alignment next = align(set, candidate);
    if (next.cost > current.cost) break;
    const bool done = converged(current.cost, next.cost);
    out.barycenter = std::move(candidate);
    current = std::move(next);
    out.objective.push_back(current.cost);
    if (done) break;
  }
  return out;
}

BarycenterResult soft_dtw_barycenter(std::span<const Series> set, const Series& init, double gamma,
                                     std::size_t max_iters) {
  check_inputs(set, init);
  if (!(gamma > 0.0)) throw ParameterError("soft-dtw barycenter: gamma must be > 0");

  BarycenterResult out{init, {}};
  Series grad;
  double value = soft_objective(set, out.barycenter, gamma, &grad);
  out.objective.push_back(value);

  // Backtracking line search; the step is doubled after every accepted move.
  double step = 1.0 / static_cast<double>(set.size());
  for (std::size_t it = 0; it < max_iters; ++it) {
    bool accepted = false;
    Series candidate;
    double cand_value = value;
    for (int attempt = 0; attempt < 30; ++attempt) {
      std::vector<double> data = out.barycenter.data();
      for (std::size_t k = 0; k < data.size(); ++k) data[k] -= step * grad.data()[k];
      candidate = Series(out.barycenter.dim(), std::move(data));
      cand_value = soft_objective(set, candidate, gamma, nullptr);
      if (cand_value < value) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const bool done = converged(value, cand_value);
    out.barycenter = std::move(candidate);
    value = soft_objective(set, out.barycenter, gamma, &grad);
    out.objective.push_back(value);
    step *= 2.0;
    if (done) break;
  }
  return out;
}

}  // namespace ccwind
