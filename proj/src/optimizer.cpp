#include "ccwind/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ccwind/error.hpp"
#include "ccwind/parallel.hpp"

namespace ccwind {

namespace {

Vec3 axis_direction(Rng& rng) {
  std::uniform_int_distribution<int> pick(0, 5);
  const int k = pick(rng);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  switch (k / 2) {
    case 0: return {sign, 0.0, 0.0};
    case 1: return {0.0, sign, 0.0};
    default: return {0.0, 0.0, sign};
  }
}

Vec3 sphere_direction(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  while (true) {
    const Vec3 v{normal(rng), normal(rng), normal(rng)};
    const double len = norm(v);
    if (len > 1e-12) return v / len;
  }
}

// Scores for records with the loop-level error policy applied.
std::vector<LoopRecord> evaluate_all(const std::vector<ThrustSchedule>& schedules, const EnvironmentGroup& g1,
                                     const EnvironmentGroup& g2, const EvalContext& ctx) {
  std::vector<LoopRecord> out(schedules.size());
  EvalContext inner = ctx;
  inner.jobs = 1;
  parallel_for(schedules.size(), ctx.jobs, [&](std::size_t i) {
    try {
      out[i] = evaluate_schedule(schedules[i], g1, g2, inner);
    } catch (const Error& e) {
      out[i] = failed_record(schedules[i], e.what());
    }
  });
  return out;
}

}  // namespace

void validate(const RandomSearchConfig& cfg) {
  if (cfg.n_loops < 1) throw ParameterError("search: n_loops must be >= 1");
  if (!(cfg.max_magnitude > 0.0)) throw ParameterError("search: max_magnitude must be > 0");
}

std::vector<double> sample_change_times(std::size_t n_changes, double total_time, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, total_time);
  std::vector<double> times;
  times.reserve(n_changes + 1);
  times.push_back(0.0);
  while (times.size() < n_changes + 1) {
    const double t = uniform(rng);
    if (t <= 0.0 || std::find(times.begin(), times.end(), t) != times.end()) continue;
    times.push_back(t);
  }
  std::sort(times.begin(), times.end());
  return times;
}

ThrustSchedule sample_random_schedule(const RandomSearchConfig& cfg, double total_time, Rng& rng) {
  const std::vector<double> times = sample_change_times(cfg.n_changes, total_time, rng);
  std::uniform_real_distribution<double> magnitude(0.0, cfg.max_magnitude);
  std::vector<ThrustSegment> segs;
  segs.reserve(times.size());
  for (double t : times) {
    const double mag = magnitude(rng);
    const Vec3 dir = cfg.direction_mode == DirectionMode::axis_aligned ? axis_direction(rng) : sphere_direction(rng);
    segs.push_back({t, dir * mag});
  }
  return ThrustSchedule(std::move(segs));
}

ScoreSummary summarize(const std::vector<LoopRecord>& records) {
  ScoreSummary s;
  if (records.empty()) return s;
  double sum = 0.0;
  for (const LoopRecord& r : records) {
    s.max = std::max(s.max, r.score);
    sum += r.score;
  }
  s.mean = sum / static_cast<double>(records.size());
  return s;
}

RandomSearchResult random_search(const EnvironmentGroup& group1, const EnvironmentGroup& group2,
                                 const RandomSearchConfig& cfg, const EvalContext& ctx) {
  validate(cfg);
  std::vector<ThrustSchedule> schedules;
  schedules.reserve(cfg.n_loops);
  for (std::size_t i = 0; i < cfg.n_loops; ++i) {
    Rng rng(derive_seed(cfg.seed, i));
    schedules.push_back(sample_random_schedule(cfg, ctx.sim.total_time, rng));
  }
  RandomSearchResult result;
  result.records = evaluate_all(schedules, group1, group2, ctx);
  result.summary = summarize(result.records);
  return result;
}

void validate(const CemConfig& cfg) {
  if (cfg.n_samples < 1) throw ParameterError("cem: n_samples must be >= 1");
  if (cfg.n_elite < 1 || cfg.n_elite > cfg.n_samples) throw ParameterError("cem: need 1 <= n_elite <= n_samples");
  if (cfg.max_iterations < 1) throw ParameterError("cem: max_iterations must be >= 1");
  if (!(cfg.max_magnitude > 0.0)) throw ParameterError("cem: max_magnitude must be > 0");
  if (!(cfg.init_sigma_mag >= 0.0) || !(cfg.init_sigma_dir.x >= 0.0) || !(cfg.init_sigma_dir.y >= 0.0) ||
      !(cfg.init_sigma_dir.z >= 0.0))
    throw ParameterError("cem: initial sigmas must be >= 0");
}

CemState cem_initial_state(const CemConfig& cfg, double total_time, Rng& rng) {
  validate(cfg);
  CemState s;
  s.change_times = sample_change_times(cfg.n_changes, total_time, rng);
  const std::size_t n = s.change_times.size();
  s.mu_mag.assign(n, cfg.init_mu_mag);
  s.sigma_mag.assign(n, cfg.init_sigma_mag);
  s.mu_dir.assign(n, cfg.init_mu_dir);
  s.sigma_dir.assign(n, cfg.init_sigma_dir);
  return s;
}

std::vector<CemSample> cem_sample(const CemState& state, const CemConfig& cfg, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<CemSample> out;
  out.reserve(cfg.n_samples);
  for (std::size_t k = 0; k < cfg.n_samples; ++k) {
    CemSample sample;
    std::vector<ThrustSegment> segs;
    for (std::size_t s = 0; s < state.segments(); ++s) {
      const double mag =
          std::clamp(state.mu_mag[s] + state.sigma_mag[s] * normal(rng), 0.0, cfg.max_magnitude);
      Vec3 dir;
      for (int attempt = 0;; ++attempt) {
        if (attempt == 1000) throw ParameterError("cem: direction distribution is concentrated at the zero vector");
        const Vec3& mu = state.mu_dir[s];
        const Vec3& sd = state.sigma_dir[s];
        dir = {mu.x + sd.x * normal(rng), mu.y + sd.y * normal(rng), mu.z + sd.z * normal(rng)};
        const double len = norm(dir);
        if (len > 1e-12) {
          dir = dir / len;
          break;
        }
      }
      sample.magnitudes.push_back(mag);
      sample.directions.push_back(dir);
      segs.push_back({state.change_times[s], dir * mag});
    }
    sample.schedule = ThrustSchedule(std::move(segs));
    out.push_back(std::move(sample));
  }
  return out;
}

CemState cem_update(const CemState& state, const std::vector<CemSample>& samples,
                    const std::vector<double>& scores, const CemConfig& cfg) {
  if (samples.size() != scores.size() || samples.size() < cfg.n_elite)
    throw ParameterError("cem: need one score per sample and at least n_elite samples");
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(cfg.n_elite);

  const double ne = static_cast<double>(cfg.n_elite);
  auto fit = [&](auto get) {
    double mean = 0.0;
    for (std::size_t i : order) mean += get(samples[i]);
    mean /= ne;
    double var = 0.0;
    for (std::size_t i : order) {
      const double d = get(samples[i]) - mean;
      var += d * d;
    }
    return std::pair{mean, std::sqrt(var / ne)};
  };

  CemState next = state;
  for (std::size_t s = 0; s < state.segments(); ++s) {
    std::tie(next.mu_mag[s], next.sigma_mag[s]) = fit([s](const CemSample& c) { return c.magnitudes[s]; });
    std::tie(next.mu_dir[s].x, next.sigma_dir[s].x) = fit([s](const CemSample& c) { return c.directions[s].x; });
    std::tie(next.mu_dir[s].y, next.sigma_dir[s].y) = fit([s](const CemSample& c) { return c.directions[s].y; });
    std::tie(next.mu_dir[s].z, next.sigma_dir[s].z) = fit([s](const CemSample& c) { return c.directions[s].z; });
  }
  ++next.iteration;
  return next;
}

CemResult cem_run(const EnvironmentGroup& group1, const EnvironmentGroup& group2, const CemConfig& cfg,
                  const EvalContext& ctx) {
  validate(cfg);
  Rng rng(cfg.seed);
  CemState state = cem_initial_state(cfg, ctx.sim.total_time, rng);
  CemResult result;
  bool have_best = false;
  std::size_t stall = 0;

  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    const std::vector<CemSample> samples = cem_sample(state, cfg, rng);
    std::vector<ThrustSchedule> schedules;
    schedules.reserve(samples.size());
    for (const CemSample& s : samples) schedules.push_back(s.schedule);
    std::vector<LoopRecord> records = evaluate_all(schedules, group1, group2, ctx);

    std::vector<double> scores;
    scores.reserve(records.size());
    for (const LoopRecord& r : records) scores.push_back(r.score);
    const ScoreSummary summary = summarize(records);

    const auto top = std::max_element(scores.begin(), scores.end());  // first maximum
    if (!have_best || *top > result.best.score) {
      result.best = records[static_cast<std::size_t>(top - scores.begin())];
      have_best = true;
      stall = 0;
    } else {
      ++stall;
    }
    result.history.push_back({it, summary.max, summary.mean, result.best.score});
    result.evaluations += records.size();
    for (LoopRecord& r : records) result.records.push_back(std::move(r));

    state = cem_update(state, samples, scores, cfg);
    if (stall >= cfg.stall_patience) break;
    if (std::all_of(state.sigma_mag.begin(), state.sigma_mag.end(), [&](double s) { return s < cfg.min_sigma; }))
      break;
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace ccwind
