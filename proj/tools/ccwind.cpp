// ccwind: command-line front end for the simulation, clustering and search runners.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "ccwind/config.hpp"
#include "ccwind/error.hpp"
#include "ccwind/experiments.hpp"
#include "ccwind/kmeans.hpp"
#include "ccwind/parallel.hpp"
#include "ccwind/silhouette.hpp"

namespace fs = std::filesystem;
using namespace ccwind;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = default_jobs();
  bool verbose = false;
  std::optional<std::size_t> loops;
  bool long_run = false;
  int experiment = 0;
  std::string cluster_dir;
  std::size_t k = 2;
};

void log(const Options& o, const std::string& msg) {
  if (o.verbose) std::cerr << msg << '\n';
}

RunConfig resolve(const Options& o) {
  RunConfig cfg = load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.loops) {
    if (*o.loops == 0) throw ConfigError("--loops", "must be >= 1");
    cfg.search.n_loops = *o.loops;
  }
  return cfg;
}

ExperimentSettings settings(const RunConfig& cfg, const Options& o) {
  ExperimentSettings s = settings_from(cfg, o.jobs);
  s.eval.keep_trajectories = o.verbose;
  return s;
}

void report(const Options& o, const std::vector<fs::path>& paths) {
  for (const fs::path& p : paths) log(o, "wrote " + p.string());
}

void print_summary(const ExperimentResult& r) {
  fmt::print("{:<48} max {:7.2f}  mean {:7.2f}\n", r.scenario + (r.sweep_label.empty() ? "" : " [" + r.sweep_label + "]"),
             r.summary.max, r.summary.mean);
  if (!r.sweep_label.empty())
    for (const SweepPoint& p : r.points)
      fmt::print("    {} = {:<6g} max {:7.2f}  mean {:7.2f}\n", r.sweep_label, p.sweep_value, p.summary.max,
                 p.summary.mean);
}

int cmd_simulate(const Options& o) {
  const RunConfig cfg = resolve(o);
  const Trajectory traj = simulate(cfg.uav, cfg.schedule, cfg.wind, cfg.sim, cfg.seed);
  fs::create_directories(o.out);
  const fs::path csv = fs::path(o.out) / "trajectory.csv";
  write_file_atomic(csv, trajectory_csv(traj));
  const nlohmann::json meta = {{"seed", cfg.seed},
                               {"samples", traj.times.size()},
                               {"schedule", to_json(cfg.schedule)},
                               {"wind", to_json(cfg.wind)}};
  write_file_atomic(fs::path(o.out) / "trajectory.json", meta.dump(2) + "\n");
  const Vec3& end = traj.positions.back();
  fmt::print("{} samples, final position ({:.4f}, {:.4f}, {:.4f})\n", traj.times.size(), end.x, end.y, end.z);
  log(o, "wrote " + csv.string());
  return 0;
}

Series read_trajectory_csv(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line) || line.rfind("t,x,y,z", 0) != 0)
    throw Error(path.string() + ": expected header t,x,y,z");
  std::vector<double> data;
  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(fmt::format("{}:{}: bad number '{}'", path.string(), row, cell));
      }
    }
    if (vals.size() != 4) throw Error(fmt::format("{}:{}: expected 4 columns", path.string(), row));
    data.insert(data.end(), vals.begin() + 1, vals.end());
  }
  if (data.empty()) throw Error(path.string() + ": no samples");
  return Series(3, std::move(data));
}

int cmd_cluster(const Options& o) {
  const RunConfig cfg = resolve(o);
  if (!fs::is_directory(o.cluster_dir)) throw Error("not a directory: " + o.cluster_dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(o.cluster_dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.size() < o.k) throw Error(fmt::format("need at least {} trajectory CSVs, found {}", o.k, files.size()));

  std::vector<Series> set;
  for (const fs::path& p : files) set.push_back(read_trajectory_csv(p));
  KMeansOptions km = cfg.kmeans;
  km.seed = cfg.seed;
  const ClusterModel model = kmeans(set, o.k, cfg.metric, km);
  for (std::size_t i = 0; i < files.size(); ++i)
    fmt::print("{}\t{}\n", files[i].filename().string(), model.assignments[i]);
  const double s = silhouette(set, model.assignments, cfg.metric);
  fmt::print("silhouette {:.6f}\n", s);
  return 0;
}

int cmd_experiment(const Options& o) {
  const RunConfig cfg = resolve(o);
  const ExperimentSettings s = settings(cfg, o);
  const fs::path out = o.out;
  fs::create_directories(out);
  const std::string tag = fmt::format("exp{}_", o.experiment);

  switch (o.experiment) {
    case 1: {
      for (const ScenarioSpec& spec : cfg.scenarios) {
        log(o, "scenario " + spec.name);
        const ExperimentResult r = run_scenario(spec, s, "windspeed");
        report(o, persist_results(r, out, tag + slug(spec.name), o.verbose));
        print_summary(r);
      }
      if (o.long_run && !cfg.scenarios.empty()) {
        ExperimentSettings longer = s;
        longer.search.n_loops = 500;
        const ScenarioSpec& spec = cfg.scenarios.front();
        log(o, "scenario " + spec.name + " (500 loops)");
        const ExperimentResult r = run_scenario(spec, longer, "windspeed");
        report(o, persist_results(r, out, tag + slug(spec.name) + "_500", o.verbose));
        print_summary(r);
      }
      break;
    }
    case 2:
    case 3:
    case 4:
      for (const std::string& name : cfg.sweep_scenarios) {
        const ScenarioSpec& spec = find_scenario(cfg, name);
        log(o, "scenario " + name);
        const ExperimentResult r = o.experiment == 2   ? run_experiment_range_similarity(spec, s)
                                   : o.experiment == 3 ? run_experiment_env_count(spec, s)
                                                       : run_experiment_thrust_changes(spec, s);
        report(o, persist_results(r, out, tag + slug(name), o.verbose));
        print_summary(r);
      }
      break;
    case 5: {
      const auto [same, opposite] = run_experiment_direction(cfg.direction, s);
      report(o, persist_results(same, out, tag + "same_direction", o.verbose));
      report(o, persist_results(opposite, out, tag + "opposite_direction", o.verbose));
      print_summary(same);
      print_summary(opposite);
      break;
    }
    case 6: {
      const CemExperimentResult r = run_experiment_cem(cfg.cem_scenario, s);
      report(o, persist_cem(r, out, tag + "cem"));
      for (const CemIteration& it : r.cem.history)
        fmt::print("iteration {:>2}  max {:7.2f}  mean {:7.2f}  best {:7.2f}\n", it.iteration, it.max, it.mean,
                   it.best_so_far);
      fmt::print("cem best {:.2f} over {} evaluations; random best {:.2f}\n", r.cem.best.score, r.cem.evaluations,
                 r.baseline.summary.max);
      break;
    }
    default:
      throw ConfigError("experiment", "expected a number from 1 to 6");
  }
  return 0;
}

int cmd_validate(const Options& o) {
  const RunConfig cfg = resolve(o);
  std::cout << to_json(cfg).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  const char* env_out = std::getenv("CCWIND_OUTPUT_DIR");
  o.out = env_out && *env_out ? env_out : "results";

  CLI::App app{"Curiosity-driven wind classification: simulation, clustering and thrust-schedule search"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", o.out, "Output directory (default: $CCWIND_OUTPUT_DIR or ./results)");
    sub->add_option("-s,--seed", o.seed, "Override the master seed from the config");
    sub->add_option("-j,--jobs", o.jobs, "Worker threads (default: available processors)")->check(CLI::PositiveNumber);
    sub->add_flag("-v,--verbose", o.verbose, "Log progress to stderr and dump per-loop trajectories");
  };

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one trajectory and write trajectory.csv");
  add_common(simulate_cmd);

  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster a directory of trajectory CSVs and print the silhouette");
  add_common(cluster_cmd);
  cluster_cmd->add_option("dir", o.cluster_dir, "Directory of t,x,y,z CSV files")->required();
  cluster_cmd->add_option("-k,--clusters", o.k, "Number of clusters")->check(CLI::Range(2, 1000));

  auto* exp_cmd = app.add_subcommand("experiment", "Run one of the six experiments");
  add_common(exp_cmd);
  exp_cmd->add_option("number", o.experiment, "Experiment number")->required()->check(CLI::Range(1, 6));
  exp_cmd->add_option("--loops", o.loops, "Override the number of random-search loops");
  exp_cmd->add_flag("--long-run", o.long_run, "Experiment 1: also run the first scenario with 500 loops");

  auto* cem_cmd = app.add_subcommand("cem", "Run the cross-entropy search against a matched random baseline");
  add_common(cem_cmd);

  auto* validate_cmd = app.add_subcommand("validate-config", "Parse the config and print it fully resolved");
  add_common(validate_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(o);
    if (*cluster_cmd) return cmd_cluster(o);
    if (*exp_cmd) return cmd_experiment(o);
    if (*cem_cmd) {
      o.experiment = 6;
      return cmd_experiment(o);
    }
    if (*validate_cmd) return cmd_validate(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
