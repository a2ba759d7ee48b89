#include "ccwind/config.hpp"

#include <cmath>
#include <fstream>

#include "ccwind/error.hpp"

namespace ccwind {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
  return d;
}

double required_number(const json& obj, const std::string& path, const std::string& key) {
  const json* v = find(obj, key);
  if (!v) throw ConfigError(join(path, key), "missing required field");
  return number_at(*v, join(path, key));
}

double number_or(const json& obj, const std::string& path, const std::string& key, double fallback) {
  const json* v = find(obj, key);
  return v ? number_at(*v, join(path, key)) : fallback;
}

std::size_t count_or(const json& obj, const std::string& path, const std::string& key, std::size_t fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer() || v->get<long long>() < 0)
    throw ConfigError(join(path, key), "expected a non-negative integer");
  return v->get<std::size_t>();
}

std::string string_or(const json& obj, const std::string& path, const std::string& key, std::string fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) throw ConfigError(join(path, key), "expected a string");
  return v->get<std::string>();
}

Vec3 vec_at(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw ConfigError(path, "expected [x, y, z]");
  return {number_at(v[0], path + "[0]"), number_at(v[1], path + "[1]"), number_at(v[2], path + "[2]")};
}

Vec3 vec_or(const json& obj, const std::string& path, const std::string& key, Vec3 fallback) {
  const json* v = find(obj, key);
  return v ? vec_at(*v, join(path, key)) : fallback;
}

SpeedRange range_at(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected [lo, hi]");
  SpeedRange r{number_at(v[0], path + "[0]"), number_at(v[1], path + "[1]")};
  if (r.hi < r.lo) throw ConfigError(path, "range is inverted");
  return r;
}

int sign_or(const json& obj, const std::string& path, const std::string& key, int fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer() || (v->get<int>() != 1 && v->get<int>() != -1))
    throw ConfigError(join(path, key), "expected +1 or -1");
  return v->get<int>();
}

WindFamily family_at(const std::string& s, const std::string& path) {
  if (s == "constant") return WindFamily::constant;
  if (s == "shear") return WindFamily::shear;
  if (s == "turbulence" || s == "dryden") return WindFamily::turbulence;
  throw ConfigError(path, "unknown wind family '" + s + "'");
}

GroupSpec parse_group(const json& j, const std::string& path, const RunConfig& cfg) {
  require_object(j, path);
  GroupSpec g;
  const json* fam = find(j, "family");
  if (!fam || !fam->is_string()) throw ConfigError(join(path, "family"), "missing required field");
  g.family = family_at(fam->get<std::string>(), join(path, "family"));
  g.speed_class = string_or(j, path, "speed_class", "light");
  if (const json* r = find(j, "range")) {
    g.range = range_at(*r, join(path, "range"));
  } else if (g.speed_class == "light") {
    g.range = cfg.light;
  } else if (g.speed_class == "strong") {
    g.range = cfg.strong;
  } else {
    throw ConfigError(join(path, "speed_class"), "unknown speed class '" + g.speed_class + "' and no range given");
  }
  g.n_environments = count_or(j, path, "n_environments", 5);
  if (g.n_environments < 1) throw ConfigError(join(path, "n_environments"), "must be >= 1");
  g.direction_sign = sign_or(j, path, "direction_sign", 1);
  if (const json* axes = find(j, "axes")) {
    if (!axes->is_array()) throw ConfigError(join(path, "axes"), "expected a list of \"x\", \"y\", \"z\"");
    g.axes = {false, false, false};
    for (const json& a : *axes) {
      const std::string s = a.is_string() ? a.get<std::string>() : "";
      if (s == "x") g.axes[0] = true;
      else if (s == "y") g.axes[1] = true;
      else if (s == "z") g.axes[2] = true;
      else throw ConfigError(join(path, "axes"), "expected a list of \"x\", \"y\", \"z\"");
    }
  }
  if (const json* ar = find(j, "axis_ranges")) {
    if (!ar->is_array() || ar->size() != 3) throw ConfigError(join(path, "axis_ranges"), "expected three [lo, hi] pairs");
    std::array<SpeedRange, 3> ranges;
    for (std::size_t a = 0; a < 3; ++a)
      ranges[a] = range_at((*ar)[a], join(path, "axis_ranges") + "[" + std::to_string(a) + "]");
    g.axis_ranges = ranges;
  }
  if (const json* sh = find(j, "shear")) {
    const std::string p = join(path, "shear");
    require_object(*sh, p);
    g.shear_alpha = number_or(*sh, p, "alpha", g.shear_alpha);
    g.shear_ref_altitude = number_or(*sh, p, "ref_altitude", g.shear_ref_altitude);
    g.shear_min_altitude = number_or(*sh, p, "min_altitude", g.shear_min_altitude);
    if (!(g.shear_alpha >= 0.0)) throw ConfigError(join(p, "alpha"), "must be >= 0");
    if (!(g.shear_ref_altitude > 0.0)) throw ConfigError(join(p, "ref_altitude"), "must be > 0");
    if (!(g.shear_min_altitude > 0.0)) throw ConfigError(join(p, "min_altitude"), "must be > 0");
  }
  if (const json* tu = find(j, "turbulence")) {
    const std::string p = join(path, "turbulence");
    require_object(*tu, p);
    g.turbulence_sigma = vec_or(*tu, p, "sigma", g.turbulence_sigma);
    g.turbulence_scale_length = vec_or(*tu, p, "scale_length", g.turbulence_scale_length);
    if (g.turbulence_sigma.x < 0 || g.turbulence_sigma.y < 0 || g.turbulence_sigma.z < 0)
      throw ConfigError(join(p, "sigma"), "must be >= 0");
    if (!(g.turbulence_scale_length.x > 0 && g.turbulence_scale_length.y > 0 && g.turbulence_scale_length.z > 0))
      throw ConfigError(join(p, "scale_length"), "must be > 0");
  }
  return g;
}

ScenarioSpec parse_scenario(const json& j, const std::string& path, const RunConfig& cfg) {
  require_object(j, path);
  ScenarioSpec s;
  const json* name = find(j, "name");
  if (!name || !name->is_string()) throw ConfigError(join(path, "name"), "missing required field");
  s.name = name->get<std::string>();
  const json* g1 = find(j, "group1");
  const json* g2 = find(j, "group2");
  if (!g1) throw ConfigError(join(path, "group1"), "missing required field");
  if (!g2) throw ConfigError(join(path, "group2"), "missing required field");
  s.group1 = parse_group(*g1, join(path, "group1"), cfg);
  s.group2 = parse_group(*g2, join(path, "group2"), cfg);
  return s;
}

WindModel parse_wind(const json& j, const std::string& path, const SimConfig& sim) {
  require_object(j, path);
  const std::string type = string_or(j, path, "type", "constant");
  if (type == "constant") return ConstantWind{vec_or(j, path, "velocity", {})};
  if (type == "shear") {
    ShearWind w;
    w.ref_velocity = vec_or(j, path, "ref_velocity", {});
    w.ref_altitude = number_or(j, path, "ref_altitude", w.ref_altitude);
    w.alpha = number_or(j, path, "alpha", w.alpha);
    w.min_altitude = number_or(j, path, "min_altitude", w.min_altitude);
    return w;
  }
  if (type == "dryden" || type == "turbulence") {
    DrydenWind w;
    w.mean_wind = vec_or(j, path, "mean_wind", {});
    w.sigma = vec_or(j, path, "sigma", w.sigma);
    w.scale_length = vec_or(j, path, "scale_length", w.scale_length);
    const double speed = std::max(norm(w.mean_wind), 1.0);
    w.airspeed = vec_or(j, path, "airspeed", {speed, speed, speed});
    w.dt = sim.dt;
    w.horizon = sim.total_time;
    w.seed = count_or(j, path, "seed", 0);
    return w;
  }
  throw ConfigError(join(path, "type"), "unknown wind type '" + type + "'");
}

void apply_class_ranges(GroupSpec& g, const RunConfig& cfg) {
  if (g.speed_class == "light") g.range = cfg.light;
  if (g.speed_class == "strong") g.range = cfg.strong;
}

json vec_json(const Vec3& v) { return {v.x, v.y, v.z}; }

}  // namespace

RunConfig parse_config(const json& j) {
  require_object(j, "");
  RunConfig cfg;

  if (const json* seed = find(j, "seed")) {
    if (!seed->is_number_integer() || seed->get<long long>() < 0) throw ConfigError("seed", "expected a non-negative integer");
    cfg.seed = seed->get<std::uint64_t>();
  }

  const json* uav = find(j, "uav");
  if (!uav) throw ConfigError("uav", "missing required section");
  require_object(*uav, "uav");
  cfg.uav.mass = required_number(*uav, "uav", "mass");
  cfg.uav.drag_coeff = required_number(*uav, "uav", "drag_coeff");
  cfg.uav.cross_section = required_number(*uav, "uav", "cross_section");
  cfg.uav.air_density = required_number(*uav, "uav", "air_density");
  cfg.uav.gravity_accel = number_or(*uav, "uav", "gravity_accel", cfg.uav.gravity_accel);
  if (!(cfg.uav.mass > 0)) throw ConfigError("uav.mass", "must be > 0");
  if (!(cfg.uav.drag_coeff >= 0)) throw ConfigError("uav.drag_coeff", "must be >= 0");
  if (!(cfg.uav.cross_section >= 0)) throw ConfigError("uav.cross_section", "must be >= 0");
  if (!(cfg.uav.air_density > 0)) throw ConfigError("uav.air_density", "must be > 0");

  if (const json* sim = find(j, "sim")) {
    require_object(*sim, "sim");
    cfg.sim.dt = number_or(*sim, "sim", "dt", cfg.sim.dt);
    cfg.sim.total_time = number_or(*sim, "sim", "total_time", cfg.sim.total_time);
    cfg.sim.initial_position = vec_or(*sim, "sim", "initial_position", cfg.sim.initial_position);
    cfg.sim.initial_velocity = vec_or(*sim, "sim", "initial_velocity", cfg.sim.initial_velocity);
    cfg.sim.initial_altitude_offset = number_or(*sim, "sim", "initial_altitude_offset", cfg.sim.initial_altitude_offset);
    cfg.sim.relative_velocity_sign = sign_or(*sim, "sim", "relative_velocity_sign", cfg.sim.relative_velocity_sign);
    if (!(cfg.sim.dt > 0)) throw ConfigError("sim.dt", "must be > 0");
    if (!(cfg.sim.total_time >= cfg.sim.dt)) throw ConfigError("sim.total_time", "must be >= dt");
    if (cfg.sim.total_time / cfg.sim.dt > 1e9) throw ConfigError("sim.total_time", "too many steps");
  }

  if (const json* cl = find(j, "clustering")) {
    require_object(*cl, "clustering");
    const std::string metric = string_or(*cl, "clustering", "metric", "dtw");
    if (metric == "dtw") {
      cfg.metric = Metric::classic();
    } else if (metric == "softdtw") {
      cfg.metric = Metric::soft(number_or(*cl, "clustering", "gamma", 1.0));
      if (!(cfg.metric.gamma > 0)) throw ConfigError("clustering.gamma", "must be > 0");
    } else {
      throw ConfigError("clustering.metric", "expected \"dtw\" or \"softdtw\"");
    }
    cfg.kmeans.n_init = count_or(*cl, "clustering", "n_init", cfg.kmeans.n_init);
    cfg.kmeans.max_iters = count_or(*cl, "clustering", "max_iters", cfg.kmeans.max_iters);
    cfg.kmeans.barycenter_iters = count_or(*cl, "clustering", "barycenter_iters", cfg.kmeans.barycenter_iters);
    if (cfg.kmeans.n_init < 1) throw ConfigError("clustering.n_init", "must be >= 1");
  }

  if (const json* s = find(j, "search")) {
    require_object(*s, "search");
    cfg.search.n_loops = count_or(*s, "search", "n_loops", cfg.search.n_loops);
    cfg.search.n_changes = count_or(*s, "search", "n_changes", cfg.search.n_changes);
    cfg.search.max_magnitude = number_or(*s, "search", "max_magnitude", cfg.search.max_magnitude);
    const std::string mode = string_or(*s, "search", "direction_mode", "axis_aligned");
    if (mode == "axis_aligned") cfg.search.direction_mode = DirectionMode::axis_aligned;
    else if (mode == "unit_sphere") cfg.search.direction_mode = DirectionMode::unit_sphere;
    else throw ConfigError("search.direction_mode", "expected \"axis_aligned\" or \"unit_sphere\"");
    if (cfg.search.n_loops < 1) throw ConfigError("search.n_loops", "must be >= 1");
    if (!(cfg.search.max_magnitude > 0)) throw ConfigError("search.max_magnitude", "must be > 0");
  }
  cfg.cem.max_magnitude = cfg.search.max_magnitude;
  cfg.cem.n_changes = cfg.search.n_changes;

  if (const json* c = find(j, "cem")) {
    require_object(*c, "cem");
    cfg.cem.n_samples = count_or(*c, "cem", "n_samples", cfg.cem.n_samples);
    cfg.cem.n_elite = count_or(*c, "cem", "n_elite", cfg.cem.n_elite);
    cfg.cem.max_iterations = count_or(*c, "cem", "max_iterations", cfg.cem.max_iterations);
    cfg.cem.stall_patience = count_or(*c, "cem", "stall_patience", cfg.cem.stall_patience);
    cfg.cem.min_sigma = number_or(*c, "cem", "min_sigma", cfg.cem.min_sigma);
    cfg.cem.n_changes = count_or(*c, "cem", "n_changes", cfg.cem.n_changes);
    cfg.cem.max_magnitude = number_or(*c, "cem", "max_magnitude", cfg.cem.max_magnitude);
    cfg.cem.init_mu_mag = number_or(*c, "cem", "mu_mag", cfg.cem.init_mu_mag);
    cfg.cem.init_sigma_mag = number_or(*c, "cem", "sigma_mag", cfg.cem.init_sigma_mag);
    cfg.cem.init_mu_dir = vec_or(*c, "cem", "mu_dir", cfg.cem.init_mu_dir);
    cfg.cem.init_sigma_dir = vec_or(*c, "cem", "sigma_dir", cfg.cem.init_sigma_dir);
    if (cfg.cem.n_samples < 1) throw ConfigError("cem.n_samples", "must be >= 1");
    if (cfg.cem.n_elite < 1 || cfg.cem.n_elite > cfg.cem.n_samples)
      throw ConfigError("cem.n_elite", "must be in [1, n_samples]");
    if (cfg.cem.max_iterations < 1) throw ConfigError("cem.max_iterations", "must be >= 1");
    if (!(cfg.cem.init_sigma_mag >= 0)) throw ConfigError("cem.sigma_mag", "must be >= 0");
  }

  if (const json* sc = find(j, "speed_classes")) {
    require_object(*sc, "speed_classes");
    if (const json* l = find(*sc, "light")) cfg.light = range_at(*l, "speed_classes.light");
    if (const json* s = find(*sc, "strong")) cfg.strong = range_at(*s, "speed_classes.strong");
  }

  auto with_classes = [&](ScenarioSpec s) {
    apply_class_ranges(s.group1, cfg);
    apply_class_ranges(s.group2, cfg);
    return s;
  };
  if (const json* list = find(j, "scenarios")) {
    if (!list->is_array() || list->empty()) throw ConfigError("scenarios", "expected a non-empty list");
    for (std::size_t i = 0; i < list->size(); ++i)
      cfg.scenarios.push_back(parse_scenario((*list)[i], "scenarios[" + std::to_string(i) + "]", cfg));
  } else {
    for (const ScenarioSpec& s : wind_speed_catalog()) cfg.scenarios.push_back(with_classes(s));
  }

  if (const json* sw = find(j, "sweep_scenarios")) {
    if (!sw->is_array()) throw ConfigError("sweep_scenarios", "expected a list of scenario names");
    for (const json& n : *sw) {
      if (!n.is_string()) throw ConfigError("sweep_scenarios", "expected a list of scenario names");
      cfg.sweep_scenarios.push_back(n.get<std::string>());
    }
  } else {
    for (std::size_t i = 0; i < std::min<std::size_t>(4, cfg.scenarios.size()); ++i)
      cfg.sweep_scenarios.push_back(cfg.scenarios[i].name);
  }
  for (const std::string& name : cfg.sweep_scenarios) {
    bool found = false;
    for (const ScenarioSpec& s : cfg.scenarios) found = found || s.name == name;
    if (!found) throw ConfigError("sweep_scenarios", "unknown scenario '" + name + "'");
  }

  cfg.direction = find(j, "direction_scenario") ? parse_scenario(j["direction_scenario"], "direction_scenario", cfg)
                                                : with_classes(direction_scenario());
  cfg.cem_scenario = find(j, "cem_scenario") ? parse_scenario(j["cem_scenario"], "cem_scenario", cfg)
                                             : with_classes(ccwind::cem_scenario());

  cfg.schedule = ThrustSchedule({{0.0, {0, 0, 40}}, {4.0, {15, 0, 0}}, {10.0, {0, 45, 0}}});
  if (const json* sim = find(j, "simulate")) {
    require_object(*sim, "simulate");
    if (const json* sch = find(*sim, "schedule")) {
      try {
        cfg.schedule = schedule_from_json(*sch);
      } catch (const ScheduleError& e) {
        throw ConfigError("simulate.schedule", e.what());
      } catch (const json::exception& e) {
        throw ConfigError("simulate.schedule", std::string("malformed: ") + e.what());
      }
    }
    if (const json* w = find(*sim, "wind")) cfg.wind = parse_wind(*w, "simulate.wind", cfg.sim);
  }
  try {
    validate(cfg.wind);
  } catch (const ParameterError& e) {
    throw ConfigError("simulate.wind", e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("<file>", "cannot open " + path.string());
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

nlohmann::json to_json(const WindModel& wind) {
  if (const auto* c = std::get_if<ConstantWind>(&wind)) return {{"type", "constant"}, {"velocity", vec_json(c->velocity)}};
  if (const auto* s = std::get_if<ShearWind>(&wind))
    return {{"type", "shear"},
            {"ref_velocity", vec_json(s->ref_velocity)},
            {"ref_altitude", s->ref_altitude},
            {"alpha", s->alpha},
            {"min_altitude", s->min_altitude}};
  const auto& d = std::get<DrydenWind>(wind);
  return {{"type", "dryden"},
          {"mean_wind", vec_json(d.mean_wind)},
          {"sigma", vec_json(d.sigma)},
          {"scale_length", vec_json(d.scale_length)},
          {"airspeed", vec_json(d.airspeed)},
          {"seed", d.seed}};
}

nlohmann::json to_json(const RunConfig& c) {
  json scenarios = json::array();
  for (const ScenarioSpec& s : c.scenarios) scenarios.push_back(to_json(s));
  return {
      {"seed", c.seed},
      {"uav",
       {{"mass", c.uav.mass},
        {"drag_coeff", c.uav.drag_coeff},
        {"cross_section", c.uav.cross_section},
        {"air_density", c.uav.air_density},
        {"gravity_accel", c.uav.gravity_accel}}},
      {"sim",
       {{"dt", c.sim.dt},
        {"total_time", c.sim.total_time},
        {"initial_position", vec_json(c.sim.initial_position)},
        {"initial_velocity", vec_json(c.sim.initial_velocity)},
        {"initial_altitude_offset", c.sim.initial_altitude_offset},
        {"relative_velocity_sign", c.sim.relative_velocity_sign}}},
      {"clustering",
       {{"metric", c.metric.name()},
        {"gamma", c.metric.gamma},
        {"n_init", c.kmeans.n_init},
        {"max_iters", c.kmeans.max_iters},
        {"barycenter_iters", c.kmeans.barycenter_iters}}},
      {"search",
       {{"n_loops", c.search.n_loops},
        {"n_changes", c.search.n_changes},
        {"max_magnitude", c.search.max_magnitude},
        {"direction_mode", c.search.direction_mode == DirectionMode::axis_aligned ? "axis_aligned" : "unit_sphere"}}},
      {"cem",
       {{"n_samples", c.cem.n_samples},
        {"n_elite", c.cem.n_elite},
        {"max_iterations", c.cem.max_iterations},
        {"stall_patience", c.cem.stall_patience},
        {"min_sigma", c.cem.min_sigma},
        {"n_changes", c.cem.n_changes},
        {"max_magnitude", c.cem.max_magnitude},
        {"mu_mag", c.cem.init_mu_mag},
        {"sigma_mag", c.cem.init_sigma_mag},
        {"mu_dir", vec_json(c.cem.init_mu_dir)},
        {"sigma_dir", vec_json(c.cem.init_sigma_dir)}}},
      {"speed_classes", {{"light", {c.light.lo, c.light.hi}}, {"strong", {c.strong.lo, c.strong.hi}}}},
      {"scenarios", scenarios},
      {"sweep_scenarios", c.sweep_scenarios},
      {"direction_scenario", to_json(c.direction)},
      {"cem_scenario", to_json(c.cem_scenario)},
      {"simulate", {{"schedule", to_json(c.schedule)}, {"wind", to_json(c.wind)}}},
  };
}

ExperimentSettings settings_from(const RunConfig& c, std::size_t jobs) {
  ExperimentSettings s;
  s.seed = c.seed;
  s.eval.uav = c.uav;
  s.eval.sim = c.sim;
  s.eval.metric = c.metric;
  s.eval.kmeans = c.kmeans;
  s.eval.jobs = jobs;
  s.search = c.search;
  s.cem = c.cem;
  return s;
}

const ScenarioSpec& find_scenario(const RunConfig& c, const std::string& name) {
  for (const ScenarioSpec& s : c.scenarios)
    if (s.name == name) return s;
  throw ConfigError("scenarios", "unknown scenario '" + name + "'");
}

}  // namespace ccwind
