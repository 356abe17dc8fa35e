// Copyright 2026 The PIPC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pipc/scenario.h"

#include <fstream>
#include <set>

#include "pipc/errors.h"

namespace pipc {

using nlohmann::json;

namespace {

void CheckKeys(const json& obj, const std::string& where,
               const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

template <typename T>
void Read(const json& obj, const char* key, const std::string& where,
          T* out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    *out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

Eigen::Vector2d ReadPoint(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
      !v[1].is_number()) {
    throw ConfigError(where + ": expected [x, y]");
  }
  return Eigen::Vector2d(v[0].get<double>(), v[1].get<double>());
}

json Point(const Eigen::Vector2d& p) { return json::array({p.x(), p.y()}); }

void ReadFactors(const json& obj, FactorParams* f) {
  const std::string w = "factors";
  CheckKeys(obj, w,
            {"sigma_g", "sigma_fix", "sigma_obs", "sigma_m", "eps", "Q_u",
             "goal_floor"});
  Read(obj, "sigma_g", w, &f->sigma_goal);
  Read(obj, "sigma_fix", w, &f->sigma_fix);
  Read(obj, "sigma_obs", w, &f->sigma_obs);
  Read(obj, "sigma_m", w, &f->sigma_meas);
  Read(obj, "eps", w, &f->eps);
  Read(obj, "Q_u", w, &f->qu);
  Read(obj, "goal_floor", w, &f->goal_floor);
}

void ReadHorizon(const json& obj, HorizonConfig* h) {
  const std::string w = "horizon";
  CheckKeys(obj, w, {"t_h", "dt", "n_ip", "t_max", "gdist", "control_dt"});
  Read(obj, "t_h", w, &h->horizon);
  Read(obj, "dt", w, &h->support_dt);
  Read(obj, "n_ip", w, &h->n_ip);
  Read(obj, "t_max", w, &h->t_max);
  Read(obj, "gdist", w, &h->goal_dist);
  if (obj.contains("control_dt")) {
    double v = 0.0;
    Read(obj, "control_dt", w, &v);
    h->control_dt = v;
  }
}

void ReadOptimizer(const json& obj, OptimizerConfig* o) {
  const std::string w = "optimizer";
  CheckKeys(obj, w,
            {"max_iters", "initial_damping", "damping_up", "damping_down",
             "max_damping", "abs_cost_tol", "rel_cost_tol", "min_step_norm"});
  Read(obj, "max_iters", w, &o->max_iters);
  Read(obj, "initial_damping", w, &o->initial_damping);
  Read(obj, "damping_up", w, &o->damping_up);
  Read(obj, "damping_down", w, &o->damping_down);
  Read(obj, "max_damping", w, &o->max_damping);
  Read(obj, "abs_cost_tol", w, &o->abs_cost_tol);
  Read(obj, "rel_cost_tol", w, &o->rel_cost_tol);
  Read(obj, "min_step_norm", w, &o->min_step_norm);
}

void ReadArena(const json& obj, Environment2D* a) {
  const std::string w = "arena";
  CheckKeys(obj, w,
            {"width", "height", "robot_radius", "sensor_half_width",
             "max_speed", "max_accel"});
  Read(obj, "width", w, &a->width);
  Read(obj, "height", w, &a->height);
  Read(obj, "robot_radius", w, &a->robot_radius);
  Read(obj, "sensor_half_width", w, &a->sensor_half_width);
  Read(obj, "max_speed", w, &a->max_speed);
  Read(obj, "max_accel", w, &a->max_accel);
}

std::vector<Obstacle> ReadObstacles(const json& arr) {
  if (!arr.is_array()) throw ConfigError("obstacles: expected an array");
  std::vector<Obstacle> out;
  for (size_t i = 0; i < arr.size(); ++i) {
    const std::string w = "obstacles[" + std::to_string(i) + "]";
    CheckKeys(arr[i], w, {"center", "velocity", "half_extent"});
    Obstacle o;
    if (!arr[i].contains("center")) throw ConfigError(w + ": missing center");
    o.center = ReadPoint(arr[i]["center"], w + ".center");
    if (arr[i].contains("velocity")) {
      o.velocity = ReadPoint(arr[i]["velocity"], w + ".velocity");
    }
    Read(arr[i], "half_extent", w, &o.half_extent);
    if (!(o.half_extent > 0)) throw ConfigError(w + ": half_extent <= 0");
    out.push_back(o);
  }
  return out;
}

BenchmarkGrid ReadGrid(const json& obj) {
  const std::string w = "benchmark";
  CheckKeys(obj, w, {"modes", "Q_x", "N_obs", "K", "base_seed"});
  BenchmarkGrid g;
  if (obj.contains("modes")) {
    std::vector<std::string> names;
    Read(obj, "modes", w, &names);
    g.modes.clear();
    for (const auto& n : names) g.modes.push_back(ParseControlMode(n));
  }
  Read(obj, "Q_x", w, &g.qx_values);
  Read(obj, "N_obs", w, &g.obstacle_counts);
  Read(obj, "K", w, &g.trials);
  Read(obj, "base_seed", w, &g.base_seed);
  g.Validate();
  return g;
}

}  // namespace

Scenario ScenarioFromJson(const json& doc) {
  CheckKeys(doc, "scenario",
            {"mode", "seed", "Q_x", "N_obs", "start", "goal", "factors",
             "horizon", "optimizer", "arena", "obstacles", "start_exclusion",
             "sdf_cell_size", "record_horizons", "benchmark"});
  Scenario s;
  SimConfig& c = s.config;
  const std::string w = "scenario";
  if (doc.contains("mode")) {
    std::string mode;
    Read(doc, "mode", w, &mode);
    c.mode = ParseControlMode(mode);
  }
  Read(doc, "seed", w, &c.seed);
  Read(doc, "Q_x", w, &c.qx);
  Read(doc, "N_obs", w, &c.num_obstacles);
  if (doc.contains("start")) c.start = ReadPoint(doc["start"], "start");
  if (doc.contains("goal")) c.goal = ReadPoint(doc["goal"], "goal");
  if (doc.contains("factors")) ReadFactors(doc["factors"], &c.factors);
  if (doc.contains("horizon")) ReadHorizon(doc["horizon"], &c.horizon);
  if (doc.contains("optimizer")) ReadOptimizer(doc["optimizer"], &c.optimizer);
  if (doc.contains("arena")) ReadArena(doc["arena"], &c.arena);
  if (doc.contains("obstacles")) {
    c.initial_obstacles = ReadObstacles(doc["obstacles"]);
    c.num_obstacles = static_cast<int>(c.initial_obstacles->size());
  }
  Read(doc, "start_exclusion", w, &c.start_exclusion);
  Read(doc, "sdf_cell_size", w, &c.sdf_cell_size);
  Read(doc, "record_horizons", w, &c.record_horizons);
  c.factors.qx = c.qx;
  if (doc.contains("benchmark")) s.grid = ReadGrid(doc["benchmark"]);
  return s;
}

Scenario LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return ScenarioFromJson(doc);
}

json ToJson(const SimConfig& c) {
  json doc;
  doc["mode"] = ControlModeName(c.mode);
  doc["seed"] = c.seed;
  doc["Q_x"] = c.qx;
  doc["N_obs"] = c.num_obstacles;
  doc["start"] = Point(c.start);
  doc["goal"] = Point(c.goal);
  doc["factors"] = {{"sigma_g", c.factors.sigma_goal},
                    {"sigma_fix", c.factors.sigma_fix},
                    {"sigma_obs", c.factors.sigma_obs},
                    {"sigma_m", c.factors.sigma_meas},
                    {"eps", c.factors.eps},
                    {"Q_u", c.factors.qu},
                    {"goal_floor", c.factors.goal_floor}};
  doc["horizon"] = {{"t_h", c.horizon.horizon},
                    {"dt", c.horizon.support_dt},
                    {"n_ip", c.horizon.n_ip},
                    {"t_max", c.horizon.t_max},
                    {"gdist", c.horizon.goal_dist}};
  if (c.horizon.control_dt) {
    doc["horizon"]["control_dt"] = *c.horizon.control_dt;
  }
  doc["optimizer"] = {{"max_iters", c.optimizer.max_iters},
                      {"initial_damping", c.optimizer.initial_damping},
                      {"damping_up", c.optimizer.damping_up},
                      {"damping_down", c.optimizer.damping_down},
                      {"max_damping", c.optimizer.max_damping},
                      {"abs_cost_tol", c.optimizer.abs_cost_tol},
                      {"rel_cost_tol", c.optimizer.rel_cost_tol},
                      {"min_step_norm", c.optimizer.min_step_norm}};
  doc["arena"] = {{"width", c.arena.width},
                  {"height", c.arena.height},
                  {"robot_radius", c.arena.robot_radius},
                  {"sensor_half_width", c.arena.sensor_half_width},
                  {"max_speed", c.arena.max_speed},
                  {"max_accel", c.arena.max_accel}};
  if (c.initial_obstacles) {
    json arr = json::array();
    for (const auto& o : *c.initial_obstacles) {
      arr.push_back({{"center", Point(o.center)},
                     {"velocity", Point(o.velocity)},
                     {"half_extent", o.half_extent}});
    }
    doc["obstacles"] = arr;
  }
  doc["start_exclusion"] = c.start_exclusion;
  doc["sdf_cell_size"] = c.sdf_cell_size;
  doc["record_horizons"] = c.record_horizons;
  return doc;
}

json ToJson(const BenchmarkGrid& g) {
  json modes = json::array();
  for (ControlMode m : g.modes) modes.push_back(ControlModeName(m));
  return {{"modes", modes},
          {"Q_x", g.qx_values},
          {"N_obs", g.obstacle_counts},
          {"K", g.trials},
          {"base_seed", g.base_seed}};
}

}  // namespace pipc
