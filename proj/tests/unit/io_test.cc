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

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "pipc/errors.h"
#include "pipc/render.h"
#include "pipc/report.h"
#include "pipc/scenario.h"

namespace pipc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pipc_io_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST_CASE("scenario documents round-trip") {
  SimConfig c;
  c.mode = ControlMode::kPomdpOl;
  c.seed = 99;
  c.qx = 0.07;
  c.num_obstacles = 33;
  c.goal = Eigen::Vector2d(25, 12);
  c.factors.sigma_obs = 0.05;
  c.horizon.n_ip = 10;
  c.horizon.control_dt = 0.02;
  c.optimizer.max_iters = 7;
  c.arena.max_speed = 1.1;
  BenchmarkGrid g;
  g.modes = {ControlMode::kMdpOl};
  g.obstacle_counts = {5, 15};
  g.trials = 3;
  json doc = ToJson(c);
  doc["benchmark"] = ToJson(g);
  const Scenario s = ScenarioFromJson(doc);
  CHECK(ToJson(s.config) == ToJson(c));
  REQUIRE(s.grid.has_value());
  CHECK(ToJson(*s.grid) == ToJson(g));
  CHECK(s.config.horizon.ControlDt() == 0.02);
}

TEST_CASE("missing keys keep defaults") {
  const Scenario s = ScenarioFromJson(json::parse(R"({"seed": 4})"));
  CHECK(s.config.seed == 4);
  CHECK(s.config.horizon.support_dt == 0.2);
  CHECK(s.config.factors.sigma_goal == 1.0);
  CHECK_FALSE(s.grid.has_value());
}

TEST_CASE("unknown keys and bad values are configuration errors") {
  CHECK_THROWS_AS(ScenarioFromJson(json::parse(R"({"sede": 4})")),
                  ConfigError);
  CHECK_THROWS_AS(
      ScenarioFromJson(json::parse(R"({"factors": {"sigma_q": 1}})")),
      ConfigError);
  CHECK_THROWS_AS(ScenarioFromJson(json::parse(R"({"mode": "mdp"})")),
                  ConfigError);
  CHECK_THROWS_AS(ScenarioFromJson(json::parse(R"({"N_obs": "ten"})")),
                  ConfigError);
  CHECK_THROWS_AS(ScenarioFromJson(json::parse(R"({"start": [1]})")),
                  ConfigError);
  CHECK_THROWS_AS(ScenarioFromJson(json::parse("[1, 2]")), ConfigError);
  CHECK_THROWS_AS(LoadScenario("/nonexistent/scenario.json"), ConfigError);
  const fs::path dir = TempDir("bad");
  std::ofstream(dir / "broken.json") << "{ \"seed\": ";
  CHECK_THROWS_AS(LoadScenario((dir / "broken.json").string()), ConfigError);
}

TEST_CASE("numbers are written with a fixed format") {
  CHECK(FormatNumber(0.1) == "0.1");
  CHECK(FormatNumber(1.0 / 3.0) == "0.333333333");
  CHECK(FormatNumber(26.0) == "26");
  CHECK(FormatNumber(std::nan("")) == "nan");
}

TrialResult SmallTrial() {
  SimConfig c;
  c.num_obstacles = 3;
  c.horizon.t_max = 0.6;
  c.record_horizons = true;
  return RunTrial(c);
}

TEST_CASE("trial files are written and read back") {
  const TrialResult r = SmallTrial();
  const fs::path dir = TempDir("trial");
  {
    std::ofstream t(dir / "trajectory.csv"), o(dir / "obstacles.csv"),
        h(dir / "horizons.csv");
    WriteTrajectoryCsv(t, r);
    WriteObstaclesCsv(o, r, 0.5);
    WriteHorizonsCsv(h, r);
  }
  const TrajectoryTable traj = ReadTrajectoryCsv((dir / "trajectory.csv").string());
  REQUIRE(traj.time.size() == r.samples.size());
  for (std::size_t i = 0; i < traj.time.size(); i += 7) {
    CHECK(traj.time[i] == doctest::Approx(r.samples[i].time));
    CHECK((traj.position[i] - r.samples[i].xi.head<2>()).norm() < 1e-7);
  }
  double half = 0;
  const auto frames = ReadObstaclesCsv((dir / "obstacles.csv").string(), &half);
  CHECK(half == 0.5);
  REQUIRE(frames.size() == r.obstacles.size());
  CHECK(frames.back().centers.size() == 3);
  const auto horizons = ReadHorizonsCsv((dir / "horizons.csv").string());
  REQUIRE(horizons.size() == r.horizons.size());
  CHECK(horizons.front().positions.size() == 11);
  const auto picked = SelectFrames(frames, {0.0, 0.21, 0.19, 10.0});
  REQUIRE(picked.size() == 3);
  CHECK(picked[0].time == 0.0);
  CHECK(picked[1].time == doctest::Approx(0.2));
  CHECK(picked[2].time == doctest::Approx(0.6));
  CHECK_THROWS_AS(ReadTrajectoryCsv((dir / "missing.csv").string()),
                  ConfigError);
  std::ofstream(dir / "bad.csv") << "t,px,py\n0,1\n";
  CHECK_THROWS_AS(ReadTrajectoryCsv((dir / "bad.csv").string()), ConfigError);
}

TEST_CASE("trial summaries carry the outcome and settings") {
  SimConfig c;
  c.num_obstacles = 3;
  c.horizon.t_max = 0.6;
  const TrialResult r = RunTrial(c);
  const json j = TrialJson(c, r);
  CHECK(j["outcome"] == "timeout");
  CHECK(j["time_to_goal"].get<double>() == doctest::Approx(0.6));
  CHECK(j.contains("config"));
}

std::vector<double> Numbers(const std::string& s) {
  std::vector<double> out;
  std::string spaced = s;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

TEST_CASE("rendered coordinates map back to arena positions") {
  RenderScene scene;
  scene.path = {Eigen::Vector2d(2, 10), Eigen::Vector2d(3.337, 11.25),
                Eigen::Vector2d(7.8125, 4.4)};
  scene.obstacle_frames = {{0.0, {Eigen::Vector2d(10, 5)}},
                           {1.0, {Eigen::Vector2d(12.2, 6.3)}}};
  scene.horizon = {Eigen::Vector2d(7.8125, 4.4), Eigen::Vector2d(9, 5)};
  RenderStyle style;
  const std::string svg = RenderSvg(scene, style);
  const double s = style.scale;

  std::smatch m;
  REQUIRE(std::regex_search(svg, m, std::regex(R"re(id="path"[^>]*points="([^"]*)")re")));
  const auto pts = Numbers(m[1]);
  REQUIRE(pts.size() == 6);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(pts[2 * i] / s - scene.path[i].x()) < 0.01);
    CHECK(std::abs(scene.height - pts[2 * i + 1] / s - scene.path[i].y()) < 0.01);
  }
  REQUIRE(std::regex_search(
      svg, m, std::regex(R"re(id="robot" cx="([^"]*)" cy="([^"]*)")re")));
  CHECK(std::abs(std::stod(m[1]) / s - 7.8125) < 0.01);
  CHECK(std::abs(scene.height - std::stod(m[2]) / s - 4.4) < 0.01);
  REQUIRE(std::regex_search(
      svg, m, std::regex(R"re(id="goal" cx="([^"]*)" cy="([^"]*)")re")));
  CHECK(std::abs(std::stod(m[1]) / s - 28) < 0.01);
  CHECK(std::abs(scene.height - std::stod(m[2]) / s - 10) < 0.01);
  // Obstacle squares: top-left corner in pixels.
  REQUIRE(std::regex_search(
      svg, m, std::regex(R"re(data-t="1.000"[^>]*>\s*<rect x="([^"]*)" y="([^"]*)")re")));
  CHECK(std::abs(std::stod(m[1]) / s - 11.7) < 0.01);
  CHECK(std::abs(scene.height - std::stod(m[2]) / s - 6.8) < 0.01);
  CHECK(svg.find(style.path) != std::string::npos);
  CHECK(svg.find("id=\"horizon\"") != std::string::npos);
}

}  // namespace
}  // namespace pipc
