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

#ifndef PIPC_RENDER_H_
#define PIPC_RENDER_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pipc/simulator.h"

namespace pipc {

struct RenderStyle {
  double scale = 20.0;  // pixels per metre
  std::string background = "#ffffff";
  std::string border = "#000000";
  std::string obstacle = "#808080";
  std::string path = "#00a000";
  std::string horizon = "#000000";
  std::string robot = "#0000ff";
  std::string goal = "#ff0000";
};

struct RenderScene {
  double width = 30.0;
  double height = 20.0;
  double robot_radius = 0.5;
  double half_extent = 0.5;
  Eigen::Vector2d goal = Eigen::Vector2d(28.0, 10.0);
  std::vector<Eigen::Vector2d> path;
  std::vector<ObstacleSnapshot> obstacle_frames;
  std::vector<Eigen::Vector2d> horizon;
};

// Static SVG: arena, obstacle squares for every frame (older frames
// fainter), executed path, horizon preview, robot at the end of the path
// and the goal. The y axis points up in arena coordinates.
std::string RenderSvg(const RenderScene& scene, const RenderStyle& style = {});

// Readers for the files written by the report module. Throw ConfigError on
// missing files or malformed rows.
struct TrajectoryTable {
  std::vector<double> time;
  std::vector<Eigen::Vector2d> position;
};
TrajectoryTable ReadTrajectoryCsv(const std::string& path);
std::vector<ObstacleSnapshot> ReadObstaclesCsv(const std::string& path,
                                               double* half_extent = nullptr);
std::vector<HorizonPreview> ReadHorizonsCsv(const std::string& path);

// Frames whose times are closest to each requested time, in order and
// without duplicates.
std::vector<ObstacleSnapshot> SelectFrames(
    const std::vector<ObstacleSnapshot>& frames,
    const std::vector<double>& times);

}  // namespace pipc

#endif  // PIPC_RENDER_H_
