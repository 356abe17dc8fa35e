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

#include "pipc/render.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "pipc/errors.h"

namespace pipc {

namespace {

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

class Canvas {
 public:
  Canvas(const RenderScene& scene, const RenderStyle& style)
      : scene_(scene), style_(style) {}

  std::string X(double x) const { return Fmt(x * style_.scale); }
  std::string Y(double y) const {
    return Fmt((scene_.height - y) * style_.scale);
  }
  std::string L(double len) const { return Fmt(len * style_.scale); }

  std::string Points(const std::vector<Eigen::Vector2d>& pts) const {
    std::string s;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i) s += ' ';
      s += X(pts[i].x()) + ',' + Y(pts[i].y());
    }
    return s;
  }

 private:
  const RenderScene& scene_;
  const RenderStyle& style_;
};

// Minimal CSV reader keyed by header names.
class CsvTable {
 public:
  explicit CsvTable(const std::string& path) : path_(path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("'" + path + "' is empty");
    const auto names = Split(line);
    for (size_t i = 0; i < names.size(); ++i) columns_[names[i]] = i;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto cells = Split(line);
      if (cells.size() != names.size()) {
        throw ConfigError("'" + path + "': row with " +
                          std::to_string(cells.size()) + " fields, expected " +
                          std::to_string(names.size()));
      }
      rows_.push_back(std::move(cells));
    }
  }

  size_t size() const { return rows_.size(); }

  double Get(size_t row, const std::string& column) const {
    auto it = columns_.find(column);
    if (it == columns_.end()) {
      throw ConfigError("'" + path_ + "': missing column '" + column + "'");
    }
    try {
      return std::stod(rows_[row][it->second]);
    } catch (const std::exception&) {
      throw ConfigError("'" + path_ + "': bad number '" +
                        rows_[row][it->second] + "'");
    }
  }

  bool Has(const std::string& column) const { return columns_.count(column); }

 private:
  static std::vector<std::string> Split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  }

  std::string path_;
  std::map<std::string, size_t> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace

std::string RenderSvg(const RenderScene& scene, const RenderStyle& style) {
  const Canvas c(scene, style);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << c.L(scene.width) << "\" height=\"" << c.L(scene.height)
      << "\" viewBox=\"0 0 " << c.L(scene.width) << ' ' << c.L(scene.height)
      << "\" data-scale=\"" << Fmt(style.scale) << "\">\n";
  svg << "  <rect id=\"arena\" x=\"0\" y=\"0\" width=\"" << c.L(scene.width)
      << "\" height=\"" << c.L(scene.height) << "\" fill=\""
      << style.background << "\" stroke=\"" << style.border
      << "\" stroke-width=\"2\"/>\n";

  const size_t frames = scene.obstacle_frames.size();
  for (size_t f = 0; f < frames; ++f) {
    const double opacity =
        frames == 1 ? 1.0 : 0.25 + 0.75 * static_cast<double>(f) / (frames - 1);
    const auto& frame = scene.obstacle_frames[f];
    svg << "  <g class=\"obstacles\" data-t=\"" << Fmt(frame.time)
        << "\" fill=\"" << style.obstacle << "\" fill-opacity=\""
        << Fmt(opacity) << "\">\n";
    for (const auto& o : frame.centers) {
      svg << "    <rect x=\"" << c.X(o.x() - scene.half_extent) << "\" y=\""
          << c.Y(o.y() + scene.half_extent) << "\" width=\""
          << c.L(2 * scene.half_extent) << "\" height=\""
          << c.L(2 * scene.half_extent) << "\"/>\n";
    }
    svg << "  </g>\n";
  }

  if (!scene.path.empty()) {
    svg << "  <polyline id=\"path\" fill=\"none\" stroke=\"" << style.path
        << "\" stroke-width=\"2\" points=\"" << c.Points(scene.path)
        << "\"/>\n";
  }
  if (!scene.horizon.empty()) {
    svg << "  <polyline id=\"horizon\" fill=\"none\" stroke=\""
        << style.horizon << "\" stroke-width=\"2\" points=\""
        << c.Points(scene.horizon) << "\"/>\n";
  }
  svg << "  <circle id=\"goal\" cx=\"" << c.X(scene.goal.x()) << "\" cy=\""
      << c.Y(scene.goal.y()) << "\" r=\"" << c.L(scene.robot_radius)
      << "\" fill=\"" << style.goal << "\"/>\n";
  if (!scene.path.empty()) {
    const auto& p = scene.path.back();
    svg << "  <circle id=\"robot\" cx=\"" << c.X(p.x()) << "\" cy=\""
        << c.Y(p.y()) << "\" r=\"" << c.L(scene.robot_radius) << "\" fill=\""
        << style.robot << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

TrajectoryTable ReadTrajectoryCsv(const std::string& path) {
  const CsvTable t(path);
  TrajectoryTable out;
  for (size_t r = 0; r < t.size(); ++r) {
    out.time.push_back(t.Get(r, "t"));
    out.position.emplace_back(t.Get(r, "px"), t.Get(r, "py"));
  }
  return out;
}

std::vector<ObstacleSnapshot> ReadObstaclesCsv(const std::string& path,
                                               double* half_extent) {
  const CsvTable t(path);
  std::vector<ObstacleSnapshot> out;
  for (size_t r = 0; r < t.size(); ++r) {
    const double time = t.Get(r, "t");
    if (out.empty() || out.back().time != time) out.push_back({time, {}});
    out.back().centers.emplace_back(t.Get(r, "cx"), t.Get(r, "cy"));
    if (half_extent && t.Has("half_extent")) {
      *half_extent = t.Get(r, "half_extent");
    }
  }
  return out;
}

std::vector<HorizonPreview> ReadHorizonsCsv(const std::string& path) {
  const CsvTable t(path);
  std::vector<HorizonPreview> out;
  int current = -1;
  for (size_t r = 0; r < t.size(); ++r) {
    const int replan = static_cast<int>(t.Get(r, "replan"));
    if (replan != current) {
      out.push_back({t.Get(r, "t"), {}});
      current = replan;
    }
    out.back().positions.emplace_back(t.Get(r, "px"), t.Get(r, "py"));
  }
  return out;
}

std::vector<ObstacleSnapshot> SelectFrames(
    const std::vector<ObstacleSnapshot>& frames,
    const std::vector<double>& times) {
  std::vector<ObstacleSnapshot> out;
  if (frames.empty()) return out;
  int last = -1;
  for (double t : times) {
    int best = 0;
    for (size_t i = 1; i < frames.size(); ++i) {
      if (std::abs(frames[i].time - t) < std::abs(frames[best].time - t)) {
        best = static_cast<int>(i);
      }
    }
    if (best != last) out.push_back(frames[best]);
    last = best;
  }
  return out;
}

}  // namespace pipc
