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

#include "pipc/report.h"

#include <cmath>
#include <cstdio>

#include "pipc/scenario.h"

namespace pipc {

using nlohmann::json;

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value == 0.0 ? 0.0 : value);
  return buf;
}

namespace {

void WriteVector(std::ostream& out, const Eigen::VectorXd& v) {
  for (int i = 0; i < v.size(); ++i) out << ',' << FormatNumber(v(i));
}

// NaN is not representable in JSON; absent statistics become null.
json Number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void WriteTrajectoryCsv(std::ostream& out, const TrialResult& result) {
  out << "t,px,py,vx,vy,ux,uy,est_px,est_py,est_vx,est_vy,est_ux,est_uy\n";
  for (const auto& s : result.samples) {
    out << FormatNumber(s.time);
    WriteVector(out, s.xi);
    WriteVector(out, s.estimate);
    out << '\n';
  }
}

void WriteObstaclesCsv(std::ostream& out, const TrialResult& result,
                       double half_extent) {
  out << "t,id,cx,cy,half_extent\n";
  for (const auto& snap : result.obstacles) {
    for (size_t j = 0; j < snap.centers.size(); ++j) {
      out << FormatNumber(snap.time) << ',' << j << ','
          << FormatNumber(snap.centers[j].x()) << ','
          << FormatNumber(snap.centers[j].y()) << ','
          << FormatNumber(half_extent) << '\n';
    }
  }
}

void WriteHorizonsCsv(std::ostream& out, const TrialResult& result) {
  out << "replan,t,px,py\n";
  for (size_t r = 0; r < result.horizons.size(); ++r) {
    const auto& h = result.horizons[r];
    for (const auto& p : h.positions) {
      out << r << ',' << FormatNumber(h.time) << ',' << FormatNumber(p.x())
          << ',' << FormatNumber(p.y()) << '\n';
    }
  }
}

json TrialJson(const SimConfig& config, const TrialResult& result) {
  json doc;
  doc["outcome"] = OutcomeName(result.outcome);
  doc["time_to_goal"] = result.time_to_goal;
  doc["path_length"] = result.path_length;
  doc["path_cost"] = Number(result.path_cost);
  doc["replans"] = result.replans;
  doc["nonconverged_replans"] = result.nonconverged_replans;
  if (!result.diagnostic.empty()) doc["diagnostic"] = result.diagnostic;
  if (!result.samples.empty()) {
    const auto& last = result.samples.back().xi;
    doc["final_position"] = {last(0), last(1)};
  }
  doc["config"] = ToJson(config);
  return doc;
}

void WriteAggregateCsv(std::ostream& out,
                       const std::vector<CellAggregate>& cells) {
  out << "mode,Q_x,N_obs,success_rate,mean_time,std_time,mean_length,"
         "std_length,mean_cost,std_cost,K_success\n";
  for (const auto& c : cells) {
    out << ControlModeName(c.mode) << ',' << FormatNumber(c.qx) << ','
        << c.num_obstacles << ',' << FormatNumber(c.success_rate) << ','
        << FormatNumber(c.mean_time) << ',' << FormatNumber(c.std_time) << ','
        << FormatNumber(c.mean_length) << ',' << FormatNumber(c.std_length)
        << ',' << FormatNumber(c.mean_cost) << ',' << FormatNumber(c.std_cost)
        << ',' << c.successes << '\n';
  }
}

void WriteTrialsCsv(std::ostream& out, const std::vector<TrialRecord>& trials) {
  out << "mode,Q_x,N_obs,trial,seed,outcome,time_to_goal,path_length,"
         "path_cost,replans\n";
  for (const auto& t : trials) {
    out << ControlModeName(t.mode) << ',' << FormatNumber(t.qx) << ','
        << t.num_obstacles << ',' << t.trial << ',' << t.seed << ','
        << OutcomeName(t.outcome) << ',' << FormatNumber(t.time_to_goal) << ','
        << FormatNumber(t.path_length) << ',' << FormatNumber(t.path_cost)
        << ',' << t.replans << '\n';
  }
}

json AggregateJson(const BenchmarkGrid& grid,
                   const std::vector<CellAggregate>& cells) {
  json rows = json::array();
  for (const auto& c : cells) {
    rows.push_back({{"mode", ControlModeName(c.mode)},
                    {"Q_x", c.qx},
                    {"N_obs", c.num_obstacles},
                    {"K", c.trials},
                    {"K_success", c.successes},
                    {"success_rate", c.success_rate},
                    {"mean_time", Number(c.mean_time)},
                    {"std_time", Number(c.std_time)},
                    {"mean_length", Number(c.mean_length)},
                    {"std_length", Number(c.std_length)},
                    {"mean_cost", Number(c.mean_cost)},
                    {"std_cost", Number(c.std_cost)}});
  }
  return {{"grid", ToJson(grid)}, {"cells", rows}};
}

}  // namespace pipc
