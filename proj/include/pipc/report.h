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

#ifndef PIPC_REPORT_H_
#define PIPC_REPORT_H_

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pipc/benchmark.h"
#include "pipc/simulator.h"

namespace pipc {

// Fixed "%.9g" formatting so identical runs give byte-identical files.
std::string FormatNumber(double value);

// t, true (p, v, u), estimated (p, v, u); one row per control period.
void WriteTrajectoryCsv(std::ostream& out, const TrialResult& result);
// t, id, cx, cy, half_extent at every support time.
void WriteObstaclesCsv(std::ostream& out, const TrialResult& result,
                       double half_extent);
// replan, t, px, py for every recorded horizon mean.
void WriteHorizonsCsv(std::ostream& out, const TrialResult& result);

nlohmann::json TrialJson(const SimConfig& config, const TrialResult& result);

// One row per cell: mode, Q_x, N_obs, success_rate, mean/std of time,
// length and cost, K_success.
void WriteAggregateCsv(std::ostream& out,
                       const std::vector<CellAggregate>& cells);
void WriteTrialsCsv(std::ostream& out, const std::vector<TrialRecord>& trials);
nlohmann::json AggregateJson(const BenchmarkGrid& grid,
                             const std::vector<CellAggregate>& cells);

}  // namespace pipc

#endif  // PIPC_REPORT_H_
