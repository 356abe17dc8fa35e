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

#ifndef PIPC_BENCHMARK_H_
#define PIPC_BENCHMARK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pipc/simulator.h"

namespace pipc {

// Cartesian grid of benchmark cells. Every cell runs `trials` trials with
// seeds base_seed + k, shared by all modes.
struct BenchmarkGrid {
  std::vector<ControlMode> modes = {ControlMode::kMdpCl, ControlMode::kMdpOl,
                                    ControlMode::kPomdpCl,
                                    ControlMode::kPomdpOl};
  std::vector<double> qx_values = {0.01, 0.04, 0.07};
  std::vector<int> obstacle_counts = {10, 20, 30, 40, 50};
  int trials = 40;
  std::uint64_t base_seed = 1;

  std::size_t NumCells() const {
    return modes.size() * qx_values.size() * obstacle_counts.size();
  }
  void Validate() const;
};

struct TrialRecord {
  ControlMode mode;
  double qx;
  int num_obstacles;
  int trial;
  std::uint64_t seed;
  Outcome outcome;
  double time_to_goal;
  double path_length;
  double path_cost;
  int replans;
  std::string diagnostic;
};

// Statistics of one cell. Means and sample standard deviations are over
// successful trials only; they are NaN when there are none (std needs two).
struct CellAggregate {
  ControlMode mode;
  double qx;
  int num_obstacles;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  double mean_time, std_time;
  double mean_length, std_length;
  double mean_cost, std_cost;
};

struct BenchmarkResult {
  std::vector<TrialRecord> trials;  // cell-major, then trial index
  std::vector<CellAggregate> cells;
  const CellAggregate* Find(ControlMode mode, double qx,
                            int num_obstacles) const;
};

using ProgressCallback = std::function<void(std::size_t done,
                                            std::size_t total)>;

// Runs every cell of the grid on `jobs` worker threads. The base config
// supplies everything but mode, qx, num_obstacles and seed. Results do not
// depend on `jobs`.
BenchmarkResult RunBenchmark(const SimConfig& base, const BenchmarkGrid& grid,
                             int jobs = 1,
                             const ProgressCallback& progress = {});

std::vector<CellAggregate> Aggregate(const std::vector<TrialRecord>& trials);

}  // namespace pipc

#endif  // PIPC_BENCHMARK_H_
