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

#include "pipc/benchmark.h"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "pipc/errors.h"

namespace pipc {

void BenchmarkGrid::Validate() const {
  if (modes.empty() || qx_values.empty() || obstacle_counts.empty()) {
    throw ConfigError("benchmark grid has an empty axis");
  }
  if (trials < 1) throw ConfigError("benchmark trials must be >= 1");
  for (double q : qx_values) {
    if (!(q >= 0)) throw ConfigError("benchmark Q_x values must be >= 0");
  }
  for (int n : obstacle_counts) {
    if (n < 0) throw ConfigError("benchmark N_obs values must be >= 0");
  }
}

const CellAggregate* BenchmarkResult::Find(ControlMode mode, double qx,
                                           int num_obstacles) const {
  for (const auto& c : cells) {
    if (c.mode == mode && c.num_obstacles == num_obstacles &&
        std::abs(c.qx - qx) < 1e-12) {
      return &c;
    }
  }
  return nullptr;
}

namespace {

struct MeanStd {
  double mean;
  double std;
};

MeanStd Moments(const std::vector<double>& x) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (x.empty()) return {nan, nan};
  double sum = 0.0;
  for (double v : x) sum += v;
  const double mean = sum / x.size();
  if (x.size() < 2) return {mean, nan};
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (x.size() - 1))};
}

bool SameCell(const TrialRecord& a, const CellAggregate& c) {
  return a.mode == c.mode && a.num_obstacles == c.num_obstacles &&
         a.qx == c.qx;
}

}  // namespace

std::vector<CellAggregate> Aggregate(const std::vector<TrialRecord>& trials) {
  std::vector<CellAggregate> cells;
  std::vector<std::vector<const TrialRecord*>> members;
  for (const auto& t : trials) {
    size_t i = 0;
    while (i < cells.size() && !SameCell(t, cells[i])) ++i;
    if (i == cells.size()) {
      CellAggregate c{};
      c.mode = t.mode;
      c.qx = t.qx;
      c.num_obstacles = t.num_obstacles;
      cells.push_back(c);
      members.emplace_back();
    }
    members[i].push_back(&t);
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    std::vector<double> time, length, cost;
    for (const TrialRecord* t : members[i]) {
      if (t->outcome != Outcome::kSuccess) continue;
      time.push_back(t->time_to_goal);
      length.push_back(t->path_length);
      cost.push_back(t->path_cost);
    }
    CellAggregate& c = cells[i];
    c.trials = static_cast<int>(members[i].size());
    c.successes = static_cast<int>(time.size());
    c.success_rate = static_cast<double>(c.successes) / c.trials;
    const MeanStd mt = Moments(time), ml = Moments(length),
                  mc = Moments(cost);
    c.mean_time = mt.mean;
    c.std_time = mt.std;
    c.mean_length = ml.mean;
    c.std_length = ml.std;
    c.mean_cost = mc.mean;
    c.std_cost = mc.std;
  }
  return cells;
}

BenchmarkResult RunBenchmark(const SimConfig& base, const BenchmarkGrid& grid,
                             int jobs, const ProgressCallback& progress) {
  grid.Validate();
  if (jobs < 1) throw ConfigError("jobs must be >= 1");

  std::vector<TrialRecord> records;
  for (ControlMode mode : grid.modes) {
    for (double qx : grid.qx_values) {
      for (int n : grid.obstacle_counts) {
        for (int k = 0; k < grid.trials; ++k) {
          TrialRecord r{};
          r.mode = mode;
          r.qx = qx;
          r.num_obstacles = n;
          r.trial = k;
          r.seed = grid.base_seed + static_cast<std::uint64_t>(k);
          records.push_back(r);
        }
      }
    }
  }

  std::atomic<size_t> next{0};
  std::atomic<size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (size_t i = next++; i < records.size(); i = next++) {
      TrialRecord& r = records[i];
      SimConfig config = base;
      config.mode = r.mode;
      config.qx = r.qx;
      config.num_obstacles = r.num_obstacles;
      config.seed = r.seed;
      config.initial_obstacles.reset();
      config.record_horizons = false;
      const TrialResult result = RunTrial(config);
      r.outcome = result.outcome;
      r.time_to_goal = result.time_to_goal;
      r.path_length = result.path_length;
      r.path_cost = result.path_cost;
      r.replans = result.replans;
      r.diagnostic = result.diagnostic;
      const size_t finished = ++done;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(finished, records.size());
      }
    }
  };
  const int workers =
      static_cast<int>(std::min<size_t>(jobs, records.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BenchmarkResult result;
  result.cells = Aggregate(records);
  result.trials = std::move(records);
  return result;
}

}  // namespace pipc
