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

#ifndef PIPC_SCENARIO_H_
#define PIPC_SCENARIO_H_

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "pipc/benchmark.h"
#include "pipc/simulator.h"

namespace pipc {

// A scenario file: one trial configuration and an optional benchmark grid.
struct Scenario {
  SimConfig config;
  std::optional<BenchmarkGrid> grid;
};

// Keys missing from the document keep their defaults; unknown keys and
// wrongly typed values throw ConfigError.
Scenario ScenarioFromJson(const nlohmann::json& doc);
Scenario LoadScenario(const std::string& path);

nlohmann::json ToJson(const SimConfig& config);
nlohmann::json ToJson(const BenchmarkGrid& grid);

}  // namespace pipc

#endif  // PIPC_SCENARIO_H_
