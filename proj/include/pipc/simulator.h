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

#ifndef PIPC_SIMULATOR_H_
#define PIPC_SIMULATOR_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pipc/environment.h"
#include "pipc/factor_graph.h"
#include "pipc/gp_model.h"
#include "pipc/planner.h"

namespace pipc {

enum class ControlMode { kMdpCl, kMdpOl, kPomdpCl, kPomdpOl };

const char* ControlModeName(ControlMode mode);  // "mdp-cl", ...
// Throws ConfigError for unknown names.
ControlMode ParseControlMode(const std::string& name);
Observability ObservabilityOf(ControlMode mode);
bool IsClosedLoop(ControlMode mode);

struct SimConfig {
  ControlMode mode = ControlMode::kMdpCl;
  std::uint64_t seed = 1;
  double qx = 0.01;
  int num_obstacles = 10;
  Eigen::Vector2d start = Eigen::Vector2d(2.0, 10.0);
  Eigen::Vector2d goal = Eigen::Vector2d(28.0, 10.0);
  FactorParams factors;
  HorizonConfig horizon;
  OptimizerConfig optimizer;
  Environment2D arena;  // geometry; obstacles are placed from the seed
  // Explicit initial obstacles; overrides random placement when set.
  std::optional<std::vector<Obstacle>> initial_obstacles;
  double start_exclusion = 2.0;  // m
  double sdf_cell_size = 0.05;   // m
  bool record_horizons = false;

  // Model with qx folded into the factor parameters.
  LinearSdeModel Model() const;
  // Checks every setting, including that a planner can be built.
  void Validate() const;
};

// Ground-truth augmented state (x, u held over the last period).
struct SystemState {
  Eigen::VectorXd xi;
  double time = 0.0;
};

enum class Outcome { kSuccess, kCollision, kTimeout, kFailure };
const char* OutcomeName(Outcome outcome);

struct TrajectorySample {
  double time;
  Eigen::VectorXd xi;        // true (p, v, u)
  Eigen::VectorXd estimate;  // state-belief mean
};

struct ObstacleSnapshot {
  double time;
  std::vector<Eigen::Vector2d> centers;
};

struct HorizonPreview {
  double time;
  std::vector<Eigen::Vector2d> positions;
};

struct TrialResult {
  Outcome outcome = Outcome::kFailure;
  double time_to_goal = 0.0;  // end time of the trial, s
  double path_length = 0.0;   // m
  double path_cost = 0.0;
  int replans = 0;
  int nonconverged_replans = 0;
  std::string diagnostic;
  std::vector<TrajectorySample> samples;
  std::vector<ObstacleSnapshot> obstacles;  // at every support time
  std::vector<HorizonPreview> horizons;     // when record_horizons
};

// Exact zero-order-hold step of the double integrator plus sampled process
// noise.
class SystemIntegrator {
 public:
  SystemIntegrator(const LinearSdeModel& model, double dt);

  const DiscreteStateDynamics& dynamics() const { return dynamics_; }
  SystemState Step(const SystemState& state, const Eigen::VectorXd& u,
                   std::mt19937_64& rng) const;

 private:
  int dof_;
  double dt_;
  DiscreteStateDynamics dynamics_;
  Eigen::MatrixXd noise_sqrt_;
};

SystemState IntegrateSystem(const SystemState& state, const Eigen::VectorXd& u,
                            const LinearSdeModel& model, double dt,
                            std::mt19937_64& rng);

// POMDP: z = x + v, v ~ N(0, Q_v). MDP: z = x.
Eigen::VectorXd Observe(const SystemState& state, const LinearSdeModel& model,
                        Observability mode, std::mt19937_64& rng);

// Independent random stream `stream` derived from a trial seed.
std::mt19937_64 MakeStream(std::uint64_t seed, std::uint64_t stream);

// Receding-horizon trial. Never throws for planner failures; those are
// recorded as Outcome::kFailure with a diagnostic.
TrialResult RunTrial(const SimConfig& config);

// Post-hoc cost of an executed trajectory: GP, goal and obstacle factors on
// the executed support states.
double PathCost(const SimConfig& config,
                const std::vector<TrajectorySample>& supports,
                const std::vector<ObstacleSnapshot>& obstacles);

}  // namespace pipc

#endif  // PIPC_SIMULATOR_H_
