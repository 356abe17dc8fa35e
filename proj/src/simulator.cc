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

#include "pipc/simulator.h"

#include <cmath>
#include <exception>
#include <memory>
#include <utility>

#include "pipc/errors.h"

namespace pipc {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

const char* ControlModeName(ControlMode mode) {
  switch (mode) {
    case ControlMode::kMdpCl:
      return "mdp-cl";
    case ControlMode::kMdpOl:
      return "mdp-ol";
    case ControlMode::kPomdpCl:
      return "pomdp-cl";
    case ControlMode::kPomdpOl:
      return "pomdp-ol";
  }
  return "unknown";
}

ControlMode ParseControlMode(const std::string& name) {
  for (ControlMode m : {ControlMode::kMdpCl, ControlMode::kMdpOl,
                        ControlMode::kPomdpCl, ControlMode::kPomdpOl}) {
    if (name == ControlModeName(m)) return m;
  }
  throw ConfigError("unknown mode '" + name +
                    "' (expected mdp-cl, mdp-ol, pomdp-cl or pomdp-ol)");
}

Observability ObservabilityOf(ControlMode mode) {
  return mode == ControlMode::kMdpCl || mode == ControlMode::kMdpOl
             ? Observability::kMdp
             : Observability::kPomdp;
}

bool IsClosedLoop(ControlMode mode) {
  return mode == ControlMode::kMdpCl || mode == ControlMode::kPomdpCl;
}

const char* OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kSuccess:
      return "success";
    case Outcome::kCollision:
      return "collision";
    case Outcome::kTimeout:
      return "timeout";
    case Outcome::kFailure:
      return "failure";
  }
  return "unknown";
}

LinearSdeModel SimConfig::Model() const {
  return LinearSdeModel::DoubleIntegrator(2, qx, factors.qu,
                                          factors.sigma_meas);
}

namespace {

VectorXd RestState(const Vector2d& p) {
  VectorXd xi = VectorXd::Zero(6);
  xi.head<2>() = p;
  return xi;
}

FactorParams SyncedFactors(const SimConfig& config) {
  FactorParams f = config.factors;
  f.qx = config.qx;
  return f;
}

}  // namespace

void SimConfig::Validate() const {
  if (num_obstacles < 0) throw ConfigError("num_obstacles must be >= 0");
  if (!(arena.width > 0) || !(arena.height > 0) || !(arena.robot_radius > 0) ||
      !(arena.sensor_half_width > 0)) {
    throw ConfigError("arena dimensions must be positive");
  }
  if (!(sdf_cell_size > 0)) throw ConfigError("sdf_cell_size must be > 0");
  if (!(start_exclusion >= 0)) throw ConfigError("start_exclusion must be >= 0");
  if (!start.allFinite() || !goal.allFinite()) {
    throw ConfigError("start/goal must be finite");
  }
  PipcPlanner(Model(), SyncedFactors(*this), horizon, optimizer,
              RestState(start), RestState(goal), arena.robot_radius);
}

std::mt19937_64 MakeStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

SystemIntegrator::SystemIntegrator(const LinearSdeModel& model, double dt)
    : dof_(model.dof), dt_(dt), dynamics_(DiscretizeState(model, dt)) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(dynamics_.noise_cov);
  noise_sqrt_ = eig.eigenvectors() *
                eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

SystemState SystemIntegrator::Step(const SystemState& state, const VectorXd& u,
                                   std::mt19937_64& rng) const {
  const int sd = 2 * dof_;
  std::normal_distribution<double> normal;
  VectorXd w(sd);
  for (int i = 0; i < sd; ++i) w(i) = normal(rng);
  SystemState next;
  next.xi.resize(3 * dof_);
  next.xi.head(sd) = dynamics_.transition * state.xi.head(sd) +
                     dynamics_.input * u + noise_sqrt_ * w;
  next.xi.tail(dof_) = u;
  next.time = state.time + dt_;
  return next;
}

SystemState IntegrateSystem(const SystemState& state, const VectorXd& u,
                            const LinearSdeModel& model, double dt,
                            std::mt19937_64& rng) {
  if (!(dt > 0)) throw DomainError("IntegrateSystem: dt must be > 0");
  return SystemIntegrator(model, dt).Step(state, u, rng);
}

VectorXd Observe(const SystemState& state, const LinearSdeModel& model,
                 Observability mode, std::mt19937_64& rng) {
  const int sd = model.layout().state_dim();
  VectorXd z = model.observation * state.xi.head(sd);
  if (mode == Observability::kMdp) return z;
  std::normal_distribution<double> normal;
  VectorXd v(sd);
  for (int i = 0; i < sd; ++i) v(i) = normal(rng);
  Eigen::LLT<MatrixXd> llt(model.observation_noise);
  return z + llt.matrixL() * v;
}

double PathCost(const SimConfig& config,
                const std::vector<TrajectorySample>& supports,
                const std::vector<ObstacleSnapshot>& obstacles) {
  const int num = static_cast<int>(supports.size());
  if (num < 2) return 0.0;
  const LinearSdeModel model = config.Model();
  const FactorParams factors = SyncedFactors(config);
  const PipcPlanner goal_weights(model, factors, config.horizon,
                                 config.optimizer, RestState(config.start),
                                 RestState(config.goal),
                                 config.arena.robot_radius);
  const int n = model.layout().dim();
  auto interval =
      std::make_shared<const GpInterval>(model, config.horizon.support_dt);
  FactorGraph graph(num, n);
  Values values;
  for (int i = 0; i < num; ++i) {
    values.push_back(supports[i].xi);
    if (i + 1 < num) graph.Add(std::make_shared<GpPriorFactor>(i, interval));
    if (i > 0) {
      graph.Add(std::make_shared<PriorFactor>(
          i, goal_weights.goal(),
          MatrixXd::Identity(n, n) / goal_weights.GoalVariance(supports[i].xi),
          FactorKind::kGoal));
    }
    Environment2D env = config.arena;
    env.obstacles.clear();
    for (const auto& c : obstacles[i].centers) {
      Obstacle o;
      o.center = c;
      env.obstacles.push_back(o);
    }
    SdfOptions opts;
    opts.visible_only = false;
    opts.cell_size = config.sdf_cell_size;
    const Vector2d p = supports[i].xi.head<2>();
    const double reach = env.robot_radius + factors.eps + 0.5;
    opts.extent = Eigen::AlignedBox2d(p - Vector2d::Constant(reach),
                                      p + Vector2d::Constant(reach));
    auto sdf = std::make_shared<const SignedDistanceField>(BuildSdf(env, opts));
    graph.Add(std::make_shared<ObstacleFactor>(i, 2, sdf, env.robot_radius,
                                               factors.eps, factors.sigma_obs));
  }
  return GraphCost(graph, values);
}

TrialResult RunTrial(const SimConfig& config) {
  TrialResult result;
  const LinearSdeModel model = config.Model();
  const FactorParams factors = SyncedFactors(config);
  const Observability obs_mode = ObservabilityOf(config.mode);
  const bool closed_loop = IsClosedLoop(config.mode);

  std::mt19937_64 placement_rng = MakeStream(config.seed, 0);
  std::mt19937_64 obstacle_rng = MakeStream(config.seed, 1);
  std::mt19937_64 process_rng = MakeStream(config.seed, 2);
  std::mt19937_64 observation_rng = MakeStream(config.seed, 3);

  Environment2D env = config.arena;
  if (config.initial_obstacles) {
    env.obstacles = *config.initial_obstacles;
  } else {
    PlaceObstacles(&env, config.num_obstacles, config.start, config.goal,
                   config.start_exclusion, placement_rng);
  }

  const VectorXd start_xi = RestState(config.start);
  const VectorXd goal_xi = RestState(config.goal);
  SystemState truth{start_xi, 0.0};
  const double dt = config.horizon.ControlDt();
  const int steps_per_interval = config.horizon.StepsPerInterval();

  auto snapshot = [&](double t) {
    ObstacleSnapshot s{t, {}};
    for (const auto& o : env.obstacles) s.centers.push_back(o.center);
    result.obstacles.push_back(std::move(s));
  };
  result.samples.push_back({0.0, truth.xi, start_xi});
  snapshot(0.0);

  auto position = [&] { return Vector2d(truth.xi.head<2>()); };
  if ((position() - config.goal).norm() <= config.horizon.goal_dist) {
    result.outcome = Outcome::kSuccess;
    return result;
  }
  if (CheckCollision(env, position())) {
    result.outcome = Outcome::kCollision;
    return result;
  }

  bool done = false;
  try {
    const PipcPlanner planner(model, factors, config.horizon, config.optimizer,
                              start_xi, goal_xi, env.robot_radius);
    const SystemIntegrator integrator(model, dt);
    Belief state_belief;
    state_belief.mean = start_xi;
    state_belief.cov = MatrixXd::Identity(6, 6) *
                       (factors.sigma_fix * factors.sigma_fix);
    state_belief.time = 0.0;
    std::unique_ptr<HorizonPosterior> previous;
    long step = 0;
    const double window = env.sensor_half_width + 0.5 + env.robot_radius +
                          factors.eps + 0.5;

    while (!done) {
      SdfOptions opts;
      opts.visible_only = true;
      opts.robot_position = position();
      opts.cell_size = config.sdf_cell_size;
      opts.extent =
          Eigen::AlignedBox2d(position() - Vector2d::Constant(window),
                              position() + Vector2d::Constant(window));
      auto sdf =
          std::make_shared<const SignedDistanceField>(BuildSdf(env, opts));
      auto post = std::make_unique<HorizonPosterior>(
          planner.GetLaplaceApprox(state_belief, sdf, previous.get()));
      post->sdf_snapshot = static_cast<int>(result.obstacles.size()) - 1;
      ++result.replans;
      if (!post->graph.converged) ++result.nonconverged_replans;
      if (config.record_horizons) {
        HorizonPreview preview{post->start_time, {}};
        for (const auto& xi : post->graph.mean) {
          preview.positions.emplace_back(xi.head<2>());
        }
        result.horizons.push_back(std::move(preview));
      }

      Belief policy = planner.InitialPolicyBelief(*post);
      for (int k = 0; k < steps_per_interval && !done; ++k) {
        const double t = step * dt;
        const VectorXd z = Observe(truth, model, obs_mode, observation_rng);
        VectorXd u;
        if (closed_loop) {
          PolicyStep ps = planner.FilterPolicy(z, policy, *post, t, obs_mode);
          u = ps.action;
          policy = ConditionOnControl(ps.belief, u);
        } else {
          u = planner.OpenLoopPolicy(*post, t);
        }
        const Vector2d before = position();
        truth = integrator.Step(truth, u, process_rng);
        state_belief = planner.FilterState(z, u, state_belief, obs_mode);
        StepObstacles(&env, dt, obstacle_rng);
        ++step;
        truth.time = step * dt;
        state_belief.time = truth.time;
        result.path_length += (position() - before).norm();
        result.samples.push_back({truth.time, truth.xi, state_belief.mean});
        if (step % steps_per_interval == 0) snapshot(truth.time);
        result.time_to_goal = truth.time;

        if (!truth.xi.allFinite()) {
          throw NumericalError("system state diverged");
        }
        if (CheckCollision(env, position())) {
          result.outcome = Outcome::kCollision;
          done = true;
        } else if ((position() - config.goal).norm() <=
                   config.horizon.goal_dist) {
          result.outcome = Outcome::kSuccess;
          done = true;
        } else if (truth.time >= config.horizon.t_max - 1e-9) {
          result.outcome = Outcome::kTimeout;
          done = true;
        }
      }
      previous = std::move(post);
    }
  } catch (const std::exception& e) {
    result.outcome = Outcome::kFailure;
    result.diagnostic = e.what();
  }

  std::vector<TrajectorySample> supports;
  for (size_t i = 0; i < result.samples.size();
       i += static_cast<size_t>(steps_per_interval)) {
    supports.push_back(result.samples[i]);
  }
  try {
    result.path_cost = PathCost(config, supports, result.obstacles);
  } catch (const std::exception& e) {
    result.path_cost = std::nan("");
    if (result.diagnostic.empty()) result.diagnostic = e.what();
  }
  return result;
}

}  // namespace pipc
