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

#ifndef PIPC_PLANNER_H_
#define PIPC_PLANNER_H_

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "pipc/environment.h"
#include "pipc/factor_graph.h"
#include "pipc/gp_model.h"

namespace pipc {

// Factor noise settings. Defaults are the 2D benchmark values.
struct FactorParams {
  double sigma_goal = 1.0;
  double sigma_fix = 1e-4;
  double sigma_obs = 0.02;
  double sigma_meas = 0.01;
  double eps = 1.0;  // safety distance, m
  double qu = 10.0;
  double qx = 0.01;
  // Q_goal is floored at (goal_floor * sigma_goal)^2.
  double goal_floor = 1e-3;

  void Validate() const;
};

struct HorizonConfig {
  double horizon = 2.0;     // t_h, s
  double support_dt = 0.2;  // spacing of support states, s
  int n_ip = 20;            // interpolated obstacle factors per interval
  double t_max = 20.0;      // s
  double goal_dist = 0.2;   // m
  // Control/observation period; support_dt / n_ip unless overridden.
  std::optional<double> control_dt;

  int NumSupport() const;
  double ControlDt() const;
  int StepsPerInterval() const;
  void Validate() const;
};

enum class Observability { kMdp, kPomdp };

// Gaussian belief over one augmented state.
struct Belief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  double time = 0.0;
};

// Laplace approximation over one horizon window.
struct HorizonPosterior {
  double start_time = 0.0;
  double support_dt = 0.0;
  GraphPosterior graph;
  std::shared_ptr<const FactorGraph> factor_graph;
  Eigen::VectorXd goal;
  int sdf_snapshot = -1;

  int num_support() const { return static_cast<int>(graph.mean.size()); }
  double end_time() const {
    return start_time + support_dt * (num_support() - 1);
  }
  double SupportTime(int i) const { return start_time + support_dt * i; }
};

// Linear-Gaussian conditional xi_{t+dt} | xi_t = A xi_t + c + w, w ~ N(0, cov).
struct ConditionalGaussian {
  Eigen::MatrixXd transition;
  Eigen::VectorXd offset;
  Eigen::MatrixXd cov;
};

struct PolicyStep {
  Belief belief;
  Eigen::VectorXd action;
};

// Hinge obstacle cost on the position block of a support state.
class ObstacleFactor final : public Factor {
 public:
  ObstacleFactor(int key, int dof,
                 std::shared_ptr<const SignedDistanceField> sdf,
                 double robot_radius, double eps, double sigma_obs);

  Eigen::VectorXd Evaluate(std::span<const Eigen::VectorXd> states,
                           std::vector<Eigen::MatrixXd>* jacobians)
      const override;

 private:
  int dof_;
  std::shared_ptr<const SignedDistanceField> sdf_;
  double robot_radius_;
  double eps_;
};

// Hinge obstacle cost at a GP-interpolated state between support states
// (i, i+1). Jacobians chain through Lambda and Psi.
class InterpolatedObstacleFactor final : public Factor {
 public:
  InterpolatedObstacleFactor(int key, int dof,
                             std::shared_ptr<const GpInterpolator> interp,
                             std::shared_ptr<const SignedDistanceField> sdf,
                             double robot_radius, double eps,
                             double sigma_obs);

  Eigen::VectorXd Evaluate(std::span<const Eigen::VectorXd> states,
                           std::vector<Eigen::MatrixXd>* jacobians)
      const override;

 private:
  int dof_;
  std::shared_ptr<const GpInterpolator> interp_;
  std::shared_ptr<const SignedDistanceField> sdf_;
  double robot_radius_;
  double eps_;
};

// Receding-horizon planner and the two recursive filters. One instance per
// trial; not thread-safe.
class PipcPlanner {
 public:
  // Throws ConfigError on invalid settings or when goal == start.
  PipcPlanner(LinearSdeModel model, FactorParams params, HorizonConfig horizon,
              OptimizerConfig optimizer, Eigen::VectorXd start,
              Eigen::VectorXd goal, double robot_radius = 0.5);

  const LinearSdeModel& model() const { return model_; }
  const FactorParams& params() const { return params_; }
  const HorizonConfig& horizon() const { return horizon_; }
  const GpInterval& interval() const { return *interval_; }
  const Eigen::VectorXd& goal() const { return goal_; }

  // sigma_g^2 * |xi - goal|^2 / |start - goal|^2, floored.
  double GoalVariance(const Eigen::VectorXd& xi) const;

  // Factor graph over the horizon starting at belief.time. Goal weights are
  // evaluated at `linearization`.
  FactorGraph BuildGraph(const Belief& belief,
                         std::shared_ptr<const SignedDistanceField> sdf,
                         const Values& linearization) const;

  // Previous posterior shifted to belief.time, constant-velocity tail, first
  // state replaced by the belief mean.
  Values WarmStart(const Belief& belief,
                   const HorizonPosterior* previous) const;

  HorizonPosterior GetLaplaceApprox(
      const Belief& belief, std::shared_ptr<const SignedDistanceField> sdf,
      const HorizonPosterior* previous = nullptr) const;

  // xi_{t+dt} | xi_t under the posterior, for [t, t+dt] inside one support
  // interval. Throws DomainError otherwise.
  ConditionalGaussian PolicyTransition(const HorizonPosterior& posterior,
                                       double t, double dt_step) const;

  // Posterior marginal of the first support state.
  Belief InitialPolicyBelief(const HorizonPosterior& posterior) const;

  // Predict from prev.time to t with PolicyTransition (skipped when equal),
  // then correct with z. The action is the control block of the mean.
  PolicyStep FilterPolicy(const Eigen::VectorXd& z, const Belief& prev,
                          const HorizonPosterior& posterior, double t,
                          Observability mode) const;

  // Control block of the interpolated posterior mean at t.
  Eigen::VectorXd OpenLoopPolicy(const HorizonPosterior& posterior,
                                 double t) const;

  // Correct with (z, u) then predict one control period along the prior.
  Belief FilterState(const Eigen::VectorXd& z, const Eigen::VectorXd& u,
                     const Belief& prev, Observability mode) const;

  // Observation noise used for z in the given mode.
  Eigen::MatrixXd MeasurementNoise(Observability mode) const;

 private:
  std::pair<int, double> Locate(const HorizonPosterior& posterior,
                                double t) const;

  LinearSdeModel model_;
  FactorParams params_;
  HorizonConfig horizon_;
  OptimizerConfig optimizer_;
  Eigen::VectorXd start_;
  Eigen::VectorXd goal_;
  double robot_radius_;
  double goal_norm_sq_;
  std::shared_ptr<const GpInterval> interval_;
  std::vector<std::shared_ptr<const GpInterpolator>> interpolators_;
  Eigen::MatrixXd control_transition_;
  Eigen::MatrixXd control_noise_;
};

// Gaussian update of a belief on an exact linear observation block:
// H xi = y with noise R (Joseph form).
Belief KalmanCorrect(const Belief& prior, const Eigen::MatrixXd& obs_matrix,
                     const Eigen::VectorXd& y, const Eigen::MatrixXd& noise);

// Exact conditioning of the belief on its control block equal to u.
Belief ConditionOnControl(const Belief& belief, const Eigen::VectorXd& u);

// Moore-Penrose inverse of a symmetric PSD matrix.
Eigen::MatrixXd PsdPseudoInverse(const Eigen::MatrixXd& m,
                                 double rel_tol = 1e-12);

}  // namespace pipc

#endif  // PIPC_PLANNER_H_
