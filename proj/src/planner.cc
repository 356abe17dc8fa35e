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

#include "pipc/planner.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pipc/errors.h"

namespace pipc {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

constexpr double kTimeTolerance = 1e-9;

MatrixXd Symmetrize(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

void FactorParams::Validate() const {
  if (!(sigma_goal > 0) || !(sigma_fix > 0) || !(sigma_obs > 0) ||
      !(sigma_meas > 0) || !(eps > 0) || !(qu > 0) || !(qx >= 0) ||
      !(goal_floor > 0)) {
    throw ConfigError("factor parameters must be positive (Q_x may be 0)");
  }
}

int HorizonConfig::NumSupport() const {
  return static_cast<int>(std::lround(horizon / support_dt)) + 1;
}

double HorizonConfig::ControlDt() const {
  return control_dt.value_or(support_dt / n_ip);
}

int HorizonConfig::StepsPerInterval() const {
  return static_cast<int>(std::lround(support_dt / ControlDt()));
}

void HorizonConfig::Validate() const {
  if (!(support_dt > 0) || !(horizon >= support_dt) || n_ip < 1 ||
      !(t_max > 0) || !(goal_dist > 0)) {
    throw ConfigError("horizon config: need t_h >= dt > 0, n_ip >= 1, "
                      "t_max > 0, gdist > 0");
  }
  const double n = horizon / support_dt;
  if (std::abs(n - std::round(n)) > 1e-9) {
    throw ConfigError("horizon config: t_h must be a multiple of dt");
  }
  const double dt = ControlDt();
  const double steps = support_dt / dt;
  if (!(dt > 0) || std::abs(steps - std::round(steps)) > 1e-9) {
    throw ConfigError("horizon config: control period must divide dt");
  }
}

ObstacleFactor::ObstacleFactor(int key, int dof,
                               std::shared_ptr<const SignedDistanceField> sdf,
                               double robot_radius, double eps,
                               double sigma_obs)
    : Factor(FactorKind::kObstacle, {key},
             MatrixXd::Constant(1, 1, 1.0 / (sigma_obs * sigma_obs))),
      dof_(dof),
      sdf_(std::move(sdf)),
      robot_radius_(robot_radius),
      eps_(eps) {
  if (dof_ != 2) throw ConfigError("obstacle factors need a 2D workspace");
}

VectorXd ObstacleFactor::Evaluate(std::span<const VectorXd> states,
                                  std::vector<MatrixXd>* jacobians) const {
  const Vector2d p = states[0].head<2>();
  VectorXd r = VectorXd::Zero(1);
  if (jacobians) jacobians->assign(1, MatrixXd::Zero(1, 3 * dof_));
  // Outside the field every included obstacle is farther than the margin.
  if (!sdf_->Contains(p)) return r;
  const HingeCost h = ComputeHingeCost(*sdf_, p, robot_radius_, eps_);
  r(0) = h.cost;
  if (jacobians) (*jacobians)[0].leftCols<2>() = h.gradient.transpose();
  return r;
}

InterpolatedObstacleFactor::InterpolatedObstacleFactor(
    int key, int dof, std::shared_ptr<const GpInterpolator> interp,
    std::shared_ptr<const SignedDistanceField> sdf, double robot_radius,
    double eps, double sigma_obs)
    : Factor(FactorKind::kObstacleInterpolated, {key, key + 1},
             MatrixXd::Constant(1, 1, 1.0 / (sigma_obs * sigma_obs))),
      dof_(dof),
      interp_(std::move(interp)),
      sdf_(std::move(sdf)),
      robot_radius_(robot_radius),
      eps_(eps) {
  if (dof_ != 2) throw ConfigError("obstacle factors need a 2D workspace");
}

VectorXd InterpolatedObstacleFactor::Evaluate(
    std::span<const VectorXd> states, std::vector<MatrixXd>* jacobians) const {
  const VectorXd xi = interp_->Interpolate(states[0], states[1]);
  const Vector2d p = xi.head<2>();
  VectorXd r = VectorXd::Zero(1);
  if (jacobians) jacobians->assign(2, MatrixXd::Zero(1, 3 * dof_));
  if (!sdf_->Contains(p)) return r;
  const HingeCost h = ComputeHingeCost(*sdf_, p, robot_radius_, eps_);
  r(0) = h.cost;
  if (jacobians) {
    (*jacobians)[0] = h.gradient.transpose() * interp_->lambda().topRows<2>();
    (*jacobians)[1] = h.gradient.transpose() * interp_->psi().topRows<2>();
  }
  return r;
}

PipcPlanner::PipcPlanner(LinearSdeModel model, FactorParams params,
                         HorizonConfig horizon, OptimizerConfig optimizer,
                         VectorXd start, VectorXd goal, double robot_radius)
    : model_(std::move(model)),
      params_(params),
      horizon_(horizon),
      optimizer_(optimizer),
      start_(std::move(start)),
      goal_(std::move(goal)),
      robot_radius_(robot_radius) {
  model_.Validate();
  params_.Validate();
  horizon_.Validate();
  optimizer_.Validate();
  const int n = model_.layout().dim();
  if (start_.size() != n || goal_.size() != n) {
    throw ConfigError("planner: start/goal must be augmented states");
  }
  goal_norm_sq_ = (start_ - goal_).squaredNorm();
  if (!(goal_norm_sq_ > 0.0)) {
    throw ConfigError("planner: goal equals start, goal factor undefined");
  }
  interval_ = std::make_shared<const GpInterval>(model_, horizon_.support_dt);
  for (int k = 1; k <= horizon_.n_ip; ++k) {
    const double tau = k * horizon_.support_dt / (horizon_.n_ip + 1);
    interpolators_.push_back(
        std::make_shared<const GpInterpolator>(model_, *interval_, tau));
  }
  control_transition_ = TransitionMatrix(model_, horizon_.ControlDt());
  control_noise_ = ProcessNoiseCov(model_, horizon_.ControlDt());
}

double PipcPlanner::GoalVariance(const VectorXd& xi) const {
  const double sg2 = params_.sigma_goal * params_.sigma_goal;
  const double floor = params_.goal_floor * params_.sigma_goal;
  return std::max(sg2 * (xi - goal_).squaredNorm() / goal_norm_sq_,
                  floor * floor);
}

FactorGraph PipcPlanner::BuildGraph(
    const Belief& belief, std::shared_ptr<const SignedDistanceField> sdf,
    const Values& linearization) const {
  const int num = horizon_.NumSupport();
  const StateLayout layout = model_.layout();
  const int n = layout.dim();
  const int d = layout.dof;
  if (belief.mean.size() != n) {
    throw ConfigError("BuildGraph: belief has the wrong dimension");
  }
  if (static_cast<int>(linearization.size()) != num) {
    throw ConfigError("BuildGraph: linearization has the wrong length");
  }
  FactorGraph graph(num, n);

  // Anchor: x pinned at sigma_fix, u held to the GP control prior.
  MatrixXd anchor_info = MatrixXd::Zero(n, n);
  anchor_info.topLeftCorner(2 * d, 2 * d) =
      MatrixXd::Identity(2 * d, 2 * d) /
      (params_.sigma_fix * params_.sigma_fix);
  anchor_info.bottomRightCorner(d, d) =
      interval_->noise_cov().bottomRightCorner(d, d).inverse();
  graph.Add(std::make_shared<PriorFactor>(0, belief.mean, anchor_info));

  for (int i = 0; i + 1 < num; ++i) {
    graph.Add(std::make_shared<GpPriorFactor>(i, interval_));
  }
  for (int i = 0; i < num; ++i) {
    graph.Add(std::make_shared<ObstacleFactor>(i, d, sdf, robot_radius_,
                                               params_.eps, params_.sigma_obs));
  }
  for (int i = 0; i + 1 < num; ++i) {
    for (const auto& interp : interpolators_) {
      graph.Add(std::make_shared<InterpolatedObstacleFactor>(
          i, d, interp, sdf, robot_radius_, params_.eps, params_.sigma_obs));
    }
  }
  for (int i = 1; i < num; ++i) {
    const double var = GoalVariance(linearization[i]);
    graph.Add(std::make_shared<PriorFactor>(
        i, goal_, MatrixXd::Identity(n, n) / var, FactorKind::kGoal));
  }
  return graph;
}

Values PipcPlanner::WarmStart(const Belief& belief,
                              const HorizonPosterior* previous) const {
  const int num = horizon_.NumSupport();
  const int d = model_.dof;
  const double dt = horizon_.support_dt;
  Values init(num);
  init[0] = belief.mean;
  int last_known = 0;
  for (int i = 1; i < num; ++i) {
    const double t = belief.time + i * dt;
    if (previous && previous->num_support() > 1 &&
        t >= previous->start_time - kTimeTolerance &&
        t <= previous->end_time() + kTimeTolerance) {
      const auto [k, tau] = Locate(*previous, t);
      const GpInterpolator interp(model_, *interval_, tau);
      init[i] = interp.Interpolate(previous->graph.mean[k],
                                   previous->graph.mean[k + 1]);
      last_known = i;
      continue;
    }
    const VectorXd& base = init[last_known];
    VectorXd xi = VectorXd::Zero(3 * d);
    xi.head(d) = base.head(d) + base.segment(d, d) * (i - last_known) * dt;
    xi.segment(d, d) = base.segment(d, d);
    init[i] = xi;
  }
  return init;
}

HorizonPosterior PipcPlanner::GetLaplaceApprox(
    const Belief& belief, std::shared_ptr<const SignedDistanceField> sdf,
    const HorizonPosterior* previous) const {
  const Values init = WarmStart(belief, previous);
  auto graph = std::make_shared<const FactorGraph>(
      BuildGraph(belief, std::move(sdf), init));
  HorizonPosterior post;
  post.start_time = belief.time;
  post.support_dt = horizon_.support_dt;
  post.graph = Optimize(*graph, init, optimizer_);
  post.factor_graph = std::move(graph);
  post.goal = goal_;
  return post;
}

std::pair<int, double> PipcPlanner::Locate(const HorizonPosterior& posterior,
                                           double t) const {
  const int num = posterior.num_support();
  if (num < 2) throw DomainError("posterior horizon has no intervals");
  if (t < posterior.start_time - kTimeTolerance ||
      t > posterior.end_time() + kTimeTolerance) {
    throw DomainError("time outside the posterior horizon");
  }
  const double rel = (t - posterior.start_time) / posterior.support_dt;
  int i = static_cast<int>(std::floor(rel + kTimeTolerance));
  i = std::clamp(i, 0, num - 2);
  const double tau = std::clamp(t - posterior.SupportTime(i), 0.0,
                                posterior.support_dt);
  return {i, tau};
}

ConditionalGaussian PipcPlanner::PolicyTransition(
    const HorizonPosterior& posterior, double t, double dt_step) const {
  if (!(dt_step >= 0.0)) throw DomainError("policy transition: dt < 0");
  auto [i, tau_a] = Locate(posterior, t);
  const double dt = posterior.support_dt;
  if (tau_a + dt_step > dt + kTimeTolerance) {
    throw DomainError("policy transition must stay within one interval");
  }
  const double tau_b = std::min(tau_a + dt_step, dt);
  const int n = model_.layout().dim();
  const GpInterpolator ia(model_, *interval_, tau_a);
  const GpInterpolator ib(model_, *interval_, tau_b);

  MatrixXd w(2 * n, 2 * n);
  w << ia.lambda(), ia.psi(), ib.lambda(), ib.psi();
  VectorXd pair_mean(2 * n);
  pair_mean << posterior.graph.mean[i], posterior.graph.mean[i + 1];
  const VectorXd mu = w * pair_mean;
  const MatrixXd s =
      Symmetrize(w * posterior.graph.pair_covariances[i] * w.transpose() +
                 BridgeCovariance(model_, *interval_, tau_a, tau_b));

  const MatrixXd s_aa = s.topLeftCorner(n, n);
  const MatrixXd s_ba = s.bottomLeftCorner(n, n);
  const MatrixXd s_bb = s.bottomRightCorner(n, n);
  ConditionalGaussian out;
  out.transition = s_ba * PsdPseudoInverse(s_aa);
  out.offset = mu.tail(n) - out.transition * mu.head(n);
  out.cov = Symmetrize(s_bb - out.transition * s_ba.transpose());
  return out;
}

Belief PipcPlanner::InitialPolicyBelief(const HorizonPosterior& posterior) const {
  return Belief{posterior.graph.mean.front(), posterior.graph.marginals.front(),
                posterior.start_time};
}

MatrixXd PipcPlanner::MeasurementNoise(Observability mode) const {
  const int sd = model_.layout().state_dim();
  if (mode == Observability::kMdp) {
    return MatrixXd::Identity(sd, sd) * (params_.sigma_fix * params_.sigma_fix);
  }
  return model_.observation_noise;
}

PolicyStep PipcPlanner::FilterPolicy(const VectorXd& z, const Belief& prev,
                                     const HorizonPosterior& posterior,
                                     double t, Observability mode) const {
  const int n = model_.layout().dim();
  const int sd = model_.layout().state_dim();
  if (t < prev.time - kTimeTolerance) {
    throw DomainError("filter policy: time runs backwards");
  }
  Belief predicted = prev;
  if (t - prev.time > kTimeTolerance) {
    const ConditionalGaussian cg =
        PolicyTransition(posterior, prev.time, t - prev.time);
    predicted.mean = cg.transition * prev.mean + cg.offset;
    predicted.cov =
        Symmetrize(cg.transition * prev.cov * cg.transition.transpose() + cg.cov);
  }
  predicted.time = t;
  MatrixXd h = MatrixXd::Zero(sd, n);
  h.leftCols(sd) = model_.observation;
  PolicyStep step;
  step.belief = KalmanCorrect(predicted, h, z, MeasurementNoise(mode));
  step.action = step.belief.mean.tail(model_.dof);
  return step;
}

VectorXd PipcPlanner::OpenLoopPolicy(const HorizonPosterior& posterior,
                                     double t) const {
  const auto [i, tau] = Locate(posterior, t);
  const GpInterpolator interp(model_, *interval_, tau);
  return interp
      .Interpolate(posterior.graph.mean[i], posterior.graph.mean[i + 1])
      .tail(model_.dof);
}

Belief PipcPlanner::FilterState(const VectorXd& z, const VectorXd& u,
                                const Belief& prev, Observability mode) const {
  const int n = model_.layout().dim();
  const int sd = model_.layout().state_dim();
  const int d = model_.dof;
  MatrixXd h = MatrixXd::Zero(n, n);
  h.topLeftCorner(sd, sd) = model_.observation;
  h.bottomRightCorner(d, d).setIdentity();
  VectorXd y(n);
  y << z, u;
  MatrixXd noise = MatrixXd::Zero(n, n);
  noise.topLeftCorner(sd, sd) = MeasurementNoise(mode);
  noise.bottomRightCorner(d, d) =
      MatrixXd::Identity(d, d) * (params_.sigma_fix * params_.sigma_fix);
  const Belief corrected = KalmanCorrect(prev, h, y, noise);
  Belief next;
  next.mean = control_transition_ * corrected.mean;
  next.cov = Symmetrize(control_transition_ * corrected.cov *
                            control_transition_.transpose() +
                        control_noise_);
  next.time = prev.time + horizon_.ControlDt();
  return next;
}

Belief KalmanCorrect(const Belief& prior, const MatrixXd& obs_matrix,
                     const VectorXd& y, const MatrixXd& noise) {
  const MatrixXd ph = prior.cov * obs_matrix.transpose();
  const MatrixXd innov_cov = Symmetrize(obs_matrix * ph + noise);
  Eigen::LLT<MatrixXd> llt(innov_cov);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Kalman update: innovation covariance not invertible");
  }
  const MatrixXd gain = llt.solve(ph.transpose()).transpose();
  const auto n = prior.mean.size();
  const MatrixXd ikh = MatrixXd::Identity(n, n) - gain * obs_matrix;
  Belief post;
  post.mean = prior.mean + gain * (y - obs_matrix * prior.mean);
  post.cov = Symmetrize(ikh * prior.cov * ikh.transpose() +
                        gain * noise * gain.transpose());
  post.time = prior.time;
  if (!post.mean.allFinite() || !post.cov.allFinite()) {
    throw NumericalError("Kalman update: non-finite belief");
  }
  return post;
}

Belief ConditionOnControl(const Belief& belief, const VectorXd& u) {
  const auto n = belief.mean.size();
  const auto d = u.size();
  const auto k = n - d;
  const MatrixXd gain =
      belief.cov.topRightCorner(k, d) *
      PsdPseudoInverse(belief.cov.bottomRightCorner(d, d));
  Belief out = belief;
  out.mean.head(k) += gain * (u - belief.mean.tail(d));
  out.mean.tail(d) = u;
  out.cov.setZero();
  out.cov.topLeftCorner(k, k) = Symmetrize(
      belief.cov.topLeftCorner(k, k) -
      gain * belief.cov.bottomLeftCorner(d, k));
  return out;
}

MatrixXd PsdPseudoInverse(const MatrixXd& m, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(Symmetrize(m));
  const VectorXd& ev = eig.eigenvalues();
  const double cutoff = rel_tol * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  VectorXd inv = VectorXd::Zero(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff && ev(i) > 0.0) inv(i) = 1.0 / ev(i);
  }
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace pipc
