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

#include "pipc/factor_graph.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "pipc/errors.h"

namespace pipc {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* FactorKindName(FactorKind kind) {
  switch (kind) {
    case FactorKind::kPrior:
      return "prior";
    case FactorKind::kGp:
      return "gp";
    case FactorKind::kObstacle:
      return "obstacle";
    case FactorKind::kObstacleInterpolated:
      return "obstacle-interpolated";
    case FactorKind::kGoal:
      return "goal";
  }
  return "unknown";
}

Factor::Factor(FactorKind kind, std::vector<int> keys, MatrixXd weight)
    : kind_(kind), keys_(std::move(keys)), weight_(std::move(weight)) {
  if (weight_.rows() != weight_.cols()) {
    throw ConfigError("factor weight must be square");
  }
}

double Factor::Cost(std::span<const VectorXd> states) const {
  const VectorXd r = Evaluate(states, nullptr);
  return 0.5 * r.dot(weight_ * r);
}

PriorFactor::PriorFactor(int key, VectorXd mean, MatrixXd weight,
                         FactorKind kind)
    : Factor(kind, {key}, std::move(weight)), mean_(std::move(mean)) {
  if (mean_.size() != residual_dim()) {
    throw ConfigError("prior factor: mean/weight dimension mismatch");
  }
}

VectorXd PriorFactor::Evaluate(std::span<const VectorXd> states,
                               std::vector<MatrixXd>* jacobians) const {
  if (jacobians) {
    jacobians->assign(1, MatrixXd::Identity(mean_.size(), mean_.size()));
  }
  return states[0] - mean_;
}

GpPriorFactor::GpPriorFactor(int key, std::shared_ptr<const GpInterval> interval)
    : Factor(FactorKind::kGp, {key, key + 1}, interval->noise_info()),
      interval_(std::move(interval)) {}

VectorXd GpPriorFactor::Evaluate(std::span<const VectorXd> states,
                                 std::vector<MatrixXd>* jacobians) const {
  const MatrixXd& phi = interval_->transition();
  if (jacobians) {
    jacobians->assign(2, MatrixXd());
    (*jacobians)[0] = phi;
    (*jacobians)[1] = -MatrixXd::Identity(phi.rows(), phi.cols());
  }
  return phi * states[0] - states[1];
}

FactorGraph::FactorGraph(int num_vars, int var_dim)
    : num_vars_(num_vars), var_dim_(var_dim) {
  if (num_vars < 0 || var_dim < 1) {
    throw ConfigError("factor graph: invalid dimensions");
  }
}

void FactorGraph::Add(std::shared_ptr<const Factor> factor) {
  if (!factor) throw ConfigError("factor graph: null factor");
  const auto& keys = factor->keys();
  const bool unary = keys.size() == 1;
  const bool pair = keys.size() == 2 && keys[1] == keys[0] + 1;
  if (!(unary || pair) || keys.front() < 0 || keys.back() >= num_vars_) {
    throw ConfigError(std::string("factor graph: ") +
                      FactorKindName(factor->kind()) +
                      " factor must connect i or (i, i+1) within range");
  }
  factors_.push_back(std::move(factor));
}

std::size_t FactorGraph::Count(FactorKind kind) const {
  std::size_t n = 0;
  for (const auto& f : factors_) n += f->kind() == kind;
  return n;
}

std::span<const VectorXd> FactorGraph::Slice(const Factor& factor,
                                             const Values& values) {
  return std::span<const VectorXd>(values).subspan(factor.keys().front(),
                                                   factor.keys().size());
}

namespace {

void CheckEstimate(const FactorGraph& graph, const Values& estimate) {
  if (static_cast<int>(estimate.size()) != graph.num_vars()) {
    throw ConfigError("estimate size does not match the number of variables");
  }
  for (const auto& v : estimate) {
    if (v.size() != graph.var_dim()) {
      throw ConfigError("estimate variable has the wrong dimension");
    }
  }
}

double Norm(const Values& values) {
  double sq = 0.0;
  for (const auto& v : values) sq += v.squaredNorm();
  return std::sqrt(sq);
}

Values Retract(const Values& x, const VectorXd& step) {
  Values out = x;
  const auto n = x.empty() ? 0 : x[0].size();
  for (size_t i = 0; i < out.size(); ++i) out[i] += step.segment(i * n, n);
  return out;
}

}  // namespace

NormalEquations Linearize(const FactorGraph& graph, const Values& estimate) {
  CheckEstimate(graph, estimate);
  const int n = graph.var_dim();
  NormalEquations ne;
  ne.information = BlockTridiagonal(graph.num_vars(), n);
  ne.gradient = VectorXd::Zero(graph.num_vars() * n);
  std::vector<MatrixXd> jac;
  for (const auto& factor : graph.factors()) {
    const VectorXd r = factor->Evaluate(FactorGraph::Slice(*factor, estimate),
                                        &jac);
    if (!r.allFinite()) {
      throw NumericalError(std::string("non-finite residual in ") +
                           FactorKindName(factor->kind()) + " factor");
    }
    const MatrixXd& w = factor->weight();
    bool shapes_ok = r.size() == w.rows() && jac.size() == factor->keys().size();
    for (const auto& j : jac) {
      shapes_ok = shapes_ok && j.rows() == r.size() && j.cols() == n;
    }
    if (!shapes_ok) {
      throw ConfigError(std::string("dimension mismatch in ") +
                        FactorKindName(factor->kind()) + " factor");
    }
    const VectorXd wr = w * r;
    ne.cost += 0.5 * r.dot(wr);
    const auto& keys = factor->keys();
    std::vector<MatrixXd> wj(keys.size());
    for (size_t a = 0; a < keys.size(); ++a) {
      if (!jac[a].allFinite()) {
        throw NumericalError(std::string("non-finite jacobian in ") +
                             FactorKindName(factor->kind()) + " factor");
      }
      wj[a] = w * jac[a];
      ne.gradient.segment(keys[a] * n, n) += jac[a].transpose() * wr;
      ne.information.diag[keys[a]] += jac[a].transpose() * wj[a];
    }
    if (keys.size() == 2) {
      ne.information.lower[keys[0]] += jac[1].transpose() * wj[0];
    }
  }
  return ne;
}

double GraphCost(const FactorGraph& graph, const Values& estimate) {
  CheckEstimate(graph, estimate);
  double cost = 0.0;
  for (const auto& factor : graph.factors()) {
    cost += factor->Cost(FactorGraph::Slice(*factor, estimate));
  }
  return cost;
}

void OptimizerConfig::Validate() const {
  if (max_iters < 1 || !(initial_damping > 0) || !(damping_up > 1) ||
      !(damping_down > 0 && damping_down < 1) || !(max_damping > 0) ||
      !(abs_cost_tol > 0) || !(rel_cost_tol > 0) || !(min_step_norm > 0)) {
    throw ConfigError("optimizer config: all settings must be positive");
  }
}

GraphPosterior Optimize(const FactorGraph& graph, const Values& init,
                        const OptimizerConfig& config) {
  config.Validate();
  for (const auto& v : init) {
    if (!v.allFinite()) throw NumericalError("optimizer: non-finite init");
  }
  GraphPosterior post;
  Values x = init;
  NormalEquations ne = Linearize(graph, x);
  if (!std::isfinite(ne.cost)) throw NumericalError("optimizer: NaN cost");
  post.initial_cost = ne.cost;
  double damping = config.initial_damping;

  while (post.iterations < config.max_iters && !post.converged) {
    ++post.iterations;
    double lambda = 0.0;
    bool accepted = false;
    for (;;) {
      BlockTridiagonal a = ne.information;
      if (lambda > 0.0) a.AddToDiagonal(lambda);
      VectorXd step;
      try {
        step = BandedCholesky(a).Solve(-ne.gradient);
      } catch (const RankDeficientError&) {
        step.resize(0);
      }
      if (step.size() > 0) {
        if (step.norm() <= config.min_step_norm * (Norm(x) + config.min_step_norm)) {
          post.converged = true;
          break;
        }
        Values candidate = Retract(x, step);
        double cost = std::numeric_limits<double>::infinity();
        try {
          cost = GraphCost(graph, candidate);
        } catch (const NumericalError&) {
        }
        if (std::isfinite(cost) && cost < ne.cost) {
          if (ne.cost - cost <=
              config.abs_cost_tol + config.rel_cost_tol * ne.cost) {
            post.converged = true;
            break;
          }
          x = std::move(candidate);
          accepted = true;
          if (lambda > 0.0) damping = std::max(damping * config.damping_down, 1e-12);
          break;
        }
      }
      if (lambda == 0.0) {
        lambda = damping;
      } else {
        lambda *= config.damping_up;
        damping = lambda;
      }
      if (lambda > config.max_damping) {
        // No descent direction left at any damping.
        post.converged = true;
        break;
      }
    }
    if (accepted) {
      ++post.accepted_steps;
      ne = Linearize(graph, x);
      if (!std::isfinite(ne.cost)) throw NumericalError("optimizer: NaN cost");
    }
  }

  post.cost = ne.cost;
  // Laplace covariance from the undamped information at the estimate.
  BlockTridiagonal info = ne.information;
  std::unique_ptr<BandedCholesky> chol;
  for (double jitter = 0.0; !chol; jitter = jitter == 0.0 ? 1e-9 : jitter * 100) {
    BlockTridiagonal a = info;
    if (jitter > 0.0) a.AddToDiagonal(jitter);
    try {
      chol = std::make_unique<BandedCholesky>(a);
    } catch (const RankDeficientError&) {
      if (jitter > 1e3) throw;
    }
  }
  post.marginals = chol->Marginals();
  post.pair_covariances = chol->PairMarginals();
  post.mean = std::move(x);
  return post;
}

}  // namespace pipc
