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

#ifndef PIPC_FACTOR_GRAPH_H_
#define PIPC_FACTOR_GRAPH_H_

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pipc/banded.h"
#include "pipc/gp_model.h"

namespace pipc {

// Stacked support states, one vector per variable.
using Values = std::vector<Eigen::VectorXd>;

enum class FactorKind { kPrior, kGp, kObstacle, kObstacleInterpolated, kGoal };

const char* FactorKindName(FactorKind kind);

// Residual factor with cost 0.5 r^T W r over one variable or an adjacent
// pair (i, i+1).
class Factor {
 public:
  Factor(FactorKind kind, std::vector<int> keys, Eigen::MatrixXd weight);
  virtual ~Factor() = default;

  FactorKind kind() const { return kind_; }
  const std::vector<int>& keys() const { return keys_; }
  const Eigen::MatrixXd& weight() const { return weight_; }
  int residual_dim() const { return static_cast<int>(weight_.rows()); }

  // `states` holds the connected variables in key order. When `jacobians`
  // is non-null it receives one residual_dim x var_dim block per key.
  virtual Eigen::VectorXd Evaluate(std::span<const Eigen::VectorXd> states,
                                   std::vector<Eigen::MatrixXd>* jacobians)
      const = 0;

  double Cost(std::span<const Eigen::VectorXd> states) const;

 private:
  FactorKind kind_;
  std::vector<int> keys_;
  Eigen::MatrixXd weight_;
};

// r = xi - mean on a single variable. Used for the anchor prior and the goal
// factors.
class PriorFactor final : public Factor {
 public:
  PriorFactor(int key, Eigen::VectorXd mean, Eigen::MatrixXd weight,
              FactorKind kind = FactorKind::kPrior);

  const Eigen::VectorXd& mean() const { return mean_; }

  Eigen::VectorXd Evaluate(std::span<const Eigen::VectorXd> states,
                           std::vector<Eigen::MatrixXd>* jacobians)
      const override;

 private:
  Eigen::VectorXd mean_;
};

// r = Phi xi_i - xi_{i+1}, W = Q^-1.
class GpPriorFactor final : public Factor {
 public:
  GpPriorFactor(int key, std::shared_ptr<const GpInterval> interval);

  Eigen::VectorXd Evaluate(std::span<const Eigen::VectorXd> states,
                           std::vector<Eigen::MatrixXd>* jacobians)
      const override;

 private:
  std::shared_ptr<const GpInterval> interval_;
};

class FactorGraph {
 public:
  FactorGraph(int num_vars, int var_dim);

  // Throws ConfigError unless the factor connects i or (i, i+1) in range.
  void Add(std::shared_ptr<const Factor> factor);

  int num_vars() const { return num_vars_; }
  int var_dim() const { return var_dim_; }
  const std::vector<std::shared_ptr<const Factor>>& factors() const {
    return factors_;
  }
  std::size_t Count(FactorKind kind) const;

  // States connected to `factor`, sliced out of `values`.
  static std::span<const Eigen::VectorXd> Slice(const Factor& factor,
                                                const Values& values);

 private:
  int num_vars_;
  int var_dim_;
  std::vector<std::shared_ptr<const Factor>> factors_;
};

// Gauss-Newton normal equations J^T W J and J^T W r at an estimate.
struct NormalEquations {
  BlockTridiagonal information;
  Eigen::VectorXd gradient;
  double cost = 0.0;
};

// Throws NumericalError on non-finite residuals or jacobians, ConfigError on
// a mis-sized estimate.
NormalEquations Linearize(const FactorGraph& graph, const Values& estimate);

// 0.5 sum r^T W r over all factors.
double GraphCost(const FactorGraph& graph, const Values& estimate);

struct OptimizerConfig {
  int max_iters = 100;
  double initial_damping = 1e-4;
  double damping_up = 10.0;
  double damping_down = 0.1;
  double max_damping = 1e10;
  double abs_cost_tol = 1e-12;
  double rel_cost_tol = 1e-6;
  double min_step_norm = 1e-10;

  void Validate() const;
};

// Laplace approximation of the graph posterior.
struct GraphPosterior {
  Values mean;
  std::vector<Eigen::MatrixXd> marginals;
  // Joint covariance of each adjacent pair (i, i+1).
  std::vector<Eigen::MatrixXd> pair_covariances;
  double cost = 0.0;
  double initial_cost = 0.0;
  int iterations = 0;
  int accepted_steps = 0;
  bool converged = false;
};

// Levenberg-Marquardt on the banded normal equations. Each iteration first
// tries the undamped Gauss-Newton step and falls back to damping on
// rejection. A step is accepted only if it lowers the cost by more than the
// tolerances; otherwise the current estimate is returned as converged.
// Throws NumericalError if the initial cost is not finite.
GraphPosterior Optimize(const FactorGraph& graph, const Values& init,
                        const OptimizerConfig& config);

}  // namespace pipc

#endif  // PIPC_FACTOR_GRAPH_H_
