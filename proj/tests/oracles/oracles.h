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

// Brute-force reference implementations used by the tests. Everything here
// is dense, slow and deliberately independent of the library's closed forms.

#ifndef PIPC_TESTS_ORACLES_H_
#define PIPC_TESTS_ORACLES_H_

#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "pipc/factor_graph.h"
#include "pipc/gp_model.h"

namespace pipc::oracle {

// exp(m) by Pade scaling and squaring (Eigen MatrixFunctions).
Eigen::MatrixXd Expm(const Eigen::MatrixXd& m);

// Phi(dt) = exp(M dt) for the augmented drift.
Eigen::MatrixXd Transition(const LinearSdeModel& model, double dt);

// int_0^dt Phi(s) L Phi(s)^T ds by composite Simpson on `panels` panels.
Eigen::MatrixXd NoiseCov(const LinearSdeModel& model, double dt,
                         int panels = 4000);

struct Gaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// Joint Gaussian of the augmented prior at `times` (ascending), started from
// N(mean0, cov0) at times[0].
Gaussian PriorJoint(const LinearSdeModel& model, const std::vector<double>& times,
                    const Eigen::VectorXd& mean0, const Eigen::MatrixXd& cov0);

// Marginal over the listed coordinates.
Gaussian Marginal(const Gaussian& g, const std::vector<int>& idx);

// Condition on coordinates `observed` taking `value`, optionally with
// additive observation noise. Returns the distribution of the remaining
// coordinates in their original order.
Gaussian Condition(const Gaussian& g, const std::vector<int>& observed,
                   const Eigen::VectorXd& value,
                   const Eigen::MatrixXd& noise = Eigen::MatrixXd());

std::vector<int> Range(int begin, int end);

// Central-difference jacobian of f at x.
Eigen::MatrixXd NumericalJacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h = 1e-6);

// Jacobian of a factor's residual w.r.t. its k-th connected state.
Eigen::MatrixXd FactorJacobian(const Factor& factor,
                               const std::vector<Eigen::VectorXd>& states,
                               int k, double h = 1e-6);

// Dense J^T W J and J^T W r with finite-difference jacobians.
struct DenseSystem {
  Eigen::MatrixXd information;
  Eigen::VectorXd gradient;
};
DenseSystem DenseLinearize(const FactorGraph& graph, const Values& values,
                           double h = 1e-6);

// One Gauss-Newton step from `values` solved densely. Exact minimizer for
// linear-Gaussian graphs.
Values DenseGaussNewton(const FactorGraph& graph, const Values& values);

Eigen::MatrixXd RandomSpd(int n, std::mt19937_64& rng, double shift = 1.0);
Eigen::MatrixXd RandomMatrix(int rows, int cols, std::mt19937_64& rng);
Eigen::VectorXd RandomVector(int n, std::mt19937_64& rng);

double RelativeError(const Eigen::MatrixXd& actual,
                     const Eigen::MatrixXd& expected);

}  // namespace pipc::oracle

#endif  // PIPC_TESTS_ORACLES_H_
