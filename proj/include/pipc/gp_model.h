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

#ifndef PIPC_GP_MODEL_H_
#define PIPC_GP_MODEL_H_

#include <Eigen/Dense>

namespace pipc {

// Index layout of an augmented state xi = (p, v, u). The ordering is fixed
// throughout the library: position, velocity, then control, each `dof` long.
struct StateLayout {
  int dof = 2;

  int state_dim() const { return 2 * dof; }
  int dim() const { return 3 * dof; }
  int position_offset() const { return 0; }
  int velocity_offset() const { return dof; }
  int control_offset() const { return 2 * dof; }
};

// Augmented state (x, u) at one instant.
struct AugmentedState {
  Eigen::VectorXd value;
  double time = 0.0;

  static AugmentedState FromParts(const Eigen::VectorXd& position,
                                  const Eigen::VectorXd& velocity,
                                  const Eigen::VectorXd& control,
                                  double time = 0.0);

  int dof() const { return static_cast<int>(value.size()) / 3; }
  Eigen::VectorXd position() const { return value.head(dof()); }
  Eigen::VectorXd velocity() const { return value.segment(dof(), dof()); }
  Eigen::VectorXd control() const { return value.tail(dof()); }
  // System state x = (p, v).
  Eigen::VectorXd state() const { return value.head(2 * dof()); }
};

// Linear SDE pair defining the Gaussian process prior on augmented
// trajectories:
//   dx = (A x + B u) dt + F dw,   z = C x + v,  v ~ N(0, Q_v)
//   du = D u dt + G dw'
// Biases are fixed to zero.
struct LinearSdeModel {
  int dof = 2;
  Eigen::MatrixXd state_drift;        // A, 2d x 2d
  Eigen::MatrixXd control_input;      // B, 2d x d
  Eigen::MatrixXd control_drift;      // D, d x d
  Eigen::MatrixXd state_diffusion;    // F F^T, 2d x 2d
  Eigen::MatrixXd control_diffusion;  // G G^T, d x d
  Eigen::MatrixXd observation;        // C, 2d x 2d
  Eigen::MatrixXd observation_noise;  // Q_v, 2d x 2d

  // Double integrator p' = v, v' = u with velocity diffusion qx, control
  // diffusion qu and isotropic observation noise of standard deviation
  // sigma_meas.
  static LinearSdeModel DoubleIntegrator(int dof, double qx, double qu,
                                         double sigma_meas);

  StateLayout layout() const { return StateLayout{dof}; }

  // [[A, B], [0, D]].
  Eigen::MatrixXd AugmentedDrift() const;
  // blockdiag(F F^T, G G^T).
  Eigen::MatrixXd AugmentedDiffusion() const;

  // Throws ConfigError on inconsistent dimensions, asymmetric or indefinite
  // covariances.
  void Validate() const;
};

// Phi(dt) = exp(M dt) for the augmented drift M. Exact polynomial when M is
// nilpotent of index <= 3 (the double integrator), scaling and squaring
// otherwise. Throws DomainError for dt < 0, NumericalError when the
// exponential does not produce finite values.
Eigen::MatrixXd TransitionMatrix(const LinearSdeModel& model, double dt);

// Q(dt) = int_0^dt Phi(s) L L^T Phi(s)^T ds. Closed form for the nilpotent
// drift, composite Gauss-Legendre quadrature otherwise.
Eigen::MatrixXd ProcessNoiseCov(const LinearSdeModel& model, double dt);

// Exact zero-order-hold discretization of the system state under a control
// held constant over dt.
struct DiscreteStateDynamics {
  Eigen::MatrixXd transition;  // Phi_x(dt)
  Eigen::MatrixXd input;       // Gamma(dt)
  Eigen::MatrixXd noise_cov;   // int Phi_x F F^T Phi_x^T
};
DiscreteStateDynamics DiscretizeState(const LinearSdeModel& model, double dt);

// Transition and noise of the augmented prior between two support states
// dt apart. Immutable after construction.
class GpInterval {
 public:
  // Condition number of Q above which construction fails.
  static constexpr double kMaxCondition = 1e12;

  GpInterval(const LinearSdeModel& model, double dt);

  double dt() const { return dt_; }
  const Eigen::MatrixXd& transition() const { return transition_; }
  const Eigen::MatrixXd& noise_cov() const { return noise_cov_; }
  const Eigen::MatrixXd& noise_info() const { return noise_info_; }
  double condition() const { return condition_; }

 private:
  double dt_;
  Eigen::MatrixXd transition_;
  Eigen::MatrixXd noise_cov_;
  Eigen::MatrixXd noise_info_;
  double condition_;
};

struct WeightedResidual {
  Eigen::VectorXd residual;
  Eigen::MatrixXd weight;

  double Cost() const { return 0.5 * residual.dot(weight * residual); }
};

// r = Phi xi_i - xi_j with weight Q^-1. Throws ConfigError on dimension or
// time-stamp mismatch.
WeightedResidual GpPriorResidual(const GpInterval& interval,
                                 const AugmentedState& xi_i,
                                 const AugmentedState& xi_j);

// Posterior-mean interpolation xi(tau) = Lambda xi_i + Psi xi_j between two
// support states. Precomputes the maps for one fixed tau.
class GpInterpolator {
 public:
  GpInterpolator(const LinearSdeModel& model, const GpInterval& interval,
                 double tau);

  double tau() const { return tau_; }
  const Eigen::MatrixXd& lambda() const { return lambda_; }
  const Eigen::MatrixXd& psi() const { return psi_; }

  Eigen::VectorXd Interpolate(const Eigen::VectorXd& xi_i,
                              const Eigen::VectorXd& xi_j) const {
    return lambda_ * xi_i + psi_ * xi_j;
  }

 private:
  double tau_;
  Eigen::MatrixXd lambda_;
  Eigen::MatrixXd psi_;
};

struct Interpolation {
  AugmentedState state;
  Eigen::MatrixXd jacobian_i;  // Lambda(tau)
  Eigen::MatrixXd jacobian_j;  // Psi(tau)
};

Interpolation GpInterpolate(const LinearSdeModel& model,
                            const GpInterval& interval,
                            const AugmentedState& xi_i,
                            const AugmentedState& xi_j, double tau);

// Joint covariance of (xi(tau_a), xi(tau_b)) under the prior conditioned on
// both interval endpoints, 0 <= tau_a <= tau_b <= dt. 2n x 2n.
Eigen::MatrixXd BridgeCovariance(const LinearSdeModel& model,
                                 const GpInterval& interval, double tau_a,
                                 double tau_b);

}  // namespace pipc

#endif  // PIPC_GP_MODEL_H_
