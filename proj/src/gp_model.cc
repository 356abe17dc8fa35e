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

#include "pipc/gp_model.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "pipc/errors.h"

namespace pipc {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kTimeTolerance = 1e-9;

bool IsNilpotentIndex3(const MatrixXd& m) {
  return (m * m * m).isZero(0.0);
}

void CheckFinite(const MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw NumericalError(std::string(what) + ": non-finite entries");
  }
}

// exp(m) by scaling and squaring a truncated Taylor series.
MatrixXd ExpScalingSquaring(const MatrixXd& m) {
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  if (squarings > 60) {
    throw NumericalError("matrix exponential: drift norm too large");
  }
  const MatrixXd scaled = m / std::ldexp(1.0, squarings);
  const int n = static_cast<int>(m.rows());
  MatrixXd result = MatrixXd::Identity(n, n);
  MatrixXd term = MatrixXd::Identity(n, n);
  for (int k = 1; k <= 24; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18 * result.cwiseAbs().maxCoeff()) {
      break;
    }
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  CheckFinite(result, "matrix exponential");
  return result;
}

// Closed-form integral of Phi(s) L Phi(s)^T over [0, dt] for M^3 = 0.
MatrixXd NilpotentNoiseCov(const MatrixXd& m, const MatrixXd& l, double dt) {
  const MatrixXd m2 = m * m;
  const double dt2 = dt * dt;
  const double dt3 = dt2 * dt;
  const double dt4 = dt3 * dt;
  const double dt5 = dt4 * dt;
  MatrixXd q = l * dt;
  q += (m * l + l * m.transpose()) * (dt2 / 2.0);
  q += (m * l * m.transpose() +
        0.5 * (m2 * l + l * m2.transpose())) * (dt3 / 3.0);
  q += (m2 * l * m.transpose() + m * l * m2.transpose()) * (dt4 / 8.0);
  q += (m2 * l * m2.transpose()) * (dt5 / 20.0);
  return q;
}

MatrixXd QuadratureNoiseCov(const LinearSdeModel& model, double dt) {
  static constexpr std::array<double, 5> kNodes = {
      -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
      0.9061798459386640};
  static constexpr std::array<double, 5> kWeights = {
      0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
      0.4786286704993665, 0.2369268850561891};
  constexpr int kPanels = 32;
  const MatrixXd l = model.AugmentedDiffusion();
  const int n = static_cast<int>(l.rows());
  MatrixXd q = MatrixXd::Zero(n, n);
  const double h = dt / kPanels;
  for (int p = 0; p < kPanels; ++p) {
    const double mid = (p + 0.5) * h;
    for (size_t k = 0; k < kNodes.size(); ++k) {
      const double s = mid + 0.5 * h * kNodes[k];
      const MatrixXd phi = TransitionMatrix(model, s);
      q += (0.5 * h * kWeights[k]) * phi * l * phi.transpose();
    }
  }
  return 0.5 * (q + q.transpose());
}

void RequireShape(const MatrixXd& m, int rows, int cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream msg;
    msg << name << " must be " << rows << "x" << cols << ", got " << m.rows()
        << "x" << m.cols();
    throw ConfigError(msg.str());
  }
}

void RequirePsd(const MatrixXd& m, bool strict, const char* name) {
  const double mag = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  if (m.size() && (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * mag) {
    throw ConfigError(std::string(name) + " must be symmetric");
  }
  if (m.size() == 0) return;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m);
  const double min_eig = eig.eigenvalues().minCoeff();
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (strict ? min_eig <= 0.0 : min_eig < -1e-12 * scale) {
    throw ConfigError(std::string(name) +
                      (strict ? " must be positive definite"
                              : " must be positive semi-definite"));
  }
}

}  // namespace

AugmentedState AugmentedState::FromParts(const VectorXd& position,
                                         const VectorXd& velocity,
                                         const VectorXd& control,
                                         double time) {
  AugmentedState s;
  const auto d = position.size();
  s.value.resize(3 * d);
  s.value << position, velocity, control;
  s.time = time;
  return s;
}

LinearSdeModel LinearSdeModel::DoubleIntegrator(int dof, double qx, double qu,
                                                double sigma_meas) {
  if (dof < 1) throw ConfigError("dof must be positive");
  if (!(qx >= 0.0) || !(qu > 0.0) || !(sigma_meas > 0.0)) {
    throw ConfigError("need qx >= 0, qu > 0 and sigma_meas > 0");
  }
  const MatrixXd eye = MatrixXd::Identity(dof, dof);
  LinearSdeModel m;
  m.dof = dof;
  m.state_drift = MatrixXd::Zero(2 * dof, 2 * dof);
  m.state_drift.topRightCorner(dof, dof) = eye;
  m.control_input = MatrixXd::Zero(2 * dof, dof);
  m.control_input.bottomRows(dof) = eye;
  m.control_drift = MatrixXd::Zero(dof, dof);
  m.state_diffusion = MatrixXd::Zero(2 * dof, 2 * dof);
  m.state_diffusion.bottomRightCorner(dof, dof) = qx * eye;
  m.control_diffusion = qu * eye;
  m.observation = MatrixXd::Identity(2 * dof, 2 * dof);
  m.observation_noise =
      sigma_meas * sigma_meas * MatrixXd::Identity(2 * dof, 2 * dof);
  return m;
}

MatrixXd LinearSdeModel::AugmentedDrift() const {
  MatrixXd m = MatrixXd::Zero(3 * dof, 3 * dof);
  m.topLeftCorner(2 * dof, 2 * dof) = state_drift;
  m.topRightCorner(2 * dof, dof) = control_input;
  m.bottomRightCorner(dof, dof) = control_drift;
  return m;
}

MatrixXd LinearSdeModel::AugmentedDiffusion() const {
  MatrixXd l = MatrixXd::Zero(3 * dof, 3 * dof);
  l.topLeftCorner(2 * dof, 2 * dof) = state_diffusion;
  l.bottomRightCorner(dof, dof) = control_diffusion;
  return l;
}

void LinearSdeModel::Validate() const {
  if (dof < 1) throw ConfigError("dof must be positive");
  RequireShape(state_drift, 2 * dof, 2 * dof, "state_drift");
  RequireShape(control_input, 2 * dof, dof, "control_input");
  RequireShape(control_drift, dof, dof, "control_drift");
  RequireShape(state_diffusion, 2 * dof, 2 * dof, "state_diffusion");
  RequireShape(control_diffusion, dof, dof, "control_diffusion");
  RequireShape(observation, 2 * dof, 2 * dof, "observation");
  RequireShape(observation_noise, 2 * dof, 2 * dof, "observation_noise");
  RequirePsd(state_diffusion, false, "state_diffusion");
  RequirePsd(control_diffusion, false, "control_diffusion");
  RequirePsd(observation_noise, true, "observation_noise");
}

MatrixXd TransitionMatrix(const LinearSdeModel& model, double dt) {
  if (!(dt >= 0.0)) throw DomainError("transition matrix: dt must be >= 0");
  const MatrixXd m = model.AugmentedDrift();
  const auto n = m.rows();
  if (dt == 0.0) return MatrixXd::Identity(n, n);
  if (IsNilpotentIndex3(m)) {
    return MatrixXd::Identity(n, n) + m * dt + (m * m) * (0.5 * dt * dt);
  }
  return ExpScalingSquaring(m * dt);
}

MatrixXd ProcessNoiseCov(const LinearSdeModel& model, double dt) {
  if (!(dt >= 0.0)) throw DomainError("process noise: dt must be >= 0");
  const MatrixXd m = model.AugmentedDrift();
  if (dt == 0.0) return MatrixXd::Zero(m.rows(), m.cols());
  MatrixXd q = IsNilpotentIndex3(m)
                   ? NilpotentNoiseCov(m, model.AugmentedDiffusion(), dt)
                   : QuadratureNoiseCov(model, dt);
  CheckFinite(q, "process noise covariance");
  return q;
}

DiscreteStateDynamics DiscretizeState(const LinearSdeModel& model, double dt) {
  LinearSdeModel held = model;
  held.control_drift.setZero();
  held.control_diffusion.setZero();
  const int n = 2 * model.dof;
  const MatrixXd phi = TransitionMatrix(held, dt);
  const MatrixXd q = ProcessNoiseCov(held, dt);
  return DiscreteStateDynamics{phi.topLeftCorner(n, n),
                               phi.topRightCorner(n, model.dof),
                               q.topLeftCorner(n, n)};
}

GpInterval::GpInterval(const LinearSdeModel& model, double dt) : dt_(dt) {
  if (!(dt > 0.0)) throw DomainError("GP interval: dt must be > 0");
  transition_ = TransitionMatrix(model, dt);
  noise_cov_ = ProcessNoiseCov(model, dt);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(noise_cov_);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  condition_ = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(condition_ <= kMaxCondition)) {
    std::ostringstream msg;
    msg << "GP process noise covariance is singular (condition "
        << condition_ << " at dt=" << dt << "); check Q_x, Q_u";
    throw NumericalError(msg.str());
  }
  Eigen::LLT<MatrixXd> llt(noise_cov_);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("GP process noise covariance: Cholesky failed");
  }
  noise_info_ = llt.solve(MatrixXd::Identity(noise_cov_.rows(),
                                             noise_cov_.cols()));
  noise_info_ = 0.5 * (noise_info_ + noise_info_.transpose());
}

WeightedResidual GpPriorResidual(const GpInterval& interval,
                                 const AugmentedState& xi_i,
                                 const AugmentedState& xi_j) {
  const auto n = interval.transition().rows();
  if (xi_i.value.size() != n || xi_j.value.size() != n) {
    throw ConfigError("GP prior residual: state dimension mismatch");
  }
  if (std::abs((xi_j.time - xi_i.time) - interval.dt()) > kTimeTolerance) {
    throw ConfigError("GP prior residual: states are not dt apart");
  }
  return WeightedResidual{interval.transition() * xi_i.value - xi_j.value,
                          interval.noise_info()};
}

GpInterpolator::GpInterpolator(const LinearSdeModel& model,
                               const GpInterval& interval, double tau)
    : tau_(tau) {
  const double dt = interval.dt();
  if (!(tau >= 0.0 && tau <= dt)) {
    throw DomainError("GP interpolation: tau outside [0, dt]");
  }
  const auto n = interval.transition().rows();
  if (tau == 0.0) {
    lambda_ = MatrixXd::Identity(n, n);
    psi_ = MatrixXd::Zero(n, n);
    return;
  }
  if (tau == dt) {
    lambda_ = MatrixXd::Zero(n, n);
    psi_ = MatrixXd::Identity(n, n);
    return;
  }
  const MatrixXd q_tau = ProcessNoiseCov(model, tau);
  const MatrixXd phi_rest = TransitionMatrix(model, dt - tau);
  psi_ = q_tau * phi_rest.transpose() * interval.noise_info();
  lambda_ = TransitionMatrix(model, tau) - psi_ * interval.transition();
}

Interpolation GpInterpolate(const LinearSdeModel& model,
                            const GpInterval& interval,
                            const AugmentedState& xi_i,
                            const AugmentedState& xi_j, double tau) {
  const auto n = interval.transition().rows();
  if (xi_i.value.size() != n || xi_j.value.size() != n) {
    throw ConfigError("GP interpolation: state dimension mismatch");
  }
  GpInterpolator interp(model, interval, tau);
  Interpolation out;
  out.state.value = interp.Interpolate(xi_i.value, xi_j.value);
  out.state.time = xi_i.time + tau;
  out.jacobian_i = interp.lambda();
  out.jacobian_j = interp.psi();
  return out;
}

MatrixXd BridgeCovariance(const LinearSdeModel& model,
                          const GpInterval& interval, double tau_a,
                          double tau_b) {
  if (!(0.0 <= tau_a && tau_a <= tau_b && tau_b <= interval.dt())) {
    throw DomainError("bridge covariance: need 0 <= tau_a <= tau_b <= dt");
  }
  const auto n = interval.transition().rows();
  const GpInterpolator ia(model, interval, tau_a);
  const GpInterpolator ib(model, interval, tau_b);
  const MatrixXd qd = interval.noise_cov();
  const MatrixXd qa = ProcessNoiseCov(model, tau_a);
  const MatrixXd qb = ProcessNoiseCov(model, tau_b);
  // Unconditioned noise covariances, then subtract the endpoint information.
  const MatrixXd kab = qa * TransitionMatrix(model, tau_b - tau_a).transpose();
  MatrixXd c(2 * n, 2 * n);
  c.topLeftCorner(n, n) = qa - ia.psi() * qd * ia.psi().transpose();
  c.topRightCorner(n, n) = kab - ia.psi() * qd * ib.psi().transpose();
  c.bottomLeftCorner(n, n) = c.topRightCorner(n, n).transpose();
  c.bottomRightCorner(n, n) = qb - ib.psi() * qd * ib.psi().transpose();
  return 0.5 * (c + c.transpose());
}

}  // namespace pipc
