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

#include <doctest.h>

#include <random>

#include "oracles.h"
#include "pipc/errors.h"
#include "pipc/gp_model.h"

namespace pipc {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

LinearSdeModel Benchmark(double qx = 0.01) {
  return LinearSdeModel::DoubleIntegrator(2, qx, 10.0, 0.01);
}

// Damped model: the augmented drift is not nilpotent, so the library takes
// its general-purpose paths.
LinearSdeModel Damped() {
  LinearSdeModel m = LinearSdeModel::DoubleIntegrator(1, 0.3, 2.0, 0.1);
  m.state_drift(1, 1) = -0.7;
  m.control_drift(0, 0) = -1.5;
  return m;
}

TEST_CASE("transition matrix matches the matrix exponential") {
  for (double dt : {0.0, 0.01, 0.2, 1.7}) {
    const LinearSdeModel m = Benchmark();
    CHECK(oracle::RelativeError(TransitionMatrix(m, dt),
                                oracle::Transition(m, dt)) < 1e-13);
    const LinearSdeModel d = Damped();
    CHECK(oracle::RelativeError(TransitionMatrix(d, dt),
                                oracle::Transition(d, dt)) < 1e-12);
  }
}

TEST_CASE("process noise covariance matches quadrature") {
  for (double qx : {0.0, 0.01, 0.07}) {
    for (double dt : {0.01, 0.2, 2.0}) {
      const LinearSdeModel m = Benchmark(qx);
      CHECK(oracle::RelativeError(ProcessNoiseCov(m, dt),
                                  oracle::NoiseCov(m, dt)) < 1e-8);
    }
  }
  const LinearSdeModel d = Damped();
  CHECK(oracle::RelativeError(ProcessNoiseCov(d, 0.4),
                              oracle::NoiseCov(d, 0.4)) < 1e-8);
  CHECK(ProcessNoiseCov(Benchmark(), 0.0).isZero(0.0));
}

TEST_CASE("benchmark noise covariance has the known u-block and leading terms") {
  const double dt = 0.2, qu = 10.0;
  const MatrixXd q = ProcessNoiseCov(Benchmark(0.0), dt);
  // Integrated Brownian control: u, v, p variances grow as dt, dt^3/3,
  // dt^5/20.
  CHECK(q(4, 4) == doctest::Approx(qu * dt).epsilon(1e-14));
  CHECK(q(2, 2) == doctest::Approx(qu * dt * dt * dt / 3).epsilon(1e-14));
  CHECK(q(0, 0) ==
        doctest::Approx(qu * std::pow(dt, 5) / 20).epsilon(1e-12));
  CHECK(q(0, 4) == doctest::Approx(qu * dt * dt * dt / 6).epsilon(1e-13));
}

TEST_CASE("transition and noise compose over adjacent intervals") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double a = u(rng), b = u(rng);
    for (const LinearSdeModel& m : {Benchmark(0.04), Damped()}) {
      const MatrixXd pa = TransitionMatrix(m, a), pb = TransitionMatrix(m, b);
      CHECK(oracle::RelativeError(pb * pa, TransitionMatrix(m, a + b)) <
            1e-12);
      const MatrixXd qab = pb * ProcessNoiseCov(m, a) * pb.transpose() +
                           ProcessNoiseCov(m, b);
      CHECK(oracle::RelativeError(qab, ProcessNoiseCov(m, a + b)) < 1e-9);
    }
  }
}

TEST_CASE("process noise is symmetric positive semi-definite") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1e-3, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    const MatrixXd q = ProcessNoiseCov(Benchmark(0.07), u(rng));
    CHECK((q - q.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(q);
    CHECK(eig.eigenvalues().minCoeff() > -1e-14 * eig.eigenvalues().maxCoeff());
  }
}

TEST_CASE("negative durations are rejected") {
  CHECK_THROWS_AS(TransitionMatrix(Benchmark(), -0.1), DomainError);
  CHECK_THROWS_AS(ProcessNoiseCov(Benchmark(), -0.1), DomainError);
  CHECK_THROWS_AS(GpInterval(Benchmark(), 0.0), DomainError);
}

TEST_CASE("an ill-conditioned interval is reported") {
  // Without velocity noise the position block scales as dt^5 against dt for
  // the control block.
  CHECK_THROWS_AS(GpInterval(Benchmark(0.0), 1e-4), NumericalError);
  const GpInterval ok(Benchmark(), 0.2);
  CHECK(ok.condition() < GpInterval::kMaxCondition);
  CHECK(oracle::RelativeError(ok.noise_info() * ok.noise_cov(),
                              MatrixXd::Identity(6, 6)) < 1e-8);
}

TEST_CASE("model validation catches inconsistent matrices") {
  LinearSdeModel m = Benchmark();
  CHECK_NOTHROW(m.Validate());
  m.state_diffusion(0, 3) = 1.0;
  CHECK_THROWS_AS(m.Validate(), ConfigError);
  m = Benchmark();
  m.control_diffusion(0, 0) = -1.0;
  CHECK_THROWS_AS(m.Validate(), ConfigError);
  m = Benchmark();
  m.control_input = MatrixXd::Zero(3, 2);
  CHECK_THROWS_AS(m.Validate(), ConfigError);
  CHECK_THROWS_AS(LinearSdeModel::DoubleIntegrator(0, 0.1, 1.0, 0.1),
                  ConfigError);
  CHECK_THROWS_AS(LinearSdeModel::DoubleIntegrator(2, -0.1, 1.0, 0.1),
                  ConfigError);
}

TEST_CASE("zero-order hold matches the exponential of the input-augmented drift") {
  for (const LinearSdeModel& m : {Benchmark(0.07), Damped()}) {
    const int sd = 2 * m.dof;
    const double dt = 0.35;
    MatrixXd aug = MatrixXd::Zero(sd + m.dof, sd + m.dof);
    aug.topLeftCorner(sd, sd) = m.state_drift;
    aug.topRightCorner(sd, m.dof) = m.control_input;
    const MatrixXd e = oracle::Expm(aug * dt);
    const DiscreteStateDynamics zoh = DiscretizeState(m, dt);
    CHECK(oracle::RelativeError(zoh.transition, e.topLeftCorner(sd, sd)) <
          1e-12);
    CHECK(oracle::RelativeError(zoh.input, e.topRightCorner(sd, m.dof)) <
          1e-12);
    LinearSdeModel x_only = m;
    x_only.control_diffusion.setZero();
    CHECK(oracle::RelativeError(
              zoh.noise_cov,
              oracle::NoiseCov(x_only, dt).topLeftCorner(sd, sd)) < 1e-8);
  }
}

TEST_CASE("GP prior residual is zero along the noise-free mean") {
  const LinearSdeModel m = Benchmark();
  const GpInterval interval(m, 0.2);
  AugmentedState a = AugmentedState::FromParts(
      VectorXd::Constant(2, 1.0), VectorXd::Constant(2, 0.5),
      VectorXd::Constant(2, -2.0), 3.0);
  AugmentedState b{interval.transition() * a.value, 3.2};
  const WeightedResidual r = GpPriorResidual(interval, a, b);
  CHECK(r.residual.norm() < 1e-14);
  CHECK(r.Cost() == doctest::Approx(0.0));
  b.time = 3.3;
  CHECK_THROWS_AS(GpPriorResidual(interval, a, b), ConfigError);
  b.time = 3.2;
  b.value.conservativeResize(3);
  CHECK_THROWS_AS(GpPriorResidual(interval, a, b), ConfigError);
}

TEST_CASE("GP interpolation equals dense conditioning on both endpoints") {
  std::mt19937_64 rng(21);
  const double dt = 0.2;
  for (const LinearSdeModel& m : {Benchmark(0.01), Damped()}) {
    const int n = 3 * m.dof;
    const GpInterval interval(m, dt);
    for (double tau : {0.0, 0.01, 0.07, 0.19, 0.2}) {
      const VectorXd xi = oracle::RandomVector(n, rng);
      const VectorXd xj = oracle::RandomVector(n, rng);
      const Interpolation got = GpInterpolate(
          m, interval, AugmentedState{xi, 1.0}, AugmentedState{xj, 1.0 + dt},
          tau);
      CHECK(got.state.time == doctest::Approx(1.0 + tau));
      if (tau == 0.0) {
        CHECK((got.state.value - xi).norm() < 1e-12);
        continue;
      }
      if (tau == dt) {
        CHECK((got.state.value - xj).norm() < 1e-9);
        continue;
      }
      const oracle::Gaussian joint = oracle::PriorJoint(
          m, {0.0, tau, dt}, VectorXd::Zero(n), MatrixXd::Identity(n, n));
      std::vector<int> obs = oracle::Range(0, n);
      for (int k = 2 * n; k < 3 * n; ++k) obs.push_back(k);
      VectorXd value(2 * n);
      value << xi, xj;
      const oracle::Gaussian cond = oracle::Condition(joint, obs, value);
      CHECK((got.state.value - cond.mean).norm() <
            1e-9 * (1.0 + cond.mean.norm()));
    }
  }
}

TEST_CASE("interpolation maps reproduce the propagated prior mean") {
  const LinearSdeModel m = Benchmark();
  const GpInterval interval(m, 0.2);
  const GpInterpolator interp(m, interval, 0.05);
  const MatrixXd phi_tau = TransitionMatrix(m, 0.05);
  // Lambda + Psi Phi(dt) = Phi(tau).
  CHECK(oracle::RelativeError(
            interp.lambda() + interp.psi() * interval.transition(), phi_tau) <
        1e-10);
  CHECK_THROWS_AS(GpInterpolator(m, interval, -0.01), DomainError);
  CHECK_THROWS_AS(GpInterpolator(m, interval, 0.21), DomainError);
}

TEST_CASE("bridge covariance equals dense conditioning") {
  const double dt = 0.2;
  for (const LinearSdeModel& m : {Benchmark(0.04), Damped()}) {
    const int n = 3 * m.dof;
    const GpInterval interval(m, dt);
    const double pairs[][2] = {{0.03, 0.11}, {0.05, 0.05}, {0.0, 0.1},
                               {0.1, 0.2}};
    for (const auto& p : pairs) {
      const MatrixXd got = BridgeCovariance(m, interval, p[0], p[1]);
      REQUIRE(got.rows() == 2 * n);
      const double ta = std::max(p[0], 1e-9);
      const double tb = std::max(p[1], ta + 1e-9);
      const oracle::Gaussian joint = oracle::PriorJoint(
          m, {0.0, ta, tb, dt}, VectorXd::Zero(n), MatrixXd::Identity(n, n));
      std::vector<int> obs = oracle::Range(0, n);
      for (int k = 3 * n; k < 4 * n; ++k) obs.push_back(k);
      const oracle::Gaussian cond =
          oracle::Condition(joint, obs, VectorXd::Zero(2 * n));
      if (p[0] > 0 && p[1] < dt && p[0] != p[1]) {
        CHECK((got - cond.cov).cwiseAbs().maxCoeff() <
              1e-9 * (1.0 + cond.cov.cwiseAbs().maxCoeff()));
      }
      // Symmetric and PSD in every case, zero at pinned endpoints.
      CHECK((got - got.transpose()).cwiseAbs().maxCoeff() < 1e-14);
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(got);
      CHECK(eig.eigenvalues().minCoeff() > -1e-12);
      if (p[0] == 0.0) CHECK(got.topLeftCorner(n, n).cwiseAbs().maxCoeff() < 1e-12);
      if (p[1] == dt) CHECK(got.bottomRightCorner(n, n).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  CHECK_THROWS_AS(BridgeCovariance(Benchmark(), GpInterval(Benchmark(), dt),
                                   0.1, 0.05),
                  DomainError);
}

TEST_CASE("augmented state accessors split position, velocity and control") {
  const AugmentedState s = AugmentedState::FromParts(
      Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 4), Eigen::Vector2d(5, 6), 0.5);
  CHECK(s.dof() == 2);
  CHECK(s.position() == Eigen::Vector2d(1, 2));
  CHECK(s.velocity() == Eigen::Vector2d(3, 4));
  CHECK(s.control() == Eigen::Vector2d(5, 6));
  CHECK(s.state().size() == 4);
  const StateLayout layout{2};
  CHECK(layout.dim() == 6);
  CHECK(layout.control_offset() == 4);
}

}  // namespace
}  // namespace pipc
