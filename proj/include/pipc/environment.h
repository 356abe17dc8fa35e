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

#ifndef PIPC_ENVIRONMENT_H_
#define PIPC_ENVIRONMENT_H_

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace pipc {

// Axis-aligned square obstacle.
struct Obstacle {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  double half_extent = 0.5;
};

// Bounded arena [0, width] x [0, height] with moving obstacles.
struct Environment2D {
  double width = 30.0;
  double height = 20.0;
  std::vector<Obstacle> obstacles;
  double robot_radius = 0.5;
  double sensor_half_width = 2.5;
  double max_speed = 1.3;  // per axis
  double max_accel = 2.5;  // per axis

  bool Contains(const Obstacle& obstacle) const;
  // True iff the obstacle square intersects the sensor square around the
  // robot.
  bool IsVisible(const Obstacle& obstacle,
                 const Eigen::Vector2d& robot_position) const;
};

// Signed distance from a point to the obstacle square; negative inside.
double SignedDistanceToBox(const Eigen::Vector2d& point,
                           const Obstacle& obstacle);

using AccelerationSampler = std::function<Eigen::Vector2d()>;

// One step of the obstacle jump process: accelerate, clamp speed, move,
// reflect off the arena walls.
void StepObstacles(Environment2D* env, double dt,
                   const AccelerationSampler& sample_accel);
// Accelerations uniform in [-max_accel, max_accel]^2.
void StepObstacles(Environment2D* env, double dt, std::mt19937_64& rng);

// Draws `count` obstacles uniformly over the arena, at rest. Positions
// within `exclusion` of `start`, or overlapping the robot disc at `goal`,
// are resampled.
void PlaceObstacles(Environment2D* env, int count,
                    const Eigen::Vector2d& start, const Eigen::Vector2d& goal,
                    double exclusion, std::mt19937_64& rng);

// Disc (robot_radius) vs. ground-truth obstacle squares.
bool CheckCollision(const Environment2D& env,
                    const Eigen::Vector2d& robot_position);

// Regular grid of signed distances sampled at nodes
// origin + (col, row) * cell_size, queried by bilinear interpolation.
class SignedDistanceField {
 public:
  // Value stored when no obstacle is included.
  static constexpr double kFreeSpace = 1e3;

  SignedDistanceField(Eigen::Vector2d origin, double cell_size, int cols,
                      int rows, std::vector<double> data);

  const Eigen::Vector2d& origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  int cols() const { return cols_; }
  int rows() const { return rows_; }
  double At(int col, int row) const { return data_[row * cols_ + col]; }
  Eigen::AlignedBox2d extent() const;
  bool Contains(const Eigen::Vector2d& p) const;

  struct Sample {
    double distance;
    Eigen::Vector2d gradient;  // exact gradient of the interpolant
  };
  // Throws DomainError outside the field extent.
  Sample Query(const Eigen::Vector2d& p) const;

 private:
  Eigen::Vector2d origin_;
  double cell_size_;
  int cols_;
  int rows_;
  std::vector<double> data_;
};

struct SdfOptions {
  bool visible_only = true;
  Eigen::Vector2d robot_position = Eigen::Vector2d::Zero();
  double cell_size = 0.05;
  // Padding around the arena when no explicit extent is given.
  double margin = 2.0;
  std::optional<Eigen::AlignedBox2d> extent;
};

SignedDistanceField BuildSdf(const Environment2D& env,
                             const SdfOptions& options);

struct HingeCost {
  double cost;
  Eigen::Vector2d gradient;
};

// Clearance z = sdf(p) - robot_radius; cost eps - z when z < eps, else 0.
// Gradient is zero on the inactive side and at the kink.
HingeCost ComputeHingeCost(const SignedDistanceField& sdf,
                           const Eigen::Vector2d& position,
                           double robot_radius, double eps);

}  // namespace pipc

#endif  // PIPC_ENVIRONMENT_H_
