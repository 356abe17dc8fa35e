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

#include "pipc/environment.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pipc/errors.h"

namespace pipc {

using Eigen::Vector2d;

bool Environment2D::Contains(const Obstacle& o) const {
  return o.center.x() >= o.half_extent && o.center.x() <= width - o.half_extent &&
         o.center.y() >= o.half_extent && o.center.y() <= height - o.half_extent;
}

bool Environment2D::IsVisible(const Obstacle& o,
                              const Vector2d& robot_position) const {
  const Vector2d gap = (o.center - robot_position).cwiseAbs();
  const double reach = sensor_half_width + o.half_extent;
  return gap.x() <= reach && gap.y() <= reach;
}

double SignedDistanceToBox(const Vector2d& point, const Obstacle& o) {
  const Vector2d q = (point - o.center).cwiseAbs() -
                     Vector2d::Constant(o.half_extent);
  const double outside = q.cwiseMax(0.0).norm();
  const double inside = std::min(std::max(q.x(), q.y()), 0.0);
  return outside + inside;
}

namespace {

void Reflect(double lo, double hi, double* c, double* v) {
  if (*c < lo) {
    *c = 2.0 * lo - *c;
    *v = -*v;
  } else if (*c > hi) {
    *c = 2.0 * hi - *c;
    *v = -*v;
  }
  *c = std::clamp(*c, lo, hi);
}

}  // namespace

void StepObstacles(Environment2D* env, double dt,
                   const AccelerationSampler& sample_accel) {
  if (!(dt > 0.0)) throw DomainError("StepObstacles: dt must be > 0");
  for (auto& o : env->obstacles) {
    const Vector2d a = sample_accel();
    o.velocity = (o.velocity + a * dt).cwiseMax(-env->max_speed)
                     .cwiseMin(env->max_speed);
    o.center += o.velocity * dt;
    Reflect(o.half_extent, env->width - o.half_extent, &o.center.x(),
            &o.velocity.x());
    Reflect(o.half_extent, env->height - o.half_extent, &o.center.y(),
            &o.velocity.y());
  }
}

void StepObstacles(Environment2D* env, double dt, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> accel(-env->max_accel,
                                               env->max_accel);
  StepObstacles(env, dt, [&] {
    const double ax = accel(rng);
    const double ay = accel(rng);
    return Vector2d(ax, ay);
  });
}

void PlaceObstacles(Environment2D* env, int count, const Vector2d& start,
                    const Vector2d& goal, double exclusion,
                    std::mt19937_64& rng) {
  env->obstacles.clear();
  for (int k = 0; k < count; ++k) {
    Obstacle o;
    std::uniform_real_distribution<double> ux(o.half_extent,
                                              env->width - o.half_extent);
    std::uniform_real_distribution<double> uy(o.half_extent,
                                              env->height - o.half_extent);
    for (;;) {
      const double x = ux(rng);
      const double y = uy(rng);
      o.center = Vector2d(x, y);
      if ((o.center - start).norm() < exclusion) continue;
      if (SignedDistanceToBox(goal, o) < env->robot_radius) continue;
      break;
    }
    env->obstacles.push_back(o);
  }
}

bool CheckCollision(const Environment2D& env, const Vector2d& robot_position) {
  for (const auto& o : env.obstacles) {
    if (SignedDistanceToBox(robot_position, o) < env.robot_radius) return true;
  }
  return false;
}

SignedDistanceField::SignedDistanceField(Vector2d origin, double cell_size,
                                         int cols, int rows,
                                         std::vector<double> data)
    : origin_(std::move(origin)),
      cell_size_(cell_size),
      cols_(cols),
      rows_(rows),
      data_(std::move(data)) {
  if (!(cell_size > 0.0) || cols < 2 || rows < 2 ||
      data_.size() != static_cast<size_t>(cols) * rows) {
    throw ConfigError("signed distance field: invalid grid");
  }
}

Eigen::AlignedBox2d SignedDistanceField::extent() const {
  return Eigen::AlignedBox2d(
      origin_, origin_ + cell_size_ * Vector2d(cols_ - 1, rows_ - 1));
}

bool SignedDistanceField::Contains(const Vector2d& p) const {
  const Vector2d f = (p - origin_) / cell_size_;
  return f.x() >= 0.0 && f.y() >= 0.0 && f.x() <= cols_ - 1 &&
         f.y() <= rows_ - 1;
}

SignedDistanceField::Sample SignedDistanceField::Query(const Vector2d& p) const {
  if (!Contains(p)) throw DomainError("signed distance field: query outside extent");
  const Vector2d f = (p - origin_) / cell_size_;
  const int c = std::min(static_cast<int>(f.x()), cols_ - 2);
  const int r = std::min(static_cast<int>(f.y()), rows_ - 2);
  const double tx = f.x() - c;
  const double ty = f.y() - r;
  const double v00 = At(c, r);
  const double v10 = At(c + 1, r);
  const double v01 = At(c, r + 1);
  const double v11 = At(c + 1, r + 1);
  Sample s;
  s.distance = (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 +
               (1 - tx) * ty * v01 + tx * ty * v11;
  s.gradient.x() = ((1 - ty) * (v10 - v00) + ty * (v11 - v01)) / cell_size_;
  s.gradient.y() = ((1 - tx) * (v01 - v00) + tx * (v11 - v10)) / cell_size_;
  return s;
}

SignedDistanceField BuildSdf(const Environment2D& env,
                             const SdfOptions& options) {
  if (!(options.cell_size > 0.0)) {
    throw ConfigError("BuildSdf: cell_size must be > 0");
  }
  const Eigen::AlignedBox2d box =
      options.extent.value_or(Eigen::AlignedBox2d(
          Vector2d(-options.margin, -options.margin),
          Vector2d(env.width + options.margin, env.height + options.margin)));
  const double h = options.cell_size;
  const int cols =
      std::max(2, static_cast<int>(std::ceil(box.sizes().x() / h - 1e-9)) + 1);
  const int rows =
      std::max(2, static_cast<int>(std::ceil(box.sizes().y() / h - 1e-9)) + 1);
  std::vector<double> data(static_cast<size_t>(cols) * rows,
                           SignedDistanceField::kFreeSpace);
  const Vector2d origin = box.min();
  for (const auto& o : env.obstacles) {
    if (options.visible_only && !env.IsVisible(o, options.robot_position)) {
      continue;
    }
    for (int r = 0; r < rows; ++r) {
      const double y = origin.y() + r * h;
      double* row = data.data() + static_cast<size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) {
        const Vector2d p(origin.x() + c * h, y);
        row[c] = std::min(row[c], SignedDistanceToBox(p, o));
      }
    }
  }
  return SignedDistanceField(origin, h, cols, rows, std::move(data));
}

HingeCost ComputeHingeCost(const SignedDistanceField& sdf,
                           const Vector2d& position, double robot_radius,
                           double eps) {
  const auto sample = sdf.Query(position);
  const double clearance = sample.distance - robot_radius;
  if (clearance < eps) {
    return HingeCost{eps - clearance, -sample.gradient};
  }
  return HingeCost{0.0, Vector2d::Zero()};
}

}  // namespace pipc
