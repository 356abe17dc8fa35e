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

#include "pipc/banded.h"

#include <string>

#include "pipc/errors.h"

namespace pipc {

using Eigen::MatrixXd;
using Eigen::VectorXd;

BlockTridiagonal::BlockTridiagonal(int num_blocks, int block_size)
    : num_blocks(num_blocks),
      block_size(block_size),
      diag(num_blocks, MatrixXd::Zero(block_size, block_size)),
      lower(num_blocks > 0 ? num_blocks - 1 : 0,
            MatrixXd::Zero(block_size, block_size)) {}

MatrixXd BlockTridiagonal::ToDense() const {
  const int n = block_size;
  MatrixXd dense = MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < num_blocks; ++i) {
    dense.block(i * n, i * n, n, n) = diag[i];
    if (i + 1 < num_blocks) {
      dense.block((i + 1) * n, i * n, n, n) = lower[i];
      dense.block(i * n, (i + 1) * n, n, n) = lower[i].transpose();
    }
  }
  return dense;
}

VectorXd BlockTridiagonal::Multiply(const VectorXd& x) const {
  const int n = block_size;
  VectorXd y = VectorXd::Zero(dim());
  for (int i = 0; i < num_blocks; ++i) {
    y.segment(i * n, n) += diag[i] * x.segment(i * n, n);
    if (i + 1 < num_blocks) {
      y.segment((i + 1) * n, n) += lower[i] * x.segment(i * n, n);
      y.segment(i * n, n) += lower[i].transpose() * x.segment((i + 1) * n, n);
    }
  }
  return y;
}

void BlockTridiagonal::AddToDiagonal(double value) {
  for (auto& d : diag) d.diagonal().array() += value;
}

BandedCholesky::BandedCholesky(const BlockTridiagonal& a)
    : n_(a.block_size), num_blocks_(a.num_blocks) {
  pivot_.reserve(num_blocks_);
  sub_.reserve(num_blocks_ > 0 ? num_blocks_ - 1 : 0);
  MatrixXd schur = num_blocks_ > 0 ? a.diag[0] : MatrixXd();
  for (int i = 0; i < num_blocks_; ++i) {
    Eigen::LLT<MatrixXd> llt(schur);
    if (llt.info() != Eigen::Success || !llt.matrixL().toDenseMatrix().allFinite()) {
      throw RankDeficientError("banded Cholesky: pivot block " +
                               std::to_string(i) + " not positive definite");
    }
    pivot_.push_back(llt.matrixL());
    if (i + 1 < num_blocks_) {
      // S = B L^-T  <=>  L S^T = B^T
      MatrixXd s = pivot_.back()
                       .triangularView<Eigen::Lower>()
                       .solve(a.lower[i].transpose())
                       .transpose();
      schur = a.diag[i + 1] - s * s.transpose();
      sub_.push_back(std::move(s));
    }
  }
}

VectorXd BandedCholesky::Solve(const VectorXd& rhs) const {
  const int n = n_;
  VectorXd y(rhs.size());
  for (int i = 0; i < num_blocks_; ++i) {
    VectorXd b = rhs.segment(i * n, n);
    if (i > 0) b -= sub_[i - 1] * y.segment((i - 1) * n, n);
    y.segment(i * n, n) = pivot_[i].triangularView<Eigen::Lower>().solve(b);
  }
  VectorXd x(rhs.size());
  for (int i = num_blocks_ - 1; i >= 0; --i) {
    VectorXd b = y.segment(i * n, n);
    if (i + 1 < num_blocks_) {
      b -= sub_[i].transpose() * x.segment((i + 1) * n, n);
    }
    x.segment(i * n, n) =
        pivot_[i].transpose().triangularView<Eigen::Upper>().solve(b);
  }
  return x;
}

// Backward recurrence on L^T Sigma = L^-1:
//   Sigma_{i,i+1} = -L_i^-T S_i^T Sigma_{i+1,i+1}
//   Sigma_{i,i}   = L_i^-T L_i^-1 - L_i^-T S_i^T Sigma_{i+1,i}
void BandedCholesky::Covariances(std::vector<MatrixXd>* diag,
                                 std::vector<MatrixXd>* upper) const {
  diag->assign(num_blocks_, MatrixXd());
  upper->assign(num_blocks_ > 0 ? num_blocks_ - 1 : 0, MatrixXd());
  const MatrixXd eye = MatrixXd::Identity(n_, n_);
  for (int i = num_blocks_ - 1; i >= 0; --i) {
    const MatrixXd l_inv =
        pivot_[i].triangularView<Eigen::Lower>().solve(eye);
    MatrixXd base = l_inv.transpose() * l_inv;
    if (i + 1 < num_blocks_) {
      const MatrixXd lt_inv_st = l_inv.transpose() * sub_[i].transpose();
      (*upper)[i] = -lt_inv_st * (*diag)[i + 1];
      base -= lt_inv_st * (*upper)[i].transpose();
    }
    (*diag)[i] = 0.5 * (base + base.transpose());
  }
}

std::vector<MatrixXd> BandedCholesky::Marginals() const {
  std::vector<MatrixXd> diag, upper;
  Covariances(&diag, &upper);
  return diag;
}

std::vector<MatrixXd> BandedCholesky::PairMarginals() const {
  std::vector<MatrixXd> diag, upper;
  Covariances(&diag, &upper);
  std::vector<MatrixXd> pairs;
  pairs.reserve(upper.size());
  for (size_t i = 0; i < upper.size(); ++i) {
    MatrixXd p(2 * n_, 2 * n_);
    p.topLeftCorner(n_, n_) = diag[i];
    p.topRightCorner(n_, n_) = upper[i];
    p.bottomLeftCorner(n_, n_) = upper[i].transpose();
    p.bottomRightCorner(n_, n_) = diag[i + 1];
    pairs.push_back(std::move(p));
  }
  return pairs;
}

VectorXd SolveBanded(const BlockTridiagonal& a, const VectorXd& rhs) {
  if (rhs.size() != a.dim()) {
    throw ConfigError("SolveBanded: rhs dimension mismatch");
  }
  return BandedCholesky(a).Solve(rhs);
}

}  // namespace pipc
