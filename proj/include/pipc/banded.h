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

#ifndef PIPC_BANDED_H_
#define PIPC_BANDED_H_

#include <vector>

#include <Eigen/Dense>

namespace pipc {

// Symmetric block-tridiagonal matrix. `lower[i]` is block (i+1, i); the
// upper band is its transpose.
struct BlockTridiagonal {
  int num_blocks = 0;
  int block_size = 0;
  std::vector<Eigen::MatrixXd> diag;
  std::vector<Eigen::MatrixXd> lower;

  BlockTridiagonal() = default;
  BlockTridiagonal(int num_blocks, int block_size);

  int dim() const { return num_blocks * block_size; }
  Eigen::MatrixXd ToDense() const;
  Eigen::VectorXd Multiply(const Eigen::VectorXd& x) const;
  void AddToDiagonal(double value);
};

// Block Cholesky factor A = L L^T where L is block lower-bidiagonal.
// Factorization, solve and adjacent-pair marginals are all O(N).
class BandedCholesky {
 public:
  // Throws RankDeficientError if a pivot block is not positive definite.
  explicit BandedCholesky(const BlockTridiagonal& a);

  Eigen::VectorXd Solve(const Eigen::VectorXd& rhs) const;

  // Diagonal blocks of A^-1.
  std::vector<Eigen::MatrixXd> Marginals() const;
  // Joint blocks of A^-1 over each adjacent pair (i, i+1), 2n x 2n.
  std::vector<Eigen::MatrixXd> PairMarginals() const;

 private:
  void Covariances(std::vector<Eigen::MatrixXd>* diag,
                   std::vector<Eigen::MatrixXd>* upper) const;

  int n_;
  int num_blocks_;
  std::vector<Eigen::MatrixXd> pivot_;  // lower-triangular diagonal factors
  std::vector<Eigen::MatrixXd> sub_;    // sub-diagonal factor blocks
};

// Solves A x = rhs for a positive definite block-tridiagonal A.
Eigen::VectorXd SolveBanded(const BlockTridiagonal& a,
                            const Eigen::VectorXd& rhs);

}  // namespace pipc

#endif  // PIPC_BANDED_H_
