// Copyright 2026 The lowrank Authors
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

// The low-rank functional
//
//   L(X) = sum_{i,j} (X_ii X_jj - X_ij^2) = vec(X)^T Q vec(X)
//
// and the particular-rank functional over r symmetric blocks
//
//   P_r(X1..Xr) = sum_k L(Xk) + sum_{p != q} Tr(Xp Xq) = x~^T Q_r x~,
//
// with x~ the stacked vectorization of the blocks. On PSD arguments L is
// zero exactly when rank(X) <= 1, and P_r is zero exactly when every block
// is rank one and the blocks are mutually trace-orthogonal.
//
// Q = vec(I) vec(I)^T - I_{N^2} and Q_r = I_r (x) Q + (1 1^T - I_r) (x) I_{N^2}.
// Both are stored densely for small N; the heuristics use the matrix-free
// closed forms below.

#pragma once

#include "lowrank/linalg.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace lowrank {

struct LrfMatrix {
  int dim = 0;
  Eigen::MatrixXd q;
};

struct PrfMatrix {
  int dim = 0;
  int rank = 0;
  Eigen::MatrixXd qr;
};

/// r symmetric blocks of a common dimension.
class BlockTuple {
 public:
  BlockTuple() = default;
  explicit BlockTuple(std::vector<SymMatrix> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw std::invalid_argument("BlockTuple: no blocks");
    for (const auto& b : blocks_) {
      if (b.dim() != blocks_.front().dim()) {
        throw std::invalid_argument("BlockTuple: blocks differ in dimension");
      }
    }
  }

  /// r copies of x / r.
  static BlockTuple equal_split(const SymMatrix& x, int r) {
    return BlockTuple(std::vector<SymMatrix>(static_cast<size_t>(r), x * (1.0 / r)));
  }

  int size() const { return static_cast<int>(blocks_.size()); }
  int dim() const { return blocks_.empty() ? 0 : blocks_.front().dim(); }
  const SymMatrix& operator[](int k) const { return blocks_[static_cast<size_t>(k)]; }
  const std::vector<SymMatrix>& blocks() const { return blocks_; }

  SymMatrix sum() const {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim(), dim());
    for (const auto& b : blocks_) acc += b.mat();
    return SymMatrix(acc);
  }

  Vector stacked() const {
    const Eigen::Index n2 = static_cast<Eigen::Index>(dim()) * dim();
    Vector out(n2 * size());
    for (int k = 0; k < size(); ++k) out.segment(k * n2, n2) = linalg::vec(blocks_[static_cast<size_t>(k)].mat());
    return out;
  }

 private:
  std::vector<SymMatrix> blocks_;
};

namespace functional {

inline LrfMatrix build_q(int n) {
  if (n < 1) throw std::invalid_argument("build_q: N must be at least 1");
  const Vector vi = linalg::vec(Eigen::MatrixXd::Identity(n, n));
  LrfMatrix out;
  out.dim = n;
  out.q = vi * vi.transpose() - Eigen::MatrixXd::Identity(n * n, n * n);
  return out;
}

inline PrfMatrix build_qr(int n, int r) {
  if (n < 1) throw std::invalid_argument("build_qr: N must be at least 1");
  if (r < 1 || r > n) throw std::invalid_argument("build_qr: rank out of range [1, N]");
  const LrfMatrix q = build_q(n);
  const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
  PrfMatrix out;
  out.dim = n;
  out.rank = r;
  out.qr = Eigen::MatrixXd::Zero(n2 * r, n2 * r);
  for (int p = 0; p < r; ++p) {
    for (int s = 0; s < r; ++s) {
      auto blk = out.qr.block(p * n2, s * n2, n2, n2);
      if (p == s) {
        blk = q.q;
      } else {
        blk = Eigen::MatrixXd::Identity(n2, n2);
      }
    }
  }
  return out;
}

inline double eval_lrf(const LrfMatrix& q, const SymMatrix& x) {
  if (x.dim() != q.dim) throw std::invalid_argument("eval_lrf: dimension mismatch");
  const Vector v = linalg::vec(x.mat());
  return v.dot(q.q * v);
}

inline double eval_prf(const PrfMatrix& qr, const BlockTuple& blocks) {
  if (blocks.dim() != qr.dim || blocks.size() != qr.rank) {
    throw std::invalid_argument("eval_prf: dimension mismatch");
  }
  const Vector v = blocks.stacked();
  return v.dot(qr.qr * v);
}

/// Q_r x~, the half-gradient of x~^T Q_r x~.
inline Vector prf_gradient(const PrfMatrix& qr, const BlockTuple& blocks) {
  if (blocks.dim() != qr.dim || blocks.size() != qr.rank) {
    throw std::invalid_argument("prf_gradient: dimension mismatch");
  }
  return qr.qr * blocks.stacked();
}

// Matrix-free forms.

/// (Tr X)^2 - ||X||_F^2.
inline double lrf(const SymMatrix& x) {
  const double t = x.trace();
  return t * t - x.mat().squaredNorm();
}

/// vec(X)^T Q vec(Y) = Tr(X) Tr(Y) - <X, Y>.
inline double lrf_pairing(const SymMatrix& x, const SymMatrix& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("lrf_pairing: dimension mismatch");
  return x.trace() * y.trace() - linalg::inner(x.mat(), y.mat());
}

inline double prf(const BlockTuple& blocks) {
  double total = 0.0;
  const SymMatrix sum = blocks.sum();
  // sum_{p != q} <Xp, Xq> = ||sum||^2 - sum_k ||Xk||^2
  double self = 0.0;
  for (const auto& b : blocks.blocks()) {
    total += lrf(b);
    self += b.mat().squaredNorm();
  }
  return total + sum.mat().squaredNorm() - self;
}

/// Block k of Q_r x~: Tr(Xk) I - Xk + sum_{q != k} Xq.
inline std::vector<SymMatrix> prf_gradient_blocks(const BlockTuple& blocks) {
  const int n = blocks.dim();
  const Eigen::MatrixXd sum = blocks.sum().mat();
  std::vector<SymMatrix> out;
  out.reserve(static_cast<size_t>(blocks.size()));
  for (const auto& b : blocks.blocks()) {
    out.emplace_back(b.trace() * Eigen::MatrixXd::Identity(n, n) - 2.0 * b.mat() + sum);
  }
  return out;
}

/// <D~, Q_r X~> for stacked block families D and X.
inline double prf_bilinear(const BlockTuple& d, const BlockTuple& x) {
  if (d.size() != x.size() || d.dim() != x.dim()) {
    throw std::invalid_argument("prf_bilinear: dimension mismatch");
  }
  const std::vector<SymMatrix> g = prf_gradient_blocks(x);
  double total = 0.0;
  for (int k = 0; k < d.size(); ++k) total += linalg::inner(d[k].mat(), g[static_cast<size_t>(k)].mat());
  return total;
}

struct PairingCheck {
  double pairing = 0.0;
  double superadd_gap = 0.0;
};

/// Evaluates x^T Q y and the superadditivity gap
/// (x+y)^T Q (x+y) - x^T Q x - y^T Q y for PSD x, y.
inline PairingCheck check_pairing_properties(const SymMatrix& x, const SymMatrix& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("check_pairing_properties: dimension mismatch");
  if (!linalg::is_psd(x) || !linalg::is_psd(y)) {
    throw std::invalid_argument("check_pairing_properties: argument is not PSD");
  }
  PairingCheck out;
  out.pairing = lrf_pairing(x, y);
  out.superadd_gap = lrf(x + y) - lrf(x) - lrf(y);
  return out;
}

}  // namespace functional
}  // namespace lowrank
