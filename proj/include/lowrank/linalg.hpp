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

// Dense linear-algebra substrate: symmetric matrices, eigen/singular value
// decompositions, column-major vectorization, Kronecker products and
// numerical rank.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace lowrank {

using Vector = Eigen::VectorXd;
using RectMatrix = Eigen::MatrixXd;

namespace linalg {

inline bool all_finite(const Eigen::MatrixXd& m) {
  return m.allFinite();
}

}  // namespace linalg

/// Dense real symmetric matrix. Symmetry is enforced on construction by
/// replacing the input with (X + X^T) / 2, so entries(i, j) == entries(j, i)
/// holds bitwise.
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(const Eigen::MatrixXd& m) : m_(m) {
    if (m.rows() != m.cols()) {
      throw std::invalid_argument("SymMatrix: matrix is not square");
    }
    if (m.rows() < 1) {
      throw std::invalid_argument("SymMatrix: dimension must be at least 1");
    }
    if (!linalg::all_finite(m)) {
      throw std::invalid_argument("SymMatrix: non-finite entry");
    }
    const Eigen::Index n = m.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = j + 1; i < n; ++i) {
        const double avg = 0.5 * (m(i, j) + m(j, i));
        m_(i, j) = avg;
        m_(j, i) = avg;
      }
    }
  }

  static SymMatrix zero(int n) { return SymMatrix(Eigen::MatrixXd::Zero(n, n)); }
  static SymMatrix identity(int n) {
    return SymMatrix(Eigen::MatrixXd::Identity(n, n));
  }
  static SymMatrix outer(const Vector& x) { return SymMatrix(x * x.transpose()); }
  static SymMatrix diagonal(const Vector& d) {
    return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  bool empty() const { return m_.size() == 0; }
  const Eigen::MatrixXd& mat() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  double trace() const { return m_.trace(); }
  double frobenius_norm() const { return m_.norm(); }

  SymMatrix operator+(const SymMatrix& o) const { return SymMatrix(m_ + o.m_); }
  SymMatrix operator-(const SymMatrix& o) const { return SymMatrix(m_ - o.m_); }
  SymMatrix operator*(double s) const { return SymMatrix(m_ * s); }
  friend SymMatrix operator*(double s, const SymMatrix& a) { return a * s; }

 private:
  Eigen::MatrixXd m_;
};

/// values sorted descending; vectors hold the matching eigenvectors as
/// columns.
struct EigenDecomposition {
  Vector values;
  Eigen::MatrixXd vectors;
};

struct SingularDecomposition {
  Eigen::MatrixXd u;
  Vector s;
  Eigen::MatrixXd v;
};

namespace linalg {

namespace detail {

// Flip each column so that its first entry of non-negligible magnitude is
// positive. Keeps decompositions reproducible across call sites.
inline void canonicalize_signs(Eigen::MatrixXd& vecs) {
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
      if (std::abs(vecs(r, c)) > 1e-12) {
        if (vecs(r, c) < 0) vecs.col(c) *= -1.0;
        break;
      }
    }
  }
}

}  // namespace detail

/// Symmetric eigendecomposition with eigenvalues in descending order. Ties
/// keep the lower original index first.
inline EigenDecomposition sym_eig(const SymMatrix& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.mat());
  const Vector& asc = es.eigenvalues();
  const Eigen::Index n = asc.size();
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return asc(a) > asc(b);
  });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = asc(order[static_cast<size_t>(k)]);
    out.vectors.col(k) = es.eigenvectors().col(order[static_cast<size_t>(k)]);
  }
  detail::canonicalize_signs(out.vectors);
  return out;
}

inline Vector sym_eigenvalues(const SymMatrix& x) { return sym_eig(x).values; }

inline double min_eigenvalue(const Eigen::MatrixXd& sym) {
  if (sym.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Full SVD, X = U diag(S) V^T, singular values descending.
inline SingularDecomposition svd(const RectMatrix& x) {
  if (!x.allFinite()) throw std::invalid_argument("svd: non-finite entry");
  SingularDecomposition out;
  if (x.size() == 0) {
    out.u = Eigen::MatrixXd::Identity(x.rows(), x.rows());
    out.v = Eigen::MatrixXd::Identity(x.cols(), x.cols());
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> js(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.u = js.matrixU();
  out.s = js.singularValues();
  out.v = js.matrixV();
  return out;
}

inline Vector singular_values(const RectMatrix& x) { return svd(x).s; }

/// Column-major stacking.
inline Vector vec(const RectMatrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

inline RectMatrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  if (rows * cols != v.size()) {
    throw std::invalid_argument("unvec: length does not match rows * cols");
  }
  return Eigen::Map<const RectMatrix>(v.data(), rows, cols);
}

/// Number of values with magnitude above tol.
inline int numerical_rank(const Vector& values, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("numerical_rank: tol must be positive");
  int count = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values(i)) > tol) ++count;
  }
  return count;
}

inline RectMatrix kron(const RectMatrix& a, const RectMatrix& b) {
  constexpr auto kMax = std::numeric_limits<int>::max();
  if ((a.rows() != 0 && b.rows() > kMax / a.rows()) ||
      (a.cols() != 0 && b.cols() > kMax / a.cols())) {
    throw std::overflow_error("kron: result dimension overflows");
  }
  RectMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// The replicator 1_{r x 1} (x) I_n that sums horizontally stacked blocks.
inline RectMatrix replicator(int r, int n) {
  return kron(RectMatrix::Ones(r, 1), RectMatrix::Identity(n, n));
}

/// Frobenius inner product.
inline double inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a.array() * b.array()).sum();
}

/// PSD test with tolerance relative to the spectral norm:
/// lambda_min >= -rel_tol * max(1, ||X||_2).
inline bool is_psd(const SymMatrix& x, double rel_tol = 1e-8) {
  const Vector ev = sym_eigenvalues(x);
  const double scale = std::max(1.0, std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1))));
  return ev(ev.size() - 1) >= -rel_tol * scale;
}

/// Projection onto the PSD cone (negative eigenvalues clipped to zero).
inline SymMatrix psd_part(const SymMatrix& x) {
  const EigenDecomposition ed = sym_eig(x);
  const Vector clipped = ed.values.cwiseMax(0.0);
  return SymMatrix(ed.vectors * clipped.asDiagonal() * ed.vectors.transpose());
}

}  // namespace linalg
}  // namespace lowrank
