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

#pragma once

#include "lowrank/linalg.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lowrank {

enum class Sense { Eq, Geq, Leq };

inline const char* to_string(Sense s) {
  switch (s) {
    case Sense::Eq: return "EQ";
    case Sense::Geq: return "GEQ";
    case Sense::Leq: return "LEQ";
  }
  return "?";
}

inline Sense parse_sense(const std::string& s) {
  if (s == "EQ") return Sense::Eq;
  if (s == "GEQ") return Sense::Geq;
  if (s == "LEQ") return Sense::Leq;
  throw std::invalid_argument("unknown row sense '" + s + "'");
}

enum class Shape { Psd, Rect };

/// One linear functional <coeff, X> compared against rhs.
struct LmeRow {
  Eigen::MatrixXd coeff;
  double rhs = 0.0;
  Sense sense = Sense::Eq;
};

/// Feasibility instance: find X with <A_i, X> (=, >=, <=) b_i, X PSD for the
/// PSD shape, and rank(X) = target_rank.
class LmeProblem {
 public:
  static LmeProblem psd(int n, int target_rank = 1) {
    if (n < 1) throw std::invalid_argument("LmeProblem: N must be positive");
    LmeProblem p;
    p.shape_ = Shape::Psd;
    p.n_ = n;
    p.m_ = n;
    p.set_target_rank(target_rank);
    return p;
  }

  static LmeProblem rect(int n, int m, int target_rank = 1) {
    if (n < 1 || m < 1) throw std::invalid_argument("LmeProblem: dimensions must be positive");
    LmeProblem p;
    p.shape_ = Shape::Rect;
    p.n_ = n;
    p.m_ = m;
    p.set_target_rank(target_rank);
    return p;
  }

  /// PSD-shaped coefficients are symmetrized on ingest.
  void add_row(const Eigen::MatrixXd& coeff, double rhs, Sense sense = Sense::Eq) {
    if (coeff.rows() != n_ || coeff.cols() != m_) {
      throw std::invalid_argument("LmeProblem: coefficient shape mismatch");
    }
    if (!coeff.allFinite() || !std::isfinite(rhs)) {
      throw std::invalid_argument("LmeProblem: non-finite row data");
    }
    LmeRow row;
    row.coeff = shape_ == Shape::Psd ? Eigen::MatrixXd(0.5 * (coeff + coeff.transpose())) : coeff;
    row.rhs = rhs;
    row.sense = sense;
    rows_.push_back(std::move(row));
  }

  void set_target_rank(int r) {
    if (r < 1 || r > std::min(n_, m_)) throw std::invalid_argument("LmeProblem: target rank out of range");
    target_rank_ = r;
  }

  Shape shape() const { return shape_; }
  bool is_psd() const { return shape_ == Shape::Psd; }
  int rows_dim() const { return n_; }
  int cols_dim() const { return m_; }
  int max_rank() const { return std::min(n_, m_); }
  int target_rank() const { return target_rank_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const LmeRow& row(int i) const { return rows_[static_cast<size_t>(i)]; }
  const std::vector<LmeRow>& rows() const { return rows_; }

  bool has_inequalities() const {
    for (const auto& r : rows_) {
      if (r.sense != Sense::Eq) return true;
    }
    return false;
  }

  std::string meta;
  /// Solution used to generate b, when the instance was planted.
  std::optional<Eigen::MatrixXd> planted;

  Vector rhs() const {
    Vector b(num_rows());
    for (int i = 0; i < num_rows(); ++i) b(i) = rows_[static_cast<size_t>(i)].rhs;
    return b;
  }

  double rhs_norm() const { return rhs().norm(); }

  /// A vec(X).
  Vector apply(const Eigen::MatrixXd& x) const {
    check_shape(x);
    Vector out(num_rows());
    for (int i = 0; i < num_rows(); ++i) out(i) = linalg::inner(rows_[static_cast<size_t>(i)].coeff, x);
    return out;
  }

  /// Per-row violation: A vec(X) - b on equality rows, the violated part on
  /// inequality rows (zero when satisfied).
  Vector violation(const Eigen::MatrixXd& x) const {
    const Vector ax = apply(x);
    Vector out(num_rows());
    for (int i = 0; i < num_rows(); ++i) {
      const auto& r = rows_[static_cast<size_t>(i)];
      const double d = ax(i) - r.rhs;
      switch (r.sense) {
        case Sense::Eq: out(i) = d; break;
        case Sense::Geq: out(i) = std::min(0.0, d); break;
        case Sense::Leq: out(i) = std::max(0.0, d); break;
      }
    }
    return out;
  }

  double residual_norm(const Eigen::MatrixXd& x) const { return violation(x).norm(); }

  /// The m x (N*M) operator matrix acting on column-major vec(X).
  Eigen::MatrixXd operator_matrix() const {
    Eigen::MatrixXd a(num_rows(), static_cast<Eigen::Index>(n_) * m_);
    for (int i = 0; i < num_rows(); ++i) a.row(i) = linalg::vec(rows_[static_cast<size_t>(i)].coeff).transpose();
    return a;
  }

 private:
  void check_shape(const Eigen::MatrixXd& x) const {
    if (x.rows() != n_ || x.cols() != m_) throw std::invalid_argument("LmeProblem: matrix shape mismatch");
  }

  Shape shape_ = Shape::Psd;
  int n_ = 0;
  int m_ = 0;
  int target_rank_ = 1;
  std::vector<LmeRow> rows_;
};

}  // namespace lowrank
