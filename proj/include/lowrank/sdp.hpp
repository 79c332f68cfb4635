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

// Dense standard-form linear SDP.
//
//   minimize    sum_j <C_j, X_j> + c_f^T x_f
//   subject to  sum_j <A_ij, X_j> + a_i^T x_f  (= | >=)  b_i
//               X_j PSD, x_f free
//
// Solved by an infeasible primal-dual interior-point method with the HKM
// search direction and Mehrotra predictor-corrector. Inequality rows get a
// nonnegative slack each; free variables are eliminated through an
// augmented Schur system.

#pragma once

#include "lowrank/linalg.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace lowrank::sdp {

enum class RowSense { Eq, Geq };

enum class Status {
  Optimal,
  Infeasible,
  Unbounded,
  MaxIter,
  /// Primal feasible point found; returned only when
  /// SolverOptions::feasibility_only is set.
  Feasible,
};

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "OPTIMAL";
    case Status::Infeasible: return "INFEASIBLE";
    case Status::Unbounded: return "UNBOUNDED";
    case Status::MaxIter: return "MAX_ITER";
    case Status::Feasible: return "FEASIBLE";
  }
  return "?";
}

inline const char* to_string(RowSense s) { return s == RowSense::Eq ? "EQ" : "GEQ"; }

/// Upper-triangle entry (i <= j) of a symmetric coefficient matrix.
struct Entry {
  int block = 0;
  int i = 0;
  int j = 0;
  double value = 0.0;
};

class Row {
 public:
  Row() = default;
  Row(RowSense sense, double rhs) : sense_(sense), rhs_(rhs) {}

  /// The row's functional gains coef * X_block(i, j).
  Row& add(int block, int i, int j, double coef) {
    if (i > j) std::swap(i, j);
    entries_.push_back({block, i, j, i == j ? coef : 0.5 * coef});
    return *this;
  }

  /// The row's functional gains <A, X_block>; only the symmetric part of A
  /// contributes.
  Row& add_matrix(int block, const Eigen::MatrixXd& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (Eigen::Index i = 0; i <= j; ++i) {
        const double v = i == j ? a(i, i) : 0.5 * (a(i, j) + a(j, i));
        if (v != 0.0) entries_.push_back({block, static_cast<int>(i), static_cast<int>(j), v});
      }
    }
    return *this;
  }

  Row& add_free(int index, double coef) {
    free_.emplace_back(index, coef);
    return *this;
  }

  RowSense sense() const { return sense_; }
  double rhs() const { return rhs_; }
  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<std::pair<int, double>>& free_terms() const { return free_; }

  /// Sorts and merges duplicate coordinates, dropping exact zeros.
  void normalize() {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
      return std::tie(a.block, a.j, a.i) < std::tie(b.block, b.j, b.i);
    });
    std::vector<Entry> merged;
    for (const auto& e : entries_) {
      if (!merged.empty() && merged.back().block == e.block && merged.back().i == e.i &&
          merged.back().j == e.j) {
        merged.back().value += e.value;
      } else {
        merged.push_back(e);
      }
    }
    std::erase_if(merged, [](const Entry& e) { return e.value == 0.0; });
    entries_ = std::move(merged);
    std::sort(free_.begin(), free_.end());
    std::vector<std::pair<int, double>> fm;
    for (const auto& f : free_) {
      if (!fm.empty() && fm.back().first == f.first) {
        fm.back().second += f.second;
      } else {
        fm.push_back(f);
      }
    }
    std::erase_if(fm, [](const auto& f) { return f.second == 0.0; });
    free_ = std::move(fm);
  }

 private:
  RowSense sense_ = RowSense::Eq;
  double rhs_ = 0.0;
  std::vector<Entry> entries_;
  std::vector<std::pair<int, double>> free_;
};

class SdpInstance {
 public:
  int add_psd_block(int dim) {
    if (dim < 1) throw std::invalid_argument("SdpInstance: block dimension must be positive");
    dims_.push_back(dim);
    c_.push_back(Eigen::MatrixXd::Zero(dim, dim));
    return static_cast<int>(dims_.size()) - 1;
  }

  /// Returns the index of the first new free variable.
  int add_free(int count) {
    if (count < 0) throw std::invalid_argument("SdpInstance: negative free count");
    const int first = n_free_;
    n_free_ += count;
    c_free_.conservativeResize(n_free_);
    c_free_.tail(count).setZero();
    return first;
  }

  void set_objective(int block, const Eigen::MatrixXd& c) {
    check_block(block);
    if (c.rows() != dims_[static_cast<size_t>(block)] || c.cols() != c.rows()) {
      throw std::invalid_argument("SdpInstance: objective dimension mismatch");
    }
    c_[static_cast<size_t>(block)] = 0.5 * (c + c.transpose());
  }

  /// Objective gains coef * X_block(i, j).
  void add_objective(int block, int i, int j, double coef) {
    check_block(block);
    auto& c = c_[static_cast<size_t>(block)];
    if (i == j) {
      c(i, i) += coef;
    } else {
      c(i, j) += 0.5 * coef;
      c(j, i) += 0.5 * coef;
    }
  }

  void set_free_objective(int index, double c) {
    if (index < 0 || index >= n_free_) throw std::invalid_argument("SdpInstance: free index out of range");
    c_free_(index) = c;
  }

  int add_row(Row row) {
    row.normalize();
    for (const auto& e : row.entries()) {
      check_block(e.block);
      const int n = dims_[static_cast<size_t>(e.block)];
      if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) {
        throw std::invalid_argument("SdpInstance: row entry out of block range");
      }
    }
    for (const auto& f : row.free_terms()) {
      if (f.first < 0 || f.first >= n_free_) {
        throw std::invalid_argument("SdpInstance: row free index out of range");
      }
    }
    if (!std::isfinite(row.rhs())) throw std::invalid_argument("SdpInstance: non-finite rhs");
    rows_.push_back(std::move(row));
    return static_cast<int>(rows_.size()) - 1;
  }

  int num_blocks() const { return static_cast<int>(dims_.size()); }
  int block_dim(int b) const { return dims_[static_cast<size_t>(b)]; }
  const std::vector<int>& block_dims() const { return dims_; }
  int num_free() const { return n_free_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const Row& row(int i) const { return rows_[static_cast<size_t>(i)]; }
  const std::vector<Row>& rows() const { return rows_; }
  const Eigen::MatrixXd& objective(int b) const { return c_[static_cast<size_t>(b)]; }
  const Vector& free_objective() const { return c_free_; }

  /// Value of row i's functional (without rhs) at the given point.
  double evaluate_row(int i, const std::vector<Eigen::MatrixXd>& blocks, const Vector& free) const {
    const Row& r = rows_[static_cast<size_t>(i)];
    double v = 0.0;
    for (const auto& e : r.entries()) {
      const auto& x = blocks[static_cast<size_t>(e.block)];
      v += e.i == e.j ? e.value * x(e.i, e.i) : 2.0 * e.value * x(e.i, e.j);
    }
    for (const auto& f : r.free_terms()) v += f.second * free(f.first);
    return v;
  }

  double objective_value(const std::vector<Eigen::MatrixXd>& blocks, const Vector& free) const {
    double v = 0.0;
    for (size_t b = 0; b < dims_.size(); ++b) v += linalg::inner(c_[b], blocks[b]);
    if (n_free_ > 0) v += c_free_.dot(free);
    return v;
  }

  /// Debug dump, one row per line. See docs/formats.md.
  void dump(std::ostream& os) const {
    std::ostringstream s;
    s << std::setprecision(17);
    s << "sdp-instance 1\n";
    s << "blocks " << dims_.size();
    for (int d : dims_) s << ' ' << d;
    s << "\nfree " << n_free_ << '\n';
    std::vector<std::string> obj;
    for (size_t b = 0; b < dims_.size(); ++b) {
      for (int j = 0; j < dims_[b]; ++j) {
        for (int i = 0; i <= j; ++i) {
          if (c_[b](i, j) != 0.0) {
            std::ostringstream t;
            t << std::setprecision(17) << "B " << b << ' ' << i << ' ' << j << ' ' << c_[b](i, j);
            obj.push_back(t.str());
          }
        }
      }
    }
    for (int f = 0; f < n_free_; ++f) {
      if (c_free_(f) != 0.0) {
        std::ostringstream t;
        t << std::setprecision(17) << "F " << f << ' ' << c_free_(f);
        obj.push_back(t.str());
      }
    }
    s << "objective " << obj.size();
    for (const auto& t : obj) s << ' ' << t;
    s << "\nrows " << rows_.size() << '\n';
    for (const auto& r : rows_) {
      s << to_string(r.sense()) << ' ' << r.rhs() << ' ' << r.entries().size() + r.free_terms().size();
      for (const auto& e : r.entries()) s << " B " << e.block << ' ' << e.i << ' ' << e.j << ' ' << e.value;
      for (const auto& f : r.free_terms()) s << " F " << f.first << ' ' << f.second;
      s << '\n';
    }
    os << s.str();
  }

  static SdpInstance parse(std::istream& is) {
    auto fail = [](const std::string& what) {
      throw std::runtime_error("sdp dump parse error: " + what);
    };
    std::string tok;
    int version = 0;
    if (!(is >> tok >> version) || tok != "sdp-instance" || version != 1) fail("header");
    SdpInstance inst;
    size_t nb = 0;
    if (!(is >> tok >> nb) || tok != "blocks") fail("blocks");
    for (size_t b = 0; b < nb; ++b) {
      int d = 0;
      if (!(is >> d)) fail("block dim");
      inst.add_psd_block(d);
    }
    int nf = 0;
    if (!(is >> tok >> nf) || tok != "free") fail("free");
    inst.add_free(nf);
    size_t nobj = 0;
    if (!(is >> tok >> nobj) || tok != "objective") fail("objective");
    for (size_t k = 0; k < nobj; ++k) {
      if (!(is >> tok)) fail("objective term");
      if (tok == "B") {
        int b, i, j;
        double v;
        if (!(is >> b >> i >> j >> v)) fail("objective entry");
        inst.check_block(b);
        inst.c_[static_cast<size_t>(b)](i, j) = v;
        inst.c_[static_cast<size_t>(b)](j, i) = v;
      } else if (tok == "F") {
        int f;
        double v;
        if (!(is >> f >> v)) fail("objective free");
        inst.set_free_objective(f, v);
      } else {
        fail("objective tag");
      }
    }
    size_t nr = 0;
    if (!(is >> tok >> nr) || tok != "rows") fail("rows");
    for (size_t k = 0; k < nr; ++k) {
      std::string sense;
      double rhs = 0.0;
      size_t nt = 0;
      if (!(is >> sense >> rhs >> nt)) fail("row header");
      if (sense != "EQ" && sense != "GEQ") fail("row sense");
      Row row(sense == "EQ" ? RowSense::Eq : RowSense::Geq, rhs);
      for (size_t t = 0; t < nt; ++t) {
        if (!(is >> tok)) fail("row term");
        if (tok == "B") {
          int b, i, j;
          double v;
          if (!(is >> b >> i >> j >> v)) fail("row entry");
          row.add(b, i, j, i == j ? v : 2.0 * v);
        } else if (tok == "F") {
          int f;
          double v;
          if (!(is >> f >> v)) fail("row free");
          row.add_free(f, v);
        } else {
          fail("row tag");
        }
      }
      inst.add_row(std::move(row));
    }
    return inst;
  }

 private:
  void check_block(int b) const {
    if (b < 0 || b >= num_blocks()) throw std::invalid_argument("SdpInstance: block index out of range");
  }

  std::vector<int> dims_;
  int n_free_ = 0;
  std::vector<Eigen::MatrixXd> c_;
  Vector c_free_;
  std::vector<Row> rows_;
};

/// primal_res is the absolute residual ||b - A(X)||_2 (slacks included);
/// dual_res is ||C - Z - A*(y)|| / (1 + ||C||); gap is
/// <X, Z> / (1 + |pobj| + |dobj|).
struct Kkt {
  double primal_res = 0.0;
  double dual_res = 0.0;
  double gap = 0.0;
};

struct SdpSolution {
  Status status = Status::MaxIter;
  std::vector<Eigen::MatrixXd> blocks;
  Vector free;
  /// One multiplier per row.
  Vector dual;
  std::vector<Eigen::MatrixXd> dual_slack;
  Kkt kkt;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  int iterations = 0;
  /// For INFEASIBLE: unit vector y with sum_i y_i A_i in the dual cone
  /// (PSD blocks, y_i <= 0 on >= rows, zero pairing with free columns) and
  /// b^T y = farkas_pairing < 0.
  Vector farkas;
  double farkas_pairing = 0.0;
  std::string message;
};

struct SolverOptions {
  /// Acceptance tolerance: OPTIMAL is reported only when every KKT measure
  /// is at most tol (primal residual relative to 1 + ||b||).
  double tol = 1e-8;
  /// Iterate until this tighter level is met or progress stalls.
  double target_tol = 1e-8;
  int max_iters = 200;
  double step_fraction = 0.98;
  bool feasibility_only = false;
  /// Per-iteration progress lines are written here when set.
  std::ostream* trace = nullptr;
};

namespace detail {

struct Trip {
  int a;
  int c;
  double v;
};

class IpmSolver {
 public:
  IpmSolver(const SdpInstance& inst, const SolverOptions& opt) : inst_(inst), opt_(opt) {
    m_ = inst.num_rows();
    nb_ = inst.num_blocks();
    nf_ = inst.num_free();
    b_.resize(m_);
    row_blocks_.assign(static_cast<size_t>(nb_), std::vector<std::vector<Trip>>(static_cast<size_t>(m_)));
    active_.assign(static_cast<size_t>(nb_), {});
    bfree_ = Eigen::MatrixXd::Zero(m_, nf_);
    slack_of_row_.assign(static_cast<size_t>(m_), -1);
    for (int i = 0; i < m_; ++i) {
      const Row& r = inst.row(i);
      b_(i) = r.rhs();
      for (const auto& e : r.entries()) {
        auto& list = row_blocks_[static_cast<size_t>(e.block)][static_cast<size_t>(i)];
        list.push_back({e.i, e.j, e.value});
        if (e.i != e.j) list.push_back({e.j, e.i, e.value});
      }
      for (const auto& f : r.free_terms()) bfree_(i, f.first) += f.second;
      if (r.sense() == RowSense::Geq) {
        slack_of_row_[static_cast<size_t>(i)] = n_lp_;
        lp_row_.push_back(i);
        ++n_lp_;
      }
    }
    for (int b = 0; b < nb_; ++b) {
      for (int i = 0; i < m_; ++i) {
        if (!row_blocks_[static_cast<size_t>(b)][static_cast<size_t>(i)].empty()) {
          active_[static_cast<size_t>(b)].push_back(i);
        }
      }
    }
    c_free_ = nf_ > 0 ? inst.free_objective() : Vector();
    double cn = 0.0;
    for (int b = 0; b < nb_; ++b) cn += inst.objective(b).squaredNorm();
    if (nf_ > 0) cn += c_free_.squaredNorm();
    norm_c_ = std::sqrt(cn);
    norm_b_ = b_.norm();
    factor_gram();
  }

  // Factors A A^* over every primal coordinate for the direction projection.
  void factor_gram() {
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::Index col = 0;
    for (int b = 0; b < nb_; ++b) {
      const int n = inst_.block_dim(b);
      for (int i : active_[static_cast<size_t>(b)]) {
        for (const auto& t : row_blocks_[static_cast<size_t>(b)][static_cast<size_t>(i)]) {
          trips.emplace_back(i, col + static_cast<Eigen::Index>(t.c) * n + t.a, t.v);
        }
      }
      col += static_cast<Eigen::Index>(n) * n;
    }
    for (int l = 0; l < n_lp_; ++l) trips.emplace_back(lp_row_[static_cast<size_t>(l)], col + l, -1.0);
    col += n_lp_;
    for (int f = 0; f < nf_; ++f) {
      for (int i = 0; i < m_; ++i) {
        if (bfree_(i, f) != 0.0) trips.emplace_back(i, col + f, bfree_(i, f));
      }
    }
    col += nf_;
    Eigen::SparseMatrix<double> a(m_, col);
    a.setFromTriplets(trips.begin(), trips.end());
    gram_.compute(Eigen::MatrixXd(a * a.transpose()));
  }

  SdpSolution run() {
    SdpSolution sol;
    if (const auto pre = trivially_infeasible(); pre.has_value()) return *pre;
    initialize();
    Best best;
    std::vector<double> history;
    int stall = 0;
    int it = 0;
    for (; it <= opt_.max_iters; ++it) {
      Measures ms = measures();
      const double merit = std::max({ms.pinf, ms.dinf, ms.relgap});
      if (opt_.trace != nullptr) {
        *opt_.trace << "ipm " << it << " pobj " << ms.pobj << " dobj " << ms.dobj << " pinf " << ms.pinf
                    << " dinf " << ms.dinf << " gap " << ms.relgap << " mu " << mu_ << '\n';
      }
      if (merit < best.merit || (opt_.feasibility_only && ms.pinf < best.pinf)) {
        best = {merit, ms.pinf, X_, Z_, xl_, zl_, xf_, y_};
      }
      if (opt_.feasibility_only && ms.pinf <= opt_.tol) {
        return finish(Status::Feasible, it, "primal feasible point");
      }
      if (!opt_.feasibility_only && ms.pinf <= opt_.target_tol && ms.dinf <= opt_.target_tol &&
          ms.relgap <= opt_.target_tol) {
        return finish(Status::Optimal, it, "converged");
      }
      if (auto cert = primal_infeasibility_ray(); cert.has_value()) {
        SdpSolution out = finish(Status::Infeasible, it, "Farkas ray detected");
        out.farkas = cert->first;
        out.farkas_pairing = cert->second;
        return out;
      }
      if (dual_infeasibility_ray()) {
        return finish(Status::Unbounded, it, "primal improving ray detected");
      }
      if (it == opt_.max_iters) break;
      double ap = 0.0, ad = 0.0;
      if (!step(ap, ad)) {
        restore(best);
        return finish_fallback(it, "numerical breakdown in Schur complement");
      }
      if (opt_.trace != nullptr) *opt_.trace << "    step " << ap << ' ' << ad << '\n';
      stall = (std::max(ap, ad) < 1e-10) ? stall + 1 : 0;
      if (stall >= 3) {
        restore(best);
        return finish_fallback(it, "step length stalled");
      }
      history.push_back(best.merit);
      if (!opt_.feasibility_only && history.size() > kProgressWindow &&
          best.merit > 0.9 * history[history.size() - 1 - kProgressWindow]) {
        restore(best);
        return finish_fallback(it, "no progress");
      }
    }
    restore(best);
    return finish_fallback(it, "iteration limit");
  }

 private:
  struct Measures {
    double pinf, dinf, relgap, pobj, dobj, xz;
  };
  static constexpr size_t kProgressWindow = 30;

  struct Best {
    double merit = std::numeric_limits<double>::infinity();
    double pinf = std::numeric_limits<double>::infinity();
    std::vector<Eigen::MatrixXd> X, Z;
    Vector xl, zl, xf, y;
  };

  std::optional<SdpSolution> trivially_infeasible() const {
    for (int i = 0; i < m_; ++i) {
      const Row& r = inst_.row(i);
      if (r.sense() == RowSense::Eq && r.entries().empty() && r.free_terms().empty() &&
          r.rhs() != 0.0) {
        SdpSolution out;
        out.status = Status::Infeasible;
        out.farkas = Vector::Zero(m_);
        out.farkas(i) = r.rhs() > 0 ? -1.0 : 1.0;
        out.farkas_pairing = -std::abs(r.rhs());
        out.message = "empty equality row with nonzero rhs";
        out.blocks.resize(static_cast<size_t>(nb_));
        for (int b = 0; b < nb_; ++b) out.blocks[static_cast<size_t>(b)] = Eigen::MatrixXd::Zero(inst_.block_dim(b), inst_.block_dim(b));
        out.free = Vector::Zero(nf_);
        out.dual = Vector::Zero(m_);
        return out;
      }
    }
    return std::nullopt;
  }

  void initialize() {
    X_.resize(static_cast<size_t>(nb_));
    Z_.resize(static_cast<size_t>(nb_));
    for (int b = 0; b < nb_; ++b) {
      const int n = inst_.block_dim(b);
      double xi = std::max(10.0, std::sqrt(static_cast<double>(n)));
      double eta = std::max(10.0, std::sqrt(static_cast<double>(n)));
      eta = std::max(eta, inst_.objective(b).norm());
      for (int i : active_[static_cast<size_t>(b)]) {
        double na = 0.0;
        for (const auto& t : row_blocks_[static_cast<size_t>(b)][static_cast<size_t>(i)]) na += t.v * t.v;
        na = std::sqrt(na);
        xi = std::max(xi, n * (1.0 + std::abs(b_(i))) / (1.0 + na));
        eta = std::max(eta, na);
      }
      X_[static_cast<size_t>(b)] = xi * Eigen::MatrixXd::Identity(n, n);
      Z_[static_cast<size_t>(b)] = eta * Eigen::MatrixXd::Identity(n, n);
    }
    double xi = 10.0, eta = 10.0;
    for (int l = 0; l < n_lp_; ++l) xi = std::max(xi, 1.0 + std::abs(b_(lp_row_[static_cast<size_t>(l)])));
    xl_ = Vector::Constant(n_lp_, xi);
    zl_ = Vector::Constant(n_lp_, eta);
    xf_ = Vector::Zero(nf_);
    y_ = Vector::Zero(m_);
  }

  // A(X) + B x_f - slack.
  Vector apply_a(const std::vector<Eigen::MatrixXd>& X, const Vector& xl, const Vector& xf) const {
    Vector out = Vector::Zero(m_);
    for (int b = 0; b < nb_; ++b) {
      const auto& x = X[static_cast<size_t>(b)];
      for (int i : active_[static_cast<size_t>(b)]) {
        double v = 0.0;
        for (const auto& t : row_blocks_[static_cast<size_t>(b)][static_cast<size_t>(i)]) v += t.v * x(t.a, t.c);
        out(i) += v;
      }
    }
    for (int l = 0; l < n_lp_; ++l) out(lp_row_[static_cast<size_t>(l)]) -= xl(l);
    if (nf_ > 0) out += bfree_ * xf;
    return out;
  }

  Eigen::MatrixXd apply_at_block(int b, const Vector& y) const {
    const int n = inst_.block_dim(b);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (int i : active_[static_cast<size_t>(b)]) {
      if (y(i) == 0.0) continue;
      for (const auto& t : row_blocks_[static_cast<size_t>(b)][static_cast<size_t>(i)]) out(t.a, t.c) += y(i) * t.v;
    }
    return out;
  }

  Vector apply_at_lp(const Vector& y) const {
    Vector out(n_lp_);
    for (int l = 0; l < n_lp_; ++l) out(l) = -y(lp_row_[static_cast<size_t>(l)]);
    return out;
  }

  Measures measures() {
    rp_ = b_ - apply_a(X_, xl_, xf_);
    Rd_.resize(static_cast<size_t>(nb_));
    double dn = 0.0;
    Measures ms{};
    ms.xz = 0.0;
    ms.pobj = 0.0;
    for (int b = 0; b < nb_; ++b) {
      Rd_[static_cast<size_t>(b)] = inst_.objective(b) - Z_[static_cast<size_t>(b)] - apply_at_block(b, y_);
      dn += Rd_[static_cast<size_t>(b)].squaredNorm();
      ms.xz += linalg::inner(X_[static_cast<size_t>(b)], Z_[static_cast<size_t>(b)]);
      ms.pobj += linalg::inner(inst_.objective(b), X_[static_cast<size_t>(b)]);
    }
    rdl_ = -zl_ - apply_at_lp(y_);
    dn += rdl_.squaredNorm();
    ms.xz += xl_.dot(zl_);
    if (nf_ > 0) {
      rf_ = c_free_ - bfree_.transpose() * y_;
      dn += rf_.squaredNorm();
      ms.pobj += c_free_.dot(xf_);
    } else {
      rf_ = Vector();
    }
    ms.dobj = b_.dot(y_);
    ms.pinf = rp_.norm() / (1.0 + norm_b_);
    ms.dinf = std::sqrt(dn) / (1.0 + norm_c_);
    ms.relgap = std::abs(ms.xz) / (1.0 + std::abs(ms.pobj) + std::abs(ms.dobj));
    const double nu = static_cast<double>(total_order());
    mu_ = nu > 0 ? ms.xz / nu : 0.0;
    last_ = ms;
    return ms;
  }

  int total_order() const {
    int nu = n_lp_;
    for (int b = 0; b < nb_; ++b) nu += inst_.block_dim(b);
    return nu;
  }

  // Returns (y_cert, pairing) when -y / b^T y is an approximate Farkas ray.
  std::optional<std::pair<Vector, double>> primal_infeasibility_ray() const {
    const double by = b_.dot(y_);
    if (!(by > 0.0) || m_ == 0) return std::nullopt;
    double viol = 0.0;
    for (int b = 0; b < nb_; ++b) {
      const Eigen::MatrixXd w = -apply_at_block(b, y_);
      viol = std::max(viol, -linalg::min_eigenvalue(w));
    }
    const Vector wl = -apply_at_lp(y_);
    if (n_lp_ > 0) viol = std::max(viol, -wl.minCoeff());
    if (nf_ > 0) viol = std::max(viol, (bfree_.transpose() * y_).lpNorm<Eigen::Infinity>());
    if (viol / by > 1e-8) return std::nullopt;
    // Infeasibility must dominate the objective scale to rule out a merely
    // large dual iterate of a feasible problem.
    if (by < 1e8 * std::max(1.0, std::abs(last_.pobj)) && viol > 0.0 && by < 1e3 * (1.0 + norm_c_)) {
      return std::nullopt;
    }
    const double ny = y_.norm();
    Vector cert = -y_ / ny;
    return std::make_pair(cert, b_.dot(cert));
  }

  bool dual_infeasibility_ray() const {
    double cx = 0.0;
    for (int b = 0; b < nb_; ++b) cx += linalg::inner(inst_.objective(b), X_[static_cast<size_t>(b)]);
    if (nf_ > 0) cx += c_free_.dot(xf_);
    if (!(cx < 0.0)) return false;
    const Vector ax = apply_a(X_, xl_, xf_);
    return -cx > 1e8 * (1.0 + norm_b_) && ax.norm() / (-cx) <= 1e-8;
  }

  struct Direction {
    std::vector<Eigen::MatrixXd> dX, dZ;
    Vector dxl, dzl, dxf, dy;
  };

  static Eigen::MatrixXd sym(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

  bool build_schur() {
    M_ = Eigen::MatrixXd::Zero(m_, m_);
    Zi_.resize(static_cast<size_t>(nb_));
    for (int b = 0; b < nb_; ++b) {
      const int n = inst_.block_dim(b);
      const auto& X = X_[static_cast<size_t>(b)];
      Eigen::LLT<Eigen::MatrixXd> llt(Z_[static_cast<size_t>(b)]);
      if (llt.info() != Eigen::Success) return false;
      Eigen::MatrixXd zi = llt.solve(Eigen::MatrixXd::Identity(n, n));
      zi = sym(zi);
      Zi_[static_cast<size_t>(b)] = zi;
      const auto& act = active_[static_cast<size_t>(b)];
      const auto& rb = row_blocks_[static_cast<size_t>(b)];
      double total_nnz = 0.0;
      for (int i : act) total_nnz += static_cast<double>(rb[static_cast<size_t>(i)].size());
      for (int j : act) {
        const auto& aj = rb[static_cast<size_t>(j)];
        const double nnz_j = static_cast<double>(aj.size());
        const double dense_cost = n * nnz_j + static_cast<double>(n) * n * n + total_nnz;
        const double sparse_cost = nnz_j * total_nnz;
        if (dense_cost < sparse_cost) {
          Eigen::MatrixXd xa = Eigen::MatrixXd::Zero(n, n);
          for (const auto& t : aj) xa.col(t.c) += t.v * X.col(t.a);
          const Eigen::MatrixXd g = xa * zi;  // X A_j Z^-1
          for (int i : act) {
            double v = 0.0;
            for (const auto& t : rb[static_cast<size_t>(i)]) v += t.v * g(t.c, t.a);
            M_(i, j) += v;
          }
        } else {
          for (int i : act) {
            double v = 0.0;
            for (const auto& ti : rb[static_cast<size_t>(i)]) {
              for (const auto& tj : aj) v += ti.v * tj.v * X(ti.c, tj.a) * zi(tj.c, ti.a);
            }
            M_(i, j) += v;
          }
        }
      }
    }
    for (int l = 0; l < n_lp_; ++l) {
      const int i = lp_row_[static_cast<size_t>(l)];
      M_(i, i) += xl_(l) / zl_(l);
    }
    M_ = sym(M_);
    // Cholesky with diagonal perturbation fallback.
    const double dmax = std::max(1e-300, M_.diagonal().cwiseAbs().maxCoeff());
    double shift = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::MatrixXd mm = M_;
      if (shift > 0.0) mm.diagonal().array() += shift;
      chol_.compute(mm);
      if (chol_.info() == Eigen::Success) {
        if (nf_ > 0) {
          MiB_ = chol_.solve(bfree_);
          Eigen::MatrixXd s = bfree_.transpose() * MiB_;
          free_lu_.compute(sym(s));
          if (free_lu_.info() != Eigen::Success) return false;
        }
        return true;
      }
      shift = shift == 0.0 ? 1e-14 * dmax : shift * 100.0;
    }
    return false;
  }

  // Solves M dy + B dxf = h, B^T dy = g with the factorization from
  // build_schur.
  void solve_factored(const Vector& h, const Vector& g, Vector& dy, Vector& dxf) const {
    if (nf_ == 0) {
      dy = chol_.solve(h);
      dxf = Vector();
      return;
    }
    const Vector mih = chol_.solve(h);
    dxf = free_lu_.solve(bfree_.transpose() * mih - g);
    dy = mih - MiB_ * dxf;
  }

  // Factored solve followed by two rounds of iterative refinement against
  // the unperturbed Schur matrix.
  // `g` is the free-column right-hand side (defaults to the current rf).
  Vector solve_schur(const Vector& h, const Vector* g = nullptr) const {
    const Vector& gf = g != nullptr ? *g : rf_;
    Vector dy, dxf;
    solve_factored(h, gf, dy, dxf);
    for (int round = 0; round < 2; ++round) {
      Vector r1 = h - M_ * dy;
      if (nf_ > 0) r1 -= bfree_ * dxf;
      Vector r2 = nf_ > 0 ? Vector(gf - bfree_.transpose() * dy) : Vector();
      Vector cy, cf;
      solve_factored(r1, r2, cy, cf);
      dy += cy;
      if (nf_ > 0) dxf += cf;
    }
    last_dxf_ = dxf;
    return dy;
  }

  // Solves for the direction with complementarity target sigma * mu and
  // second-order correction from `corr` (may be null).
  bool direction(double sigma, const Direction* corr, Direction& d) const {
    std::vector<Eigen::MatrixXd> rc(static_cast<size_t>(nb_));
    Vector rcl(n_lp_);
    for (int b = 0; b < nb_; ++b) {
      const auto& X = X_[static_cast<size_t>(b)];
      const auto& zi = Zi_[static_cast<size_t>(b)];
      Eigen::MatrixXd r = sigma * mu_ * zi - X - sym(X * Rd_[static_cast<size_t>(b)] * zi);
      if (corr != nullptr) {
        r -= sym(corr->dX[static_cast<size_t>(b)] * corr->dZ[static_cast<size_t>(b)] * zi);
      }
      rc[static_cast<size_t>(b)] = r;
    }
    for (int l = 0; l < n_lp_; ++l) {
      double r = sigma * mu_ / zl_(l) - xl_(l) - xl_(l) * rdl_(l) / zl_(l);
      if (corr != nullptr) r -= corr->dxl(l) * corr->dzl(l) / zl_(l);
      rcl(l) = r;
    }
    const Vector h = rp_ - apply_a(rc, rcl, Vector::Zero(nf_));
    d.dy = solve_schur(h);
    if (!d.dy.allFinite()) return false;
    d.dxf = nf_ > 0 ? last_dxf_ : Vector();
    d.dX.resize(static_cast<size_t>(nb_));
    d.dZ.resize(static_cast<size_t>(nb_));
    for (int b = 0; b < nb_; ++b) {
      d.dZ[static_cast<size_t>(b)] = sym(Rd_[static_cast<size_t>(b)] - apply_at_block(b, d.dy));
      // dX = rc + sym(X A*(dy) Z^-1), rc already holds -sym(X Rd Z^-1).
      d.dX[static_cast<size_t>(b)] =
          sym(rc[static_cast<size_t>(b)] +
              sym(X_[static_cast<size_t>(b)] * apply_at_block(b, d.dy) * Zi_[static_cast<size_t>(b)]));
    }
    d.dzl = rdl_ - apply_at_lp(d.dy);
    d.dxl = rcl + (xl_.array() / zl_.array() * (rdl_ - d.dzl).array()).matrix();
    // Correct the assembled direction so that it satisfies the primal
    // equation: first through the Schur system, then by a least-squares
    // projection onto the row space.
    {
      const Vector e = rp_ - apply_a(d.dX, d.dxl, nf_ > 0 ? d.dxf : Vector::Zero(0));
      const Vector zero_free = Vector::Zero(nf_);
      const Vector w = solve_schur(e, &zero_free);
      if (!w.allFinite()) return false;
      d.dy += w;
      if (nf_ > 0) d.dxf += last_dxf_;
      for (int b = 0; b < nb_; ++b) {
        const Eigen::MatrixXd aw = apply_at_block(b, w);
        d.dZ[static_cast<size_t>(b)] -= aw;
        d.dX[static_cast<size_t>(b)] += sym(X_[static_cast<size_t>(b)] * aw * Zi_[static_cast<size_t>(b)]);
      }
      if (n_lp_ > 0) {
        const Vector lw = apply_at_lp(w);
        d.dzl -= lw;
        d.dxl += (xl_.array() / zl_.array() * lw.array()).matrix();
      }
    }
    if (m_ > 0) {
      const Vector e = rp_ - apply_a(d.dX, d.dxl, nf_ > 0 ? d.dxf : Vector::Zero(0));
      const Vector w = gram_.solve(e);
      for (int b = 0; b < nb_; ++b) d.dX[static_cast<size_t>(b)] += apply_at_block(b, w);
      if (n_lp_ > 0) d.dxl += apply_at_lp(w);
      if (nf_ > 0) d.dxf += bfree_.transpose() * w;
    }
    return true;
  }

  static double max_step_psd(const Eigen::MatrixXd& x, const Eigen::MatrixXd& dx) {
    Eigen::LLT<Eigen::MatrixXd> llt(x);
    if (llt.info() != Eigen::Success) return 0.0;
    const Eigen::MatrixXd t = llt.matrixL().solve(dx);
    Eigen::MatrixXd w = llt.matrixL().solve(t.transpose());
    w = sym(w);
    const double lmin = linalg::min_eigenvalue(w);
    if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
    return -1.0 / lmin;
  }

  static double max_step_lp(const Vector& x, const Vector& dx) {
    double a = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
    }
    return a;
  }

  void step_lengths(const Direction& d, double& ap, double& ad) const {
    double sp = max_step_lp(xl_, d.dxl);
    double sd = max_step_lp(zl_, d.dzl);
    for (int b = 0; b < nb_; ++b) {
      sp = std::min(sp, max_step_psd(X_[static_cast<size_t>(b)], d.dX[static_cast<size_t>(b)]));
      sd = std::min(sd, max_step_psd(Z_[static_cast<size_t>(b)], d.dZ[static_cast<size_t>(b)]));
    }
    ap = std::min(1.0, opt_.step_fraction * sp);
    ad = std::min(1.0, opt_.step_fraction * sd);
  }

  bool step(double& ap_out, double& ad_out) {
    if (!build_schur()) return false;
    Direction pred;
    if (!direction(0.0, nullptr, pred)) return false;
    double ap = 0.0, ad = 0.0;
    step_lengths(pred, ap, ad);
    double xz_aff = 0.0;
    for (int b = 0; b < nb_; ++b) {
      xz_aff += linalg::inner(X_[static_cast<size_t>(b)] + ap * pred.dX[static_cast<size_t>(b)],
                              Z_[static_cast<size_t>(b)] + ad * pred.dZ[static_cast<size_t>(b)]);
    }
    xz_aff += (xl_ + ap * pred.dxl).dot(zl_ + ad * pred.dzl);
    const double mu_aff = xz_aff / static_cast<double>(total_order());
    const double expon = std::max(1.0, 3.0 * std::min(ap, ad) * std::min(ap, ad));
    double sigma = mu_ > 0 ? std::pow(std::max(0.0, mu_aff / mu_), expon) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);
    Direction corr;
    if (!direction(sigma, &pred, corr)) return false;
    step_lengths(corr, ap, ad);
    if (std::min(ap, ad) < 0.1) {
      Direction centre;
      double cp = 0.0, cd = 0.0;
      if (direction(1.0, nullptr, centre)) {
        step_lengths(centre, cp, cd);
        if (std::min(cp, cd) > std::min(ap, ad)) {
          corr = std::move(centre);
          ap = cp;
          ad = cd;
        }
      }
    }
    for (int b = 0; b < nb_; ++b) {
      X_[static_cast<size_t>(b)] = sym(X_[static_cast<size_t>(b)] + ap * corr.dX[static_cast<size_t>(b)]);
      Z_[static_cast<size_t>(b)] = sym(Z_[static_cast<size_t>(b)] + ad * corr.dZ[static_cast<size_t>(b)]);
    }
    xl_ += ap * corr.dxl;
    zl_ += ad * corr.dzl;
    if (nf_ > 0) xf_ += ap * corr.dxf;
    y_ += ad * corr.dy;
    ap_out = ap;
    ad_out = ad;
    return true;
  }

  void restore(const Best& best) {
    if (best.X.empty() && nb_ > 0) return;
    X_ = best.X;
    Z_ = best.Z;
    xl_ = best.xl;
    zl_ = best.zl;
    xf_ = best.xf;
    y_ = best.y;
  }

  SdpSolution finish_fallback(int it, const std::string& why) {
    measures();
    const double merit = std::max({last_.pinf, last_.dinf, last_.relgap});
    if (opt_.feasibility_only) {
      if (last_.pinf <= opt_.tol) return finish(Status::Feasible, it, why);
      return finish(Status::MaxIter, it, why);
    }
    if (merit <= opt_.tol) return finish(Status::Optimal, it, why + " (accepted at tolerance)");
    return finish(Status::MaxIter, it, why);
  }

  SdpSolution finish(Status st, int it, const std::string& why) {
    measures();
    SdpSolution out;
    out.status = st;
    out.blocks = X_;
    out.dual_slack = Z_;
    out.free = xf_;
    out.dual = y_;
    out.kkt.primal_res = rp_.norm();
    out.kkt.dual_res = last_.dinf;
    out.kkt.gap = last_.relgap;
    out.primal_objective = last_.pobj;
    out.dual_objective = last_.dobj;
    out.iterations = it;
    out.message = why;
    return out;
  }

  const SdpInstance& inst_;
  SolverOptions opt_;
  int m_ = 0, nb_ = 0, nf_ = 0, n_lp_ = 0;
  Vector b_;
  std::vector<std::vector<std::vector<Trip>>> row_blocks_;
  std::vector<std::vector<int>> active_;
  Eigen::MatrixXd bfree_;
  std::vector<int> slack_of_row_;
  std::vector<int> lp_row_;
  Vector c_free_;
  double norm_c_ = 0.0, norm_b_ = 0.0;

  std::vector<Eigen::MatrixXd> X_, Z_, Zi_, Rd_;
  Vector xl_, zl_, xf_, y_;
  Vector rp_, rdl_, rf_;
  double mu_ = 0.0;
  Measures last_{};
  Eigen::MatrixXd M_, MiB_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::LDLT<Eigen::MatrixXd> free_lu_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> gram_;
  mutable Vector last_dxf_;
};

}  // namespace detail

inline SdpSolution solve(const SdpInstance& inst, const SolverOptions& opt = {}) {
  if (inst.num_blocks() == 0 && inst.num_free() == 0) {
    throw std::invalid_argument("sdp::solve: instance has no variables");
  }
  if (!(opt.tol > 0.0) || !(opt.target_tol > 0.0) || opt.max_iters < 1) {
    throw std::invalid_argument("sdp::solve: invalid solver options");
  }
  detail::IpmSolver solver(inst, opt);
  return solver.run();
}

/// Row residual vector b - A(X) with >= rows contributing only violations.
inline Vector row_violation(const SdpInstance& inst, const std::vector<Eigen::MatrixXd>& blocks,
                            const Vector& free) {
  Vector out(inst.num_rows());
  for (int i = 0; i < inst.num_rows(); ++i) {
    const double r = inst.evaluate_row(i, blocks, free) - inst.row(i).rhs();
    out(i) = inst.row(i).sense() == RowSense::Eq ? r : std::min(0.0, r);
  }
  return out;
}

}  // namespace lowrank::sdp
