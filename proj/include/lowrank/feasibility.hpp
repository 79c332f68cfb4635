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

// Glue between LmeProblem rows and SdpInstance blocks, and the phase-1
// routine that produces PSD starting points.

#pragma once

#include "lowrank/problem.hpp"
#include "lowrank/sdp.hpp"

#include <span>
#include <string>
#include <vector>

namespace lowrank::sdp {

namespace detail {

inline RowSense to_row_sense(Sense s) { return s == Sense::Eq ? RowSense::Eq : RowSense::Geq; }
inline double sense_sign(Sense s) { return s == Sense::Leq ? -1.0 : 1.0; }

}  // namespace detail

/// Adds every problem row applied to the sum of the given PSD blocks.
/// <= rows are negated into >= rows.
inline void add_rows_on_sum(SdpInstance& inst, const LmeProblem& prob, std::span<const int> blocks) {
  if (!prob.is_psd()) throw std::invalid_argument("add_rows_on_sum: PSD problem required");
  for (const auto& r : prob.rows()) {
    const double sg = detail::sense_sign(r.sense);
    Row row(detail::to_row_sense(r.sense), sg * r.rhs);
    for (int b : blocks) row.add_matrix(b, sg * r.coeff);
    inst.add_row(std::move(row));
  }
}

/// Adds every problem row applied to the off-diagonal N x M part of an
/// (N+M)-dimensional super-block [[F, X], [X^T, G]].
inline void add_rows_on_offdiag(SdpInstance& inst, const LmeProblem& prob, int block) {
  const int n = prob.rows_dim();
  for (const auto& r : prob.rows()) {
    const double sg = detail::sense_sign(r.sense);
    Row row(detail::to_row_sense(r.sense), sg * r.rhs);
    for (Eigen::Index j = 0; j < r.coeff.cols(); ++j) {
      for (Eigen::Index i = 0; i < r.coeff.rows(); ++i) {
        if (r.coeff(i, j) != 0.0) row.add(block, static_cast<int>(i), n + static_cast<int>(j), sg * r.coeff(i, j));
      }
    }
    inst.add_row(std::move(row));
  }
}

/// Ties the diagonal sub-block of `super` starting at `offset` to the sum of
/// `parts`: super(offset+i, offset+j) = sum_k parts_k(i, j).
inline void add_linking_rows(SdpInstance& inst, int super, int offset, int dim, std::span<const int> parts) {
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i <= j; ++i) {
      Row row(RowSense::Eq, 0.0);
      row.add(super, offset + i, offset + j, 1.0);
      for (int p : parts) row.add(p, i, j, -1.0);
      inst.add_row(std::move(row));
    }
  }
}

/// Starting point for the heuristics. For PSD problems `lifted` is X0; for
/// rectangular problems it is the super-block [[F0, X0], [X0^T, G0]].
struct FeasiblePoint {
  Status status = Status::MaxIter;
  SymMatrix lifted;
  double residual = 0.0;
  std::string message;

  bool feasible() const { return status == Status::Feasible || status == Status::Optimal; }
};

inline Eigen::MatrixXd offdiag_part(const Eigen::MatrixXd& super, int n, int m) {
  return super.block(0, n, n, m);
}

/// Finds a PSD point satisfying the rows to 1e-8 (1 + ||b||) by running the
/// interior-point method on the zero-objective feasibility SDP and stopping
/// at the first primal-feasible interior iterate. Rectangular problems are
/// lifted to the super-block.
inline FeasiblePoint phase1_feasible(const LmeProblem& prob) {
  SdpInstance inst;
  int block = 0;
  if (prob.is_psd()) {
    block = inst.add_psd_block(prob.rows_dim());
    const int blocks[] = {block};
    add_rows_on_sum(inst, prob, blocks);
  } else {
    block = inst.add_psd_block(prob.rows_dim() + prob.cols_dim());
    add_rows_on_offdiag(inst, prob, block);
  }
  FeasiblePoint out;
  if (prob.num_rows() == 0) {
    out.status = Status::Feasible;
    out.lifted = SymMatrix::identity(inst.block_dim(block));
    out.message = "no rows";
    return out;
  }
  SolverOptions opt;
  opt.feasibility_only = true;
  const SdpSolution sol = solve(inst, opt);
  out.status = sol.status;
  out.message = sol.message;
  if (sol.blocks.empty()) return out;
  out.lifted = SymMatrix(sol.blocks[static_cast<size_t>(block)]);
  const Eigen::MatrixXd x = prob.is_psd() ? out.lifted.mat()
                                          : offdiag_part(out.lifted.mat(), prob.rows_dim(), prob.cols_dim());
  out.residual = prob.residual_norm(x);
  return out;
}

}  // namespace lowrank::sdp
