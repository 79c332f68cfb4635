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

#include "lowrank/feasibility.hpp"
#include "lowrank/sdp.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace lowrank::sdp {
namespace {

using testing::random_psd;

/// The documented contract of an OPTIMAL answer, checked from the returned
/// blocks and multipliers rather than from the solver's own measures.
void expect_kkt(const SdpInstance& inst, const SdpSolution& s) {
  ASSERT_EQ(s.status, Status::Optimal) << s.message;
  Vector b(inst.num_rows());
  for (int i = 0; i < inst.num_rows(); ++i) b(i) = inst.row(i).rhs();
  Vector res(inst.num_rows());
  for (int i = 0; i < inst.num_rows(); ++i) {
    const double v = inst.evaluate_row(i, s.blocks, s.free) - b(i);
    res(i) = inst.row(i).sense() == RowSense::Geq ? std::min(v, 0.0) : v;
  }
  EXPECT_LE(res.norm(), 1e-8 * (1.0 + b.norm()));
  for (const auto& x : s.blocks) EXPECT_GE(linalg::min_eigenvalue(x), -1e-9);
  EXPECT_LE(s.kkt.dual_res, 1e-8);
  EXPECT_LE(s.kkt.gap, 1e-8);
  EXPECT_GE(s.primal_objective, s.dual_objective - 1e-7);
  EXPECT_NEAR(inst.objective_value(s.blocks, s.free), s.primal_objective,
              1e-9 * (1.0 + std::abs(s.primal_objective)));
}

/// sum_i y_i A_i must lie in the PSD cone blockwise with b^T y < 0.
void expect_farkas(const SdpInstance& inst, const SdpSolution& s) {
  ASSERT_EQ(s.status, Status::Infeasible) << s.message;
  ASSERT_EQ(s.farkas.size(), inst.num_rows());
  EXPECT_LE(s.farkas_pairing, -1e-6);
  double by = 0.0;
  for (int i = 0; i < inst.num_rows(); ++i) by += inst.row(i).rhs() * s.farkas(i);
  EXPECT_NEAR(by, s.farkas_pairing, 1e-9);
  for (int b = 0; b < inst.num_blocks(); ++b) {
    const int n = inst.block_dim(b);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < inst.num_rows(); ++i) {
      for (const auto& e : inst.row(i).entries()) {
        if (e.block != b) continue;
        acc(e.i, e.j) += s.farkas(i) * e.value;
        if (e.i != e.j) acc(e.j, e.i) += s.farkas(i) * e.value;
      }
    }
    EXPECT_GE(linalg::min_eigenvalue(acc), -1e-9 * std::max(1.0, acc.norm()));
  }
}

TEST(Solve, TraceMinimumWithFixedCorner) {
  SdpInstance inst;
  const int b = inst.add_psd_block(2);
  inst.set_objective(b, Eigen::MatrixXd::Identity(2, 2));
  inst.add_row(Row(RowSense::Eq, 1.0).add(b, 0, 0, 1.0));
  const SdpSolution s = solve(inst);
  expect_kkt(inst, s);
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-8);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(2, 2);
  expect(0, 0) = 1.0;
  EXPECT_LE((s.blocks[0] - expect).norm(), 1e-7);
}

TEST(Solve, NegativeDiagonalIsInfeasible) {
  SdpInstance inst;
  const int b = inst.add_psd_block(2);
  inst.set_objective(b, Eigen::MatrixXd::Identity(2, 2));
  inst.add_row(Row(RowSense::Eq, -1.0).add(b, 0, 0, 1.0));
  expect_farkas(inst, solve(inst));
}

TEST(Solve, SmallestEigenvalueOracle) {
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    const int n = 2 + t % 5;
    const Eigen::MatrixXd c = random_psd(rng, n, n);
    SdpInstance inst;
    const int b = inst.add_psd_block(n);
    inst.set_objective(b, c);
    inst.add_row(Row(RowSense::Eq, 1.0).add_matrix(b, Eigen::MatrixXd::Identity(n, n)));
    const SdpSolution s = solve(inst);
    expect_kkt(inst, s);
    const auto ed = linalg::sym_eig(SymMatrix(c));
    EXPECT_NEAR(s.primal_objective, ed.values(n - 1), 1e-7 * (1.0 + ed.values(0)));
    const Vector u = ed.vectors.col(n - 1);
    if (ed.values(n - 2) - ed.values(n - 1) > 1e-3) {
      EXPECT_LE((s.blocks[0] - u * u.transpose()).norm(), 1e-5);
    }
  }
}

TEST(Solve, InequalityRows) {
  SdpInstance inst;
  const int b = inst.add_psd_block(3);
  inst.set_objective(b, Eigen::MatrixXd::Identity(3, 3));
  inst.add_row(Row(RowSense::Geq, 2.0).add(b, 1, 1, 1.0));
  inst.add_row(Row(RowSense::Geq, -5.0).add(b, 0, 0, -1.0));
  const SdpSolution s = solve(inst);
  expect_kkt(inst, s);
  EXPECT_NEAR(s.primal_objective, 2.0, 1e-7);
}

TEST(Solve, FreeVariables) {
  SdpInstance inst;
  const int b = inst.add_psd_block(2);
  const int f = inst.add_free(1);
  inst.set_objective(b, Eigen::MatrixXd::Identity(2, 2));
  inst.set_free_objective(f, 1.0);
  inst.add_row(Row(RowSense::Eq, 0.0).add_free(f, 1.0).add(b, 0, 0, -1.0));
  inst.add_row(Row(RowSense::Eq, 1.0).add(b, 0, 1, 1.0));
  const SdpSolution s = solve(inst);
  expect_kkt(inst, s);
  // min 2 X00 + X11 with X01 = 1: X00 X11 >= 1 gives 2 sqrt(2).
  EXPECT_NEAR(s.primal_objective, 2.0 * std::sqrt(2.0), 1e-7);
  EXPECT_NEAR(s.free(0), s.blocks[0](0, 0), 1e-8);
}

TEST(Solve, SuperBlockDeterminantOracle) {
  // [[y, x], [x, z]] PSD, y = z = 1, minimize -x: the determinant bound gives x = 1.
  SdpInstance inst;
  const int b = inst.add_psd_block(2);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
  c(0, 1) = c(1, 0) = -0.5;
  inst.set_objective(b, c);
  inst.add_row(Row(RowSense::Eq, 1.0).add(b, 0, 0, 1.0));
  inst.add_row(Row(RowSense::Eq, 1.0).add(b, 1, 1, 1.0));
  const SdpSolution s = solve(inst);
  expect_kkt(inst, s);
  EXPECT_NEAR(s.blocks[0](0, 1), 1.0, 1e-6);
}

TEST(Solve, OffDiagonalForcedToZeroDecouples) {
  // With X = 0 forced the super-block splits into independent diagonal parts.
  SdpInstance inst;
  const int b = inst.add_psd_block(4);
  inst.set_objective(b, Eigen::MatrixXd::Identity(4, 4));
  for (int i = 0; i < 2; ++i) {
    for (int j = 2; j < 4; ++j) inst.add_row(Row(RowSense::Eq, 0.0).add(b, i, j, 1.0));
  }
  inst.add_row(Row(RowSense::Eq, 1.0).add(b, 0, 0, 1.0));
  inst.add_row(Row(RowSense::Eq, 2.0).add(b, 3, 3, 1.0));
  const SdpSolution s = solve(inst);
  expect_kkt(inst, s);
  EXPECT_NEAR(s.primal_objective, 3.0, 1e-7);
  EXPECT_LE(s.blocks[0].block(0, 2, 2, 2).norm(), 1e-7);
}

SdpInstance random_feasible(Rng& rng) {
  SdpInstance inst;
  const int n = 5;
  const int b = inst.add_psd_block(n);
  const Eigen::MatrixXd x0 = random_psd(rng, n, n) + 0.1 * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd c = random_psd(rng, n, n) + 0.1 * Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < 6; ++i) {
    const Eigen::MatrixXd a = testing::random_sym(rng, n);
    c += rng.normal() * a;
    inst.add_row(Row(RowSense::Eq, linalg::inner(a, x0)).add_matrix(b, a));
  }
  inst.set_objective(b, c);
  return inst;
}

TEST(Solve, BitwiseDeterministic) {
  Rng rng(32);
  const SdpInstance inst = random_feasible(rng);
  const SdpSolution a = solve(inst);
  const SdpSolution b = solve(inst);
  ASSERT_EQ(a.status, Status::Optimal);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_TRUE((a.blocks[0].array() == b.blocks[0].array()).all());
  EXPECT_TRUE((a.dual.array() == b.dual.array()).all());
}

TEST(Solve, ScalingRowsLeavesSolution) {
  Rng rng(33);
  for (int t = 0; t < 5; ++t) {
    const SdpInstance inst = random_feasible(rng);
    SdpInstance scaled;
    scaled.add_psd_block(inst.block_dim(0));
    scaled.set_objective(0, inst.objective(0));
    for (const auto& r : inst.rows()) {
      Row s(r.sense(), 10.0 * r.rhs());
      for (const auto& e : r.entries()) s.add(e.block, e.i, e.j, e.i == e.j ? 10.0 * e.value : 20.0 * e.value);
      scaled.add_row(s);
    }
    const SdpSolution a = solve(inst);
    const SdpSolution b = solve(scaled);
    expect_kkt(inst, a);
    expect_kkt(scaled, b);
    // Iterates agree only to sqrt(gap); compare value and face rank.
    EXPECT_NEAR(a.primal_objective, b.primal_objective, 1e-8 * (1.0 + std::abs(a.primal_objective)));
    EXPECT_EQ(linalg::numerical_rank(linalg::sym_eigenvalues(SymMatrix(a.blocks[0])), 1e-4),
              linalg::numerical_rank(linalg::sym_eigenvalues(SymMatrix(b.blocks[0])), 1e-4));
  }
}

TEST(Solve, RandomFeasibleBatchMeetsContract) {
  Rng rng(34);
  for (int t = 0; t < 20; ++t) {
    const SdpInstance inst = random_feasible(rng);
    expect_kkt(inst, solve(inst));
  }
}

TEST(Solve, UnboundedIsNotOptimal) {
  SdpInstance inst;
  const int b = inst.add_psd_block(2);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
  c(0, 0) = -1.0;
  inst.set_objective(b, c);
  inst.add_row(Row(RowSense::Eq, 0.0).add(b, 0, 1, 1.0));
  const SdpSolution s = solve(inst);
  EXPECT_NE(s.status, Status::Optimal);
}

TEST(Solve, RejectsBadOptionsAndData) {
  SdpInstance inst;
  const int b = inst.add_psd_block(2);
  inst.add_row(Row(RowSense::Eq, 1.0).add(b, 0, 0, 1.0));
  SolverOptions o;
  o.tol = -1.0;
  EXPECT_THROW(solve(inst, o), std::invalid_argument);
  EXPECT_THROW(inst.add_row(Row(RowSense::Eq, std::nan("")).add(b, 0, 0, 1.0)), std::invalid_argument);
  EXPECT_THROW(inst.add_row(Row(RowSense::Eq, 1.0).add(3, 0, 0, 1.0)), std::invalid_argument);
}

TEST(Instance, DumpParseRoundTrip) {
  Rng rng(35);
  const SdpInstance inst = random_feasible(rng);
  std::stringstream ss;
  inst.dump(ss);
  const SdpInstance back = SdpInstance::parse(ss);
  ASSERT_EQ(back.num_rows(), inst.num_rows());
  const SdpSolution a = solve(inst);
  const SdpSolution b = solve(back);
  EXPECT_NEAR(a.primal_objective, b.primal_objective, 1e-7 * (1.0 + std::abs(a.primal_objective)));
}

// ---------------------------------------------------------------------------
// Phase 1.

TEST(Phase1, TraceRow) {
  LmeProblem p = LmeProblem::psd(2);
  p.add_row(Eigen::MatrixXd::Identity(2, 2), 2.0);
  const FeasiblePoint fp = phase1_feasible(p);
  ASSERT_TRUE(fp.feasible()) << fp.message;
  EXPECT_LE(p.residual_norm(fp.lifted.mat()), 1e-8 * (1.0 + p.rhs_norm()));
  EXPECT_GE(linalg::min_eigenvalue(fp.lifted.mat()), -1e-9);
}

TEST(Phase1, PlantedInstances) {
  Rng rng(36);
  for (int t = 0; t < 10; ++t) {
    const int n = 3 + t % 4;
    const Vector x = rng.normal_vector(n);
    LmeProblem p = LmeProblem::psd(n);
    for (int i = 0; i < 2 * n; ++i) {
      const Eigen::MatrixXd a = testing::random_sym(rng, n);
      p.add_row(a, x.dot(a * x));
    }
    const FeasiblePoint fp = phase1_feasible(p);
    ASSERT_TRUE(fp.feasible()) << fp.message;
    EXPECT_LE(p.residual_norm(fp.lifted.mat()), 1e-8 * (1.0 + p.rhs_norm()));
    EXPECT_GE(linalg::min_eigenvalue(fp.lifted.mat()), -1e-9);
  }
}

TEST(Phase1, NegativeDiagonalInfeasible) {
  LmeProblem p = LmeProblem::psd(2);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  a(0, 0) = 1.0;
  p.add_row(a, -1.0);
  const FeasiblePoint fp = phase1_feasible(p);
  EXPECT_FALSE(fp.feasible());
  EXPECT_EQ(fp.status, Status::Infeasible);
}

TEST(Phase1, RectangularSuperBlock) {
  Rng rng(37);
  const Eigen::MatrixXd x = rng.normal_matrix(3, 1) * rng.normal_matrix(1, 4);
  LmeProblem p = LmeProblem::rect(3, 4);
  for (int i = 0; i < 6; ++i) {
    const Eigen::MatrixXd a = rng.normal_matrix(3, 4);
    p.add_row(a, linalg::inner(a, x));
  }
  const FeasiblePoint fp = phase1_feasible(p);
  ASSERT_TRUE(fp.feasible()) << fp.message;
  ASSERT_EQ(fp.lifted.dim(), 7);
  EXPECT_GE(linalg::min_eigenvalue(fp.lifted.mat()), -1e-9);
  EXPECT_LE(p.residual_norm(offdiag_part(fp.lifted.mat(), 3, 4)), 1e-8 * (1.0 + p.rhs_norm()));
}

}  // namespace
}  // namespace lowrank::sdp
