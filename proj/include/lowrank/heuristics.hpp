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

// Rank-r feasibility heuristics driven by the particular-rank functional.
//
// All four methods share one convex subproblem per outer iteration. For the
// PSD shape, with G_k the k-th gradient block of P_r at the current blocks,
//
//   minimize    sum_k <G_k, S_k>
//   subject to  S_k PSD, rows of the problem applied to sum_k S_k.
//
// The gradient methods step from X toward S (X <- X - t (X - S)); the
// bilinear methods jump to S and re-split it into rank-one blocks. The
// rectangular shape adds a super-block B = [[sum S_F, X], [X^T, sum S_G]]
// that must stay PSD, with the problem rows acting on X.

#pragma once

#include "lowrank/feasibility.hpp"
#include "lowrank/functionals.hpp"
#include "lowrank/problem.hpp"
#include "lowrank/random.hpp"
#include "lowrank/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lowrank {

enum class LineSearch { Paper, Exact };
enum class BlockSplit { Equal, Seeded };
enum class Method { Gradient, Bilinear };

inline const char* to_string(LineSearch l) { return l == LineSearch::Paper ? "paper" : "exact"; }
inline const char* to_string(BlockSplit s) { return s == BlockSplit::Equal ? "equal" : "seeded"; }
inline const char* to_string(Method m) { return m == Method::Gradient ? "gradient" : "bilinear"; }

struct HeuristicConfig {
  int max_iters = 100;
  double rank_tol = 1e-8;
  bool warm_start = false;
  std::uint64_t seed = 0;
  LineSearch line_search = LineSearch::Paper;
  /// Initial split of X0 across r >= 2 gradient blocks. Equal copies X0/r
  /// are a symmetric point of the subproblem and never separate.
  BlockSplit split = BlockSplit::Seeded;
  /// Starting point. PSD shape: N x N. Rectangular shape: the (N+M) super-block.
  std::optional<Eigen::MatrixXd> initial;
  /// Rectangular shape only: the subproblem super-block keeps
  /// Tr(B) <= trace_cap * Tr(Z0), Z0 the starting super-block. Without a
  /// cap the subproblem infimum can be approached only as F and G diverge.
  /// Zero disables the cap.
  double trace_cap = 1.0;
  sdp::SolverOptions sdp = default_sdp();

  static sdp::SolverOptions default_sdp() {
    sdp::SolverOptions o;
    o.tol = 1e-6;
    o.target_tol = 1e-10;
    return o;
  }

  void validate() const {
    if (max_iters < 1) throw std::invalid_argument("HeuristicConfig: max_iters must be at least 1");
    if (!(rank_tol > 0.0)) throw std::invalid_argument("HeuristicConfig: rank_tol must be positive");
    if (!(trace_cap >= 0.0)) throw std::invalid_argument("HeuristicConfig: trace_cap must be nonnegative");
  }
};

struct RankCertificate {
  /// Descending eigenvalues (PSD) or singular values (rectangular).
  Vector spectrum;
  int target_rank = 0;
  int achieved_rank = 0;
  double tol = 1e-8;
  double residual = 0.0;
  double residual_bound = 0.0;
  bool success = false;
};

/// Builds a certificate from scratch: fresh decomposition and residual.
inline RankCertificate certify(const LmeProblem& prob, const Eigen::MatrixXd& x, int r, double tol = 1e-8) {
  RankCertificate c;
  c.target_rank = r;
  c.tol = tol;
  c.spectrum = prob.is_psd() ? linalg::sym_eigenvalues(SymMatrix(x)) : linalg::singular_values(x);
  c.achieved_rank = linalg::numerical_rank(c.spectrum, tol);
  c.residual = prob.residual_norm(x);
  c.residual_bound = 1e-6 * (1.0 + prob.rhs_norm());
  c.success = c.achieved_rank <= r && c.residual <= c.residual_bound;
  return c;
}

inline bool verify_certificate(const LmeProblem& prob, const Eigen::MatrixXd& x, const RankCertificate& c) {
  const RankCertificate fresh = certify(prob, x, c.target_rank, c.tol);
  return fresh.success == c.success && fresh.achieved_rank == c.achieved_rank;
}

struct TrajectoryRecord {
  int iteration = 0;
  double functional = 0.0;
  double step = 0.0;
  double residual = 0.0;
  double min_eig = 0.0;
};

inline void write_trajectory(std::ostream& os, const std::vector<TrajectoryRecord>& traj) {
  os << std::left << std::setw(6) << "iter" << ' ' << std::setw(20) << "functional" << ' ' << std::setw(20)
     << "step" << ' ' << std::setw(20) << "residual" << ' ' << "min_eig" << '\n';
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(12);
  for (const auto& t : traj) {
    os << std::setw(6) << t.iteration << ' ' << std::setw(20) << t.functional << ' ' << std::setw(20) << t.step
       << ' ' << std::setw(20) << t.residual << ' ' << t.min_eig << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

enum class RunOutcome { Certified, NotCertified, Infeasible, SolverFailure };

inline const char* to_string(RunOutcome o) {
  switch (o) {
    case RunOutcome::Certified: return "certified";
    case RunOutcome::NotCertified: return "not-certified";
    case RunOutcome::Infeasible: return "infeasible";
    case RunOutcome::SolverFailure: return "solver-failure";
  }
  return "?";
}

struct PsdHeuristicState {
  BlockTuple blocks;
  /// The matrix being certified. Equals blocks.sum() for gradient runs; for
  /// bilinear runs it is the untruncated subproblem solution Y J.
  SymMatrix aggregate;
  int iterations = 0;
  double functional = 0.0;

  RectMatrix replicator() const { return linalg::replicator(blocks.size(), blocks.dim()); }
};

struct GeneralHeuristicState {
  RectMatrix x;
  BlockTuple f;
  BlockTuple g;
  /// Super-block [[F J_F, X], [X^T, G J_G]] of the current iterate.
  SymMatrix lifted;
  int iterations = 0;
  double functional = 0.0;
};

struct PsdRun {
  RunOutcome outcome = RunOutcome::NotCertified;
  PsdHeuristicState state;
  RankCertificate certificate;
  std::vector<TrajectoryRecord> trajectory;
  std::string message;
};

struct GeneralRun {
  RunOutcome outcome = RunOutcome::NotCertified;
  GeneralHeuristicState state;
  RankCertificate certificate;
  std::vector<TrajectoryRecord> trajectory;
  std::string message;
};

namespace detail {

inline void check_rank(const LmeProblem& prob, int r) {
  if (r < 1 || r > prob.max_rank()) throw std::invalid_argument("heuristic: rank out of range");
}

inline Eigen::MatrixXd psd_sqrt(const SymMatrix& x) {
  const EigenDecomposition ed = linalg::sym_eig(x);
  const Vector s = ed.values.cwiseMax(0.0).cwiseSqrt();
  return ed.vectors * s.asDiagonal() * ed.vectors.transpose();
}

/// X0^{1/2} V D_k V^T X0^{1/2} with V Haar-random and the D_k a partition of
/// the identity, so the blocks are PSD and sum to X0.
inline BlockTuple seeded_split(const SymMatrix& x0, int r, Rng& rng) {
  const int n = x0.dim();
  const Eigen::MatrixXd root = psd_sqrt(x0);
  const Eigen::MatrixXd v = rng.orthogonal(n);
  std::vector<SymMatrix> blocks;
  for (int k = 0; k < r; ++k) {
    Vector d = Vector::Zero(n);
    for (int i = k; i < n; i += r) d(i) = 1.0;
    const Eigen::MatrixXd w = v * d.asDiagonal() * v.transpose();
    blocks.emplace_back(root * w * root);
  }
  return BlockTuple(std::move(blocks));
}

inline BlockTuple initial_split(const SymMatrix& x0, int r, BlockSplit split, Rng& rng) {
  if (r == 1) return BlockTuple({x0});
  return split == BlockSplit::Equal ? BlockTuple::equal_split(x0, r) : seeded_split(x0, r, rng);
}

/// Top-r rank-one terms lambda_k u_k u_k^T of a symmetric matrix, restricted
/// to the index range [offset, offset + dim).
inline BlockTuple rank_one_split(const EigenDecomposition& ed, int r, int offset, int dim) {
  std::vector<SymMatrix> blocks;
  for (int k = 0; k < r; ++k) {
    const double lam = std::max(0.0, ed.values(k));
    const Vector u = ed.vectors.col(k).segment(offset, dim);
    blocks.emplace_back(lam * u * u.transpose());
  }
  return BlockTuple(std::move(blocks));
}

inline double min_block_eig(const BlockTuple& t) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : t.blocks()) m = std::min(m, linalg::min_eigenvalue(b.mat()));
  return m;
}

inline std::vector<SymMatrix> to_sym(const std::vector<Eigen::MatrixXd>& blocks, int first, int count) {
  std::vector<SymMatrix> out;
  for (int k = 0; k < count; ++k) out.emplace_back(blocks[static_cast<size_t>(first + k)]);
  return out;
}

inline double pair_sum(const BlockTuple& a, const std::vector<SymMatrix>& b) {
  double s = 0.0;
  for (int k = 0; k < a.size(); ++k) s += linalg::inner(a[k].mat(), b[static_cast<size_t>(k)].mat());
  return s;
}

inline BlockTuple combine(const BlockTuple& x, const BlockTuple& s, double t) {
  std::vector<SymMatrix> out;
  for (int k = 0; k < x.size(); ++k) out.emplace_back((1.0 - t) * x[k].mat() + t * s[k].mat());
  return BlockTuple(std::move(out));
}

inline BlockTuple difference(const BlockTuple& x, const BlockTuple& s) {
  std::vector<SymMatrix> out;
  for (int k = 0; k < x.size(); ++k) out.push_back(x[k] - s[k]);
  return BlockTuple(std::move(out));
}

/// Subproblem solutions are used when optimal, or when the solver stopped
/// early at a primal-feasible point whose relative gap is below kInexactGap.
inline constexpr double kInexactGap = 1e-4;

inline bool usable(const sdp::SdpSolution& sol, const LmeProblem& prob) {
  if (sol.status == sdp::Status::Optimal) return true;
  if (sol.status != sdp::Status::MaxIter || sol.blocks.empty()) return false;
  return sol.kkt.primal_res <= 1e-9 * (1.0 + prob.rhs_norm()) && sol.kkt.gap <= kInexactGap;
}

struct PsdSubproblem {
  sdp::SdpSolution sol;
  BlockTuple s;
};

inline PsdSubproblem solve_psd_subproblem(const LmeProblem& prob, const std::vector<SymMatrix>& grads,
                                          const sdp::SolverOptions& opt) {
  sdp::SdpInstance inst;
  std::vector<int> ids;
  for (const auto& g : grads) {
    const int id = inst.add_psd_block(g.dim());
    inst.set_objective(id, g.mat());
    ids.push_back(id);
  }
  sdp::add_rows_on_sum(inst, prob, ids);
  PsdSubproblem out;
  out.sol = sdp::solve(inst, opt);
  if (usable(out.sol, prob)) {
    out.s = BlockTuple(to_sym(out.sol.blocks, 0, static_cast<int>(grads.size())));
  }
  return out;
}

struct GeneralSubproblem {
  sdp::SdpSolution sol;
  BlockTuple sf;
  BlockTuple sg;
  SymMatrix super;
};

inline GeneralSubproblem solve_general_subproblem(const LmeProblem& prob, const std::vector<SymMatrix>& gf,
                                                  const std::vector<SymMatrix>& gg, double trace_cap,
                                                  const sdp::SolverOptions& opt) {
  const int n = prob.rows_dim();
  const int m = prob.cols_dim();
  const int r = static_cast<int>(gf.size());
  sdp::SdpInstance inst;
  std::vector<int> fid, gid;
  for (const auto& g : gf) {
    fid.push_back(inst.add_psd_block(n));
    inst.set_objective(fid.back(), g.mat());
  }
  for (const auto& g : gg) {
    gid.push_back(inst.add_psd_block(m));
    inst.set_objective(gid.back(), g.mat());
  }
  const int super = inst.add_psd_block(n + m);
  sdp::add_linking_rows(inst, super, 0, n, fid);
  sdp::add_linking_rows(inst, super, n, m, gid);
  sdp::add_rows_on_offdiag(inst, prob, super);
  if (trace_cap > 0.0) {
    sdp::Row cap(sdp::RowSense::Geq, -trace_cap);
    for (int i = 0; i < n + m; ++i) cap.add(super, i, i, -1.0);
    inst.add_row(std::move(cap));
  }
  GeneralSubproblem out;
  out.sol = sdp::solve(inst, opt);
  if (usable(out.sol, prob)) {
    out.sf = BlockTuple(to_sym(out.sol.blocks, 0, r));
    out.sg = BlockTuple(to_sym(out.sol.blocks, r, r));
    out.super = SymMatrix(out.sol.blocks[static_cast<size_t>(super)]);
  }
  return out;
}

inline SymMatrix lift(const RectMatrix& x, const SymMatrix& f, const SymMatrix& g) {
  const auto n = x.rows();
  const auto m = x.cols();
  Eigen::MatrixXd z(n + m, n + m);
  z << f.mat(), x, x.transpose(), g.mat();
  return SymMatrix(z);
}

/// Starting point for PSD runs; nullopt when phase 1 fails.
inline std::optional<SymMatrix> psd_start(const LmeProblem& prob, const HeuristicConfig& cfg, std::string& msg) {
  if (cfg.initial.has_value()) {
    const Eigen::MatrixXd& x = *cfg.initial;
    if (x.rows() != prob.rows_dim() || x.cols() != prob.rows_dim()) {
      throw std::invalid_argument("heuristic: initial matrix has the wrong shape");
    }
    return linalg::psd_part(SymMatrix(x));
  }
  const sdp::FeasiblePoint fp = sdp::phase1_feasible(prob);
  if (!fp.feasible()) {
    msg = std::string("phase 1 ") + sdp::to_string(fp.status) + ": " + fp.message;
    return std::nullopt;
  }
  return fp.lifted;
}

inline std::optional<SymMatrix> general_start(const LmeProblem& prob, const HeuristicConfig& cfg, std::string& msg) {
  const int d = prob.rows_dim() + prob.cols_dim();
  if (cfg.initial.has_value()) {
    const Eigen::MatrixXd& z = *cfg.initial;
    if (z.rows() != d || z.cols() != d) throw std::invalid_argument("heuristic: initial super-block has the wrong shape");
    return SymMatrix(z);
  }
  const sdp::FeasiblePoint fp = sdp::phase1_feasible(prob);
  if (!fp.feasible()) {
    msg = std::string("phase 1 ") + sdp::to_string(fp.status) + ": " + fp.message;
    return std::nullopt;
  }
  return fp.lifted;
}

inline std::string subproblem_failure(const sdp::SdpSolution& sol) {
  return std::string("subproblem ") + sdp::to_string(sol.status) + ": " + sol.message;
}

inline bool psd_wants_stop(const LmeProblem& prob, const SymMatrix& agg, int r, const HeuristicConfig& cfg,
                           RankCertificate& cert) {
  cert = certify(prob, agg.mat(), r, cfg.rank_tol);
  return cert.success;
}

/// Step length on P(t) = a - 2 t c + t^2 d along the segment toward S.
inline double initial_step(double a, double c, double d, LineSearch ls) {
  if (!(c > 0.0)) return 0.0;
  if (ls == LineSearch::Paper) return std::min(1.0, c / a);
  if (!(d > 0.0)) return 1.0;
  return std::clamp(c / d, 0.0, 1.0);
}

}  // namespace detail

/// Division guard on the functional value before a gradient step.
inline constexpr double kFunctionalFloor = 1e-14;
/// Allowed increase of the functional on an accepted gradient step.
inline constexpr double kMonotoneSlack = 1e-9;
inline constexpr int kMaxHalvings = 30;

inline PsdRun gradient_psd(const LmeProblem& prob, int r, const HeuristicConfig& cfg = {}) {
  if (!prob.is_psd()) throw std::invalid_argument("gradient_psd: PSD problem required");
  detail::check_rank(prob, r);
  cfg.validate();
  PsdRun run;
  auto x0 = detail::psd_start(prob, cfg, run.message);
  if (!x0) {
    run.outcome = RunOutcome::Infeasible;
    run.certificate.target_rank = r;
    return run;
  }
  Rng rng(cfg.seed);
  auto& st = run.state;
  st.blocks = detail::initial_split(*x0, r, cfg.split, rng);
  st.aggregate = st.blocks.sum();
  st.functional = functional::prf(st.blocks);
  run.trajectory.push_back({0, st.functional, 0.0, prob.residual_norm(st.aggregate.mat()), detail::min_block_eig(st.blocks)});

  for (int count = 1; count <= cfg.max_iters; ++count) {
    const double a = st.functional;
    if (a <= std::max(cfg.rank_tol * cfg.rank_tol, kFunctionalFloor)) {
      run.message = "functional at zero";
      break;
    }
    if (detail::psd_wants_stop(prob, st.aggregate, r, cfg, run.certificate)) {
      run.message = "rank test passed";
      break;
    }
    const auto grads = functional::prf_gradient_blocks(st.blocks);
    const auto sub = detail::solve_psd_subproblem(prob, grads, cfg.sdp);
    if (!detail::usable(sub.sol, prob)) {
      run.outcome = RunOutcome::SolverFailure;
      run.message = detail::subproblem_failure(sub.sol);
      run.certificate = certify(prob, st.aggregate.mat(), r, cfg.rank_tol);
      return run;
    }
    const BlockTuple delta = detail::difference(st.blocks, sub.s);
    const double c = detail::pair_sum(delta, grads);
    const double d = functional::prf(delta);
    double t = detail::initial_step(a, c, d, cfg.line_search);
    BlockTuple next = detail::combine(st.blocks, sub.s, t);
    double pn = functional::prf(next);
    for (int h = 0; h < kMaxHalvings && pn > a + kMonotoneSlack; ++h) {
      t *= 0.5;
      next = detail::combine(st.blocks, sub.s, t);
      pn = functional::prf(next);
    }
    if (t == 0.0 || pn > a + kMonotoneSlack) {
      run.message = "no descent along subproblem direction";
      break;
    }
    st.blocks = std::move(next);
    st.aggregate = st.blocks.sum();
    st.functional = pn;
    st.iterations = count;
    run.trajectory.push_back(
        {count, pn, t, prob.residual_norm(st.aggregate.mat()), detail::min_block_eig(st.blocks)});
  }
  run.certificate = certify(prob, st.aggregate.mat(), r, cfg.rank_tol);
  run.outcome = run.certificate.success ? RunOutcome::Certified : RunOutcome::NotCertified;
  if (run.message.empty()) run.message = "iteration limit";
  return run;
}

inline PsdRun bilinear_psd(const LmeProblem& prob, int r, const HeuristicConfig& cfg = {}) {
  if (!prob.is_psd()) throw std::invalid_argument("bilinear_psd: PSD problem required");
  detail::check_rank(prob, r);
  cfg.validate();
  PsdRun run;
  auto x0 = detail::psd_start(prob, cfg, run.message);
  if (!x0) {
    run.outcome = RunOutcome::Infeasible;
    run.certificate.target_rank = r;
    return run;
  }
  auto& st = run.state;
  st.aggregate = *x0;
  st.blocks = detail::rank_one_split(linalg::sym_eig(st.aggregate), r, 0, st.aggregate.dim());
  st.functional = functional::prf(st.blocks);
  run.trajectory.push_back({0, st.functional, 0.0, prob.residual_norm(st.aggregate.mat()),
                            linalg::min_eigenvalue(st.aggregate.mat())});

  for (int count = 1; count <= cfg.max_iters; ++count) {
    if (detail::psd_wants_stop(prob, st.aggregate, r, cfg, run.certificate)) {
      run.message = "rank test passed";
      break;
    }
    const auto grads = functional::prf_gradient_blocks(st.blocks);
    const auto sub = detail::solve_psd_subproblem(prob, grads, cfg.sdp);
    if (!detail::usable(sub.sol, prob)) {
      run.outcome = RunOutcome::SolverFailure;
      run.message = detail::subproblem_failure(sub.sol);
      run.certificate = certify(prob, st.aggregate.mat(), r, cfg.rank_tol);
      return run;
    }
    st.aggregate = sub.s.sum();
    st.blocks = detail::rank_one_split(linalg::sym_eig(st.aggregate), r, 0, st.aggregate.dim());
    st.functional = functional::prf(st.blocks);
    st.iterations = count;
    run.trajectory.push_back({count, st.functional, 1.0, prob.residual_norm(st.aggregate.mat()),
                              linalg::min_eigenvalue(st.aggregate.mat())});
  }
  run.certificate = certify(prob, st.aggregate.mat(), r, cfg.rank_tol);
  run.outcome = run.certificate.success ? RunOutcome::Certified : RunOutcome::NotCertified;
  if (run.message.empty()) run.message = "iteration limit";
  return run;
}

inline GeneralRun gradient_general(const LmeProblem& prob, int r, const HeuristicConfig& cfg = {}) {
  detail::check_rank(prob, r);
  cfg.validate();
  const int n = prob.rows_dim();
  const int m = prob.cols_dim();
  GeneralRun run;
  auto z0 = detail::general_start(prob, cfg, run.message);
  if (!z0) {
    run.outcome = RunOutcome::Infeasible;
    run.certificate.target_rank = r;
    return run;
  }
  Rng rng(cfg.seed);
  auto& st = run.state;
  const double cap = cfg.trace_cap * z0->trace();
  const Eigen::MatrixXd& z = z0->mat();
  st.x = z.block(0, n, n, m);
  st.f = detail::initial_split(SymMatrix(z.topLeftCorner(n, n)), r, cfg.split, rng);
  st.g = detail::initial_split(SymMatrix(z.bottomRightCorner(m, m)), r, cfg.split, rng);
  st.lifted = detail::lift(st.x, st.f.sum(), st.g.sum());
  st.functional = functional::prf(st.f) + functional::prf(st.g);
  run.trajectory.push_back({0, st.functional, 0.0, prob.residual_norm(st.x), linalg::min_eigenvalue(st.lifted.mat())});

  for (int count = 1; count <= cfg.max_iters; ++count) {
    const double af = functional::prf(st.f);
    const double ag = functional::prf(st.g);
    const double floor = std::max(cfg.rank_tol * cfg.rank_tol, kFunctionalFloor);
    if (af <= floor && ag <= floor) {
      run.message = "functional at zero";
      break;
    }
    run.certificate = certify(prob, st.x, r, cfg.rank_tol);
    if (run.certificate.success) {
      run.message = "rank test passed";
      break;
    }
    const auto gf = functional::prf_gradient_blocks(st.f);
    const auto gg = functional::prf_gradient_blocks(st.g);
    const auto sub = detail::solve_general_subproblem(prob, gf, gg, cap, cfg.sdp);
    if (!detail::usable(sub.sol, prob)) {
      run.outcome = RunOutcome::SolverFailure;
      run.message = detail::subproblem_failure(sub.sol);
      run.certificate = certify(prob, st.x, r, cfg.rank_tol);
      return run;
    }
    const BlockTuple df = detail::difference(st.f, sub.sf);
    const BlockTuple dg = detail::difference(st.g, sub.sg);
    const double cf = detail::pair_sum(df, gf);
    const double cg = detail::pair_sum(dg, gg);
    double t = 1.0;
    if (cfg.line_search == LineSearch::Paper) {
      if (af > kFunctionalFloor) t = std::min(t, cf / af);
      if (ag > kFunctionalFloor) t = std::min(t, cg / ag);
      t = std::max(t, 0.0);
    } else {
      t = detail::initial_step(af + ag, cf + cg, functional::prf(df) + functional::prf(dg), LineSearch::Exact);
    }
    const double a = af + ag;
    auto value = [&](double s) {
      return functional::prf(detail::combine(st.f, sub.sf, s)) + functional::prf(detail::combine(st.g, sub.sg, s));
    };
    double pn = value(t);
    for (int h = 0; h < kMaxHalvings && pn > a + kMonotoneSlack; ++h) {
      t *= 0.5;
      pn = value(t);
    }
    if (t == 0.0 || pn > a + kMonotoneSlack) {
      run.message = "no descent along subproblem direction";
      break;
    }
    const RectMatrix bx = sub.super.mat().block(0, n, n, m);
    st.f = detail::combine(st.f, sub.sf, t);
    st.g = detail::combine(st.g, sub.sg, t);
    st.x = (1.0 - t) * st.x + t * bx;
    st.lifted = detail::lift(st.x, st.f.sum(), st.g.sum());
    st.functional = pn;
    st.iterations = count;
    run.trajectory.push_back({count, pn, t, prob.residual_norm(st.x), linalg::min_eigenvalue(st.lifted.mat())});
  }
  run.certificate = certify(prob, st.x, r, cfg.rank_tol);
  run.outcome = run.certificate.success ? RunOutcome::Certified : RunOutcome::NotCertified;
  if (run.message.empty()) run.message = "iteration limit";
  return run;
}

inline GeneralRun bilinear_general(const LmeProblem& prob, int r, const HeuristicConfig& cfg = {}) {
  detail::check_rank(prob, r);
  cfg.validate();
  const int n = prob.rows_dim();
  const int m = prob.cols_dim();
  GeneralRun run;
  auto z0 = detail::general_start(prob, cfg, run.message);
  if (!z0) {
    run.outcome = RunOutcome::Infeasible;
    run.certificate.target_rank = r;
    return run;
  }
  auto& st = run.state;
  const double cap = cfg.trace_cap * z0->trace();
  auto resplit = [&](const SymMatrix& super) {
    const EigenDecomposition ed = linalg::sym_eig(super);
    st.lifted = super;
    st.x = super.mat().block(0, n, n, m);
    st.f = detail::rank_one_split(ed, r, 0, n);
    st.g = detail::rank_one_split(ed, r, n, m);
    st.functional = functional::prf(st.f) + functional::prf(st.g);
  };
  resplit(*z0);
  run.trajectory.push_back({0, st.functional, 0.0, prob.residual_norm(st.x), linalg::min_eigenvalue(st.lifted.mat())});

  for (int count = 1; count <= cfg.max_iters; ++count) {
    run.certificate = certify(prob, st.x, r, cfg.rank_tol);
    if (run.certificate.success) {
      run.message = "rank test passed";
      break;
    }
    const auto gf = functional::prf_gradient_blocks(st.f);
    const auto gg = functional::prf_gradient_blocks(st.g);
    const auto sub = detail::solve_general_subproblem(prob, gf, gg, cap, cfg.sdp);
    if (!detail::usable(sub.sol, prob)) {
      run.outcome = RunOutcome::SolverFailure;
      run.message = detail::subproblem_failure(sub.sol);
      run.certificate = certify(prob, st.x, r, cfg.rank_tol);
      return run;
    }
    resplit(sub.super);
    st.iterations = count;
    run.trajectory.push_back(
        {count, st.functional, 1.0, prob.residual_norm(st.x), linalg::min_eigenvalue(st.lifted.mat())});
  }
  run.certificate = certify(prob, st.x, r, cfg.rank_tol);
  run.outcome = run.certificate.success ? RunOutcome::Certified : RunOutcome::NotCertified;
  if (run.message.empty()) run.message = "iteration limit";
  return run;
}

// ---------------------------------------------------------------------------
// Polishing.

class PolishNotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PolishResult {
  Eigen::MatrixXd x;
  double residual = 0.0;
  /// Residual of the input matrix, for comparison.
  double residual_before = 0.0;
  /// True when the unconstrained least-squares fit already met every
  /// constraint; false when the PSD-constrained subproblem was solved.
  bool unconstrained = true;
};

inline constexpr double kPolishRankTol = 1e-6;

namespace detail {

/// Least-squares solution of a m = c closest to m0.
inline Vector nearest_least_squares(const Eigen::MatrixXd& a, const Vector& c, const Vector& m0) {
  if (a.rows() == 0) return m0;
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  return m0 + cod.solve(c - a * m0);
}

/// Symmetric r x r basis B_p with ones at (i, j) and (j, i), p running over
/// the upper triangle column by column.
inline std::vector<Eigen::MatrixXd> sym_basis(int r) {
  std::vector<Eigen::MatrixXd> out;
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i <= j; ++i) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(r, r);
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace detail

/// Replaces X by U_r M U_r^T, with U_r the top-r eigenvectors of X and
/// M in Sym_+^r minimizing the equality-row residual subject to the
/// inequality rows.
inline PolishResult polish(const LmeProblem& prob, const SymMatrix& x, int r) {
  if (!prob.is_psd()) throw std::invalid_argument("polish: PSD problem required");
  detail::check_rank(prob, r);
  if (x.dim() != prob.rows_dim()) throw std::invalid_argument("polish: dimension mismatch");
  const EigenDecomposition ed = linalg::sym_eig(x);
  if (linalg::numerical_rank(ed.values, kPolishRankTol) > r) {
    throw PolishNotApplicable("polish: numerical rank exceeds r at tolerance 1e-6");
  }
  const Eigen::MatrixXd u = ed.vectors.leftCols(r);
  const auto basis = detail::sym_basis(r);
  const int p = static_cast<int>(basis.size());

  // M = sum_p m_p B_p, so row i restricted to the subspace reads
  // <U^T A_i U, M> = sum_p <U^T A_i U, B_p> m_p.
  std::vector<int> eq, ineq;
  for (int i = 0; i < prob.num_rows(); ++i) (prob.row(i).sense == Sense::Eq ? eq : ineq).push_back(i);
  auto reduced = [&](const std::vector<int>& idx) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(idx.size()), p);
    for (size_t k = 0; k < idx.size(); ++k) {
      const Eigen::MatrixXd ar = u.transpose() * prob.row(idx[k]).coeff * u;
      for (int q = 0; q < p; ++q) a(static_cast<Eigen::Index>(k), q) = linalg::inner(ar, basis[static_cast<size_t>(q)]);
    }
    return a;
  };
  auto to_matrix = [&](const Vector& mv) {
    Eigen::MatrixXd mm = Eigen::MatrixXd::Zero(r, r);
    for (int q = 0; q < p; ++q) mm += mv(q) * basis[static_cast<size_t>(q)];
    return mm;
  };
  const Eigen::MatrixXd m0 = u.transpose() * x.mat() * u;
  Vector mv0(p);
  for (int q = 0, j = 0; j < r; ++j) {
    for (int i = 0; i <= j; ++i) mv0(q++) = i == j ? m0(i, i) : 0.5 * (m0(i, j) + m0(j, i));
  }
  const Eigen::MatrixXd aeq = reduced(eq);
  Vector beq(static_cast<Eigen::Index>(eq.size()));
  for (size_t k = 0; k < eq.size(); ++k) beq(static_cast<Eigen::Index>(k)) = prob.row(eq[k]).rhs;

  PolishResult out;
  out.residual_before = prob.residual_norm(x.mat());
  const Vector mls = detail::nearest_least_squares(aeq, beq, mv0);
  const Eigen::MatrixXd mlsm = to_matrix(mls);
  if (linalg::min_eigenvalue(mlsm) >= 0.0) {
    const Eigen::MatrixXd xls = u * mlsm * u.transpose();
    const Vector viol = prob.violation(xls);
    bool ineq_ok = true;
    for (int i : ineq) ineq_ok = ineq_ok && viol(i) == 0.0;
    if (ineq_ok) {
      out.x = xls;
      out.residual = prob.residual_norm(xls);
      return out;
    }
  }

  // Constrained fit: minimize t subject to [[t I, R m - c], [., t]] PSD,
  // M PSD and the inequality rows, where R, c come from a QR reduction of
  // the equality rows.
  out.unconstrained = false;
  Eigen::MatrixXd rq;
  Vector cq;
  if (aeq.rows() > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(aeq);
    const Eigen::Index k = std::min<Eigen::Index>(aeq.rows(), p);
    const Eigen::MatrixXd qfull = qr.householderQ() * Eigen::MatrixXd::Identity(aeq.rows(), aeq.rows());
    rq = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    cq = (qfull.transpose() * beq).head(k);
  }
  const int kk = static_cast<int>(rq.rows());
  sdp::SdpInstance inst;
  const int mb = inst.add_psd_block(r);
  const int nb = kk > 0 ? inst.add_psd_block(kk + 1) : -1;
  auto add_m_terms = [&](sdp::Row& row, const Eigen::MatrixXd& coef, Eigen::Index i, double scale) {
    for (int q = 0, jj = 0; jj < r; ++jj) {
      for (int ii = 0; ii <= jj; ++ii, ++q) {
        if (coef(i, q) != 0.0) row.add(mb, ii, jj, scale * coef(i, q));
      }
    }
  };
  if (kk > 0) {
    inst.add_objective(nb, kk, kk, 1.0);
    for (int i = 0; i < kk; ++i) {
      sdp::Row diag(sdp::RowSense::Eq, 0.0);
      diag.add(nb, i, i, 1.0).add(nb, kk, kk, -1.0);
      inst.add_row(std::move(diag));
      for (int j = i + 1; j < kk; ++j) {
        sdp::Row off(sdp::RowSense::Eq, 0.0);
        off.add(nb, i, j, 1.0);
        inst.add_row(std::move(off));
      }
      sdp::Row link(sdp::RowSense::Eq, -cq(i));
      link.add(nb, i, kk, 1.0);
      add_m_terms(link, rq, i, -1.0);
      inst.add_row(std::move(link));
    }
  }
  const Eigen::MatrixXd aineq = reduced(ineq);
  for (size_t k = 0; k < ineq.size(); ++k) {
    const auto& row = prob.row(ineq[k]);
    const double sg = row.sense == Sense::Leq ? -1.0 : 1.0;
    sdp::Row s(sdp::RowSense::Geq, sg * row.rhs);
    add_m_terms(s, aineq, static_cast<Eigen::Index>(k), sg);
    inst.add_row(std::move(s));
  }
  sdp::SolverOptions opt;
  opt.target_tol = 1e-11;
  const sdp::SdpSolution sol = sdp::solve(inst, opt);
  if (sol.status != sdp::Status::Optimal) {
    throw std::runtime_error(std::string("polish: subproblem ") + sdp::to_string(sol.status) + ": " + sol.message);
  }
  const Eigen::MatrixXd mm = linalg::psd_part(SymMatrix(sol.blocks[static_cast<size_t>(mb)])).mat();
  out.x = u * mm * u.transpose();
  out.residual = prob.residual_norm(out.x);
  return out;
}

struct GeneralPolishResult {
  RectMatrix x;
  double residual = 0.0;
  double residual_before = 0.0;
};

/// Replaces X by U_r K V_r^T with K the residual-minimizing r x r core
/// closest to U_r^T X V_r.
inline GeneralPolishResult polish_general(const LmeProblem& prob, const RectMatrix& x, int r) {
  detail::check_rank(prob, r);
  if (x.rows() != prob.rows_dim() || x.cols() != prob.cols_dim()) {
    throw std::invalid_argument("polish_general: dimension mismatch");
  }
  const SingularDecomposition sd = linalg::svd(x);
  if (linalg::numerical_rank(sd.s, kPolishRankTol) > r) {
    throw PolishNotApplicable("polish_general: numerical rank exceeds r at tolerance 1e-6");
  }
  const Eigen::MatrixXd u = sd.u.leftCols(r);
  const Eigen::MatrixXd v = sd.v.leftCols(r);
  Eigen::MatrixXd a(prob.num_rows(), r * r);
  for (int i = 0; i < prob.num_rows(); ++i) {
    a.row(i) = linalg::vec(u.transpose() * prob.row(i).coeff * v).transpose();
  }
  const Vector k0 = linalg::vec(u.transpose() * x * v);
  const Vector k = detail::nearest_least_squares(a, prob.rhs(), k0);
  GeneralPolishResult out;
  out.residual_before = prob.residual_norm(x);
  out.x = u * linalg::unvec(k, r, r) * v.transpose();
  out.residual = prob.residual_norm(out.x);
  return out;
}

// ---------------------------------------------------------------------------
// Rank cascade.

struct CascadeEntry {
  int rank = 0;
  RunOutcome outcome = RunOutcome::NotCertified;
  RankCertificate certificate;
  /// N x N for PSD problems, N x M otherwise.
  Eigen::MatrixXd solution;
  int iterations = 0;
  std::string message;
};

/// Runs the chosen heuristic for r = max rank down to 1. With
/// cfg.warm_start, rank r starts from the rank r+1 result.
inline std::vector<CascadeEntry> rank_cascade(const LmeProblem& prob, const HeuristicConfig& cfg,
                                              Method method = Method::Bilinear) {
  cfg.validate();
  std::vector<CascadeEntry> out;
  HeuristicConfig local = cfg;
  if (!local.initial.has_value()) {
    const sdp::FeasiblePoint fp = sdp::phase1_feasible(prob);
    if (!fp.feasible()) {
      for (int r = prob.max_rank(); r >= 1; --r) {
        CascadeEntry e;
        e.rank = r;
        e.outcome = RunOutcome::Infeasible;
        e.certificate.target_rank = r;
        e.message = std::string("phase 1 ") + sdp::to_string(fp.status) + ": " + fp.message;
        out.push_back(std::move(e));
      }
      return out;
    }
    local.initial = fp.lifted.mat();
  }
  const Eigen::MatrixXd cold = *local.initial;
  for (int r = prob.max_rank(); r >= 1; --r) {
    CascadeEntry e;
    e.rank = r;
    Eigen::MatrixXd lifted;
    bool feasible_end = false;
    if (prob.is_psd()) {
      const PsdRun run = method == Method::Gradient ? gradient_psd(prob, r, local) : bilinear_psd(prob, r, local);
      e.outcome = run.outcome;
      e.certificate = run.certificate;
      e.solution = run.state.aggregate.empty() ? Eigen::MatrixXd() : run.state.aggregate.mat();
      e.iterations = run.state.iterations;
      e.message = run.message;
      lifted = e.solution;
    } else {
      const GeneralRun run =
          method == Method::Gradient ? gradient_general(prob, r, local) : bilinear_general(prob, r, local);
      e.outcome = run.outcome;
      e.certificate = run.certificate;
      e.solution = run.state.x;
      e.iterations = run.state.iterations;
      e.message = run.message;
      lifted = run.state.lifted.empty() ? Eigen::MatrixXd() : run.state.lifted.mat();
    }
    feasible_end = e.outcome == RunOutcome::Certified;
    local.initial = (cfg.warm_start && feasible_end) ? lifted : cold;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace lowrank
