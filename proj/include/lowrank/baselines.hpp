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

// Convex comparison methods: trace minimization, the log-det reweighting
// heuristic and nuclear-norm minimization through the PSD embedding.

#pragma once

#include "lowrank/feasibility.hpp"
#include "lowrank/heuristics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lowrank {

struct TraceMinResult {
  sdp::Status status = sdp::Status::MaxIter;
  SymMatrix x;
  /// Tr(x) of the returned matrix.
  double value = 0.0;
  RankCertificate certificate;
  std::string message;

  bool ok() const { return status == sdp::Status::Optimal; }
};

namespace detail {

inline sdp::SolverOptions baseline_sdp() {
  sdp::SolverOptions o;
  o.tol = 1e-8;
  o.target_tol = 1e-10;
  return o;
}

inline void require_psd(const LmeProblem& prob, const char* who) {
  if (!prob.is_psd()) throw std::invalid_argument(std::string(who) + ": PSD problem required");
}

/// min <c, X> over PSD X satisfying the rows.
inline TraceMinResult weighted_trace_min(const LmeProblem& prob, const Eigen::MatrixXd& c,
                                         const sdp::SolverOptions& opt) {
  sdp::SdpInstance inst;
  const int block = inst.add_psd_block(prob.rows_dim());
  inst.set_objective(block, c);
  const int blocks[] = {block};
  sdp::add_rows_on_sum(inst, prob, blocks);
  const sdp::SdpSolution sol = sdp::solve(inst, opt);
  TraceMinResult out;
  out.status = sol.status;
  out.message = sol.message;
  if (sol.status == sdp::Status::Optimal) {
    out.x = SymMatrix(sol.blocks[static_cast<size_t>(block)]);
    out.value = out.x.mat().trace();
    out.certificate = certify(prob, out.x.mat(), prob.target_rank());
  }
  return out;
}

}  // namespace detail

/// min Tr(X) subject to the rows and X PSD.
inline TraceMinResult trace_min(const LmeProblem& prob) {
  detail::require_psd(prob, "trace_min");
  const int n = prob.rows_dim();
  return detail::weighted_trace_min(prob, Eigen::MatrixXd::Identity(n, n), detail::baseline_sdp());
}

enum class LogDetInit { TraceMin, Identity };

inline const char* to_string(LogDetInit i) { return i == LogDetInit::TraceMin ? "trace-min" : "identity"; }

struct LogDetConfig {
  double delta = 1e-6;
  int max_iters = 50;
  /// Stop once a step lowers the weighted objective by at most
  /// stall_tol * max(1, |previous value|).
  double stall_tol = 1e-9;
  /// Identity uses W0 = (1 + delta)^-1 I, whose first step is trace_min.
  LogDetInit init = LogDetInit::TraceMin;

  void validate() const {
    if (!(delta > 0.0)) throw std::invalid_argument("LogDetConfig: delta must be positive");
    if (max_iters < 1) throw std::invalid_argument("LogDetConfig: max_iters must be at least 1");
    if (!(stall_tol >= 0.0)) throw std::invalid_argument("LogDetConfig: stall_tol must be nonnegative");
  }
};

/// One reweighting step k: W_k = (X^k + delta I)^-1 with the spectrum of X^k
/// floored at zero.
struct LogDetRecord {
  int iteration = 0;
  /// Tr(W_k X^k); NaN when X^k is the identity start.
  double previous_objective = 0.0;
  /// Tr(W_k X^{k+1}).
  double objective = 0.0;
  /// log det(X^{k+1} + delta I).
  double log_det = 0.0;
  double residual = 0.0;
  int rank = 0;
};

struct LogDetResult {
  sdp::Status status = sdp::Status::MaxIter;
  SymMatrix x;
  RankCertificate certificate;
  std::vector<LogDetRecord> trajectory;
  std::vector<std::string> warnings;
  int iterations = 0;
  std::string message;

  bool ok() const { return status == sdp::Status::Optimal; }
};

namespace detail {

inline double log_det_shifted(const SymMatrix& x, double delta) {
  const Vector ev = linalg::sym_eigenvalues(x);
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) s += std::log(std::max(ev(i), 0.0) + delta);
  return s;
}

/// S = (X + delta I)^{1/2} after clipping negative eigenvalues of X, so that
/// the weight is W = S^-2. Appends a warning when clipping happens or the
/// shifted matrix is badly conditioned.
inline Eigen::MatrixXd logdet_root(const SymMatrix& x, double delta, int k, std::vector<std::string>& warnings) {
  const auto ed = linalg::sym_eig(x);
  Vector lam = ed.values;
  int clipped = 0;
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < 0.0) {
      if (lam(i) < -1e-10 * scale) ++clipped;
      lam(i) = 0.0;
    }
  }
  const Vector shifted = lam.array() + delta;
  const double cond = shifted.maxCoeff() / shifted.minCoeff();
  if (clipped > 0) {
    std::ostringstream os;
    os << "iteration " << k << ": floored " << clipped << " negative eigenvalue(s)";
    warnings.push_back(os.str());
  }
  if (cond > 1e12) {
    std::ostringstream os;
    os << "iteration " << k << ": weight condition number " << cond;
    warnings.push_back(os.str());
  }
  return ed.vectors * shifted.cwiseSqrt().asDiagonal() * ed.vectors.transpose();
}

/// The rows rewritten for Y with X = S Y S, each scaled to unit Frobenius
/// norm.
inline LmeProblem congruence(const LmeProblem& prob, const Eigen::MatrixXd& s) {
  LmeProblem out = LmeProblem::psd(prob.rows_dim(), prob.target_rank());
  for (const auto& r : prob.rows()) {
    const Eigen::MatrixXd a = s * r.coeff * s;
    const double nrm = a.norm();
    if (nrm > 0.0) {
      out.add_row(a / nrm, r.rhs / nrm, r.sense);
    } else {
      out.add_row(a, r.rhs, r.sense);
    }
  }
  return out;
}

}  // namespace detail

/// Iterates X^{k+1} = argmin Tr(W_k X) over the feasible PSD set until the
/// weighted objective stalls or max_iters steps have run. Each step is solved
/// in the variable Y = S^-1 X S^-1, where the objective becomes Tr(Y).
inline LogDetResult logdet_heuristic(const LmeProblem& prob, const LogDetConfig& cfg = {}) {
  detail::require_psd(prob, "logdet_heuristic");
  cfg.validate();
  const int n = prob.rows_dim();
  const auto opt = detail::baseline_sdp();
  LogDetResult out;
  SymMatrix xk;
  bool identity_start = false;
  if (cfg.init == LogDetInit::TraceMin) {
    const TraceMinResult t0 = trace_min(prob);
    if (!t0.ok()) {
      out.status = t0.status;
      out.message = "trace_min start: " + t0.message;
      return out;
    }
    xk = t0.x;
  } else {
    xk = SymMatrix::identity(n);
    identity_start = true;
  }
  out.status = sdp::Status::Optimal;
  out.message = "iteration limit";
  for (int k = 0; k < cfg.max_iters; ++k) {
    const Eigen::MatrixXd root = detail::logdet_root(xk, cfg.delta, k, out.warnings);
    const LmeProblem scaled = detail::congruence(prob, root);
    const TraceMinResult step = detail::weighted_trace_min(scaled, Eigen::MatrixXd::Identity(n, n), opt);
    if (!step.ok()) {
      if (identity_start && k == 0) out.status = step.status;
      out.message = "weighted subproblem " + std::string(sdp::to_string(step.status)) + ": " + step.message;
      break;
    }
    const SymMatrix next(root * step.x.mat() * root);
    const Eigen::LLT<Eigen::MatrixXd> rl(root);
    const Eigen::MatrixXd yk = rl.solve(rl.solve(xk.mat()).transpose());
    LogDetRecord rec;
    rec.iteration = k;
    rec.previous_objective = identity_start && k == 0 ? std::nan("") : yk.trace();
    rec.objective = step.x.mat().trace();
    rec.log_det = detail::log_det_shifted(next, cfg.delta);
    rec.residual = prob.residual_norm(next.mat());
    rec.rank = linalg::numerical_rank(linalg::sym_eigenvalues(next), 1e-8);
    out.trajectory.push_back(rec);
    xk = next;
    out.iterations = k + 1;
    if (!std::isnan(rec.previous_objective) &&
        rec.previous_objective - rec.objective <= cfg.stall_tol * std::max(1.0, std::abs(rec.previous_objective))) {
      out.message = "objective stalled";
      break;
    }
  }
  if (!identity_start || out.iterations > 0) {
    out.x = xk;
    out.certificate = certify(prob, xk.mat(), prob.target_rank());
  }
  return out;
}

struct NuclearNormResult {
  sdp::Status status = sdp::Status::MaxIter;
  RectMatrix x;
  /// (Tr Y + Tr Z) / 2 at the embedding optimum.
  double value = 0.0;
  /// Sum of the singular values of x.
  double nuclear_norm = 0.0;
  RankCertificate certificate;
  std::string message;

  bool ok() const { return status == sdp::Status::Optimal; }
};

/// min (Tr Y + Tr Z) / 2 subject to [[Y, X], [X^T, Z]] PSD and the rows on X.
inline NuclearNormResult nuclear_norm_min(const LmeProblem& prob) {
  if (prob.is_psd()) throw std::invalid_argument("nuclear_norm_min: rectangular problem required");
  for (const auto& r : prob.rows()) {
    if (r.sense != Sense::Eq) throw std::invalid_argument("nuclear_norm_min: equality rows required");
  }
  const int n = prob.rows_dim();
  const int m = prob.cols_dim();
  sdp::SdpInstance inst;
  const int block = inst.add_psd_block(n + m);
  inst.set_objective(block, 0.5 * Eigen::MatrixXd::Identity(n + m, n + m));
  sdp::add_rows_on_offdiag(inst, prob, block);
  const sdp::SdpSolution sol = sdp::solve(inst, detail::baseline_sdp());
  NuclearNormResult out;
  out.status = sol.status;
  out.message = sol.message;
  if (sol.status != sdp::Status::Optimal) return out;
  const Eigen::MatrixXd& z = sol.blocks[static_cast<size_t>(block)];
  out.x = sdp::offdiag_part(z, n, m);
  out.value = 0.5 * z.trace();
  out.certificate = certify(prob, out.x, prob.target_rank());
  out.nuclear_norm = out.certificate.spectrum.sum();
  return out;
}

}  // namespace lowrank
