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

// Acceptance harness: one PASS/FAIL line per criterion. Usage:
//   acceptance [path-to-lowrank-cli] [data-dir]
// Without a CLI path the determinism criterion runs on the library.

#include "lowrank/lowrank.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace lowrank;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  bool gating = true;
  std::string detail;
};

LmeProblem planted_psd(int n, int rows, int rank, std::uint64_t seed) {
  io::GeneratorSpec g;
  g.n = n;
  g.rows = rows;
  g.planted_rank = rank;
  g.seed = seed;
  return io::generate_instance(g);
}

LmeProblem planted_rect(int n, int m, int rows, int rank, std::uint64_t seed) {
  io::GeneratorSpec g;
  g.kind = io::InstanceKind::Rect;
  g.n = n;
  g.m_cols = m;
  g.rows = rows;
  g.planted_rank = rank;
  g.seed = seed;
  return io::generate_instance(g);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome functional_identities() {
  Outcome out;
  Rng rng(1);
  double worst = 0.0;
  const auto t0 = Clock::now();
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + t % 7;
    const SymMatrix x(testing::random_sym(rng, n));
    const double q = functional::eval_lrf(functional::build_q(n), x);
    const double loop = testing::double_loop_lrf(x.mat());
    const double closed = x.trace() * x.trace() - x.mat().squaredNorm();
    // Relative to the magnitude of the cancelling terms.
    const double scale = x.trace() * x.trace() + x.mat().squaredNorm();
    worst = std::max({worst, std::abs(q - loop) / scale, std::abs(q - closed) / scale});
  }
  const double secs = seconds_since(t0);
  out.pass = worst <= 1e-10 && secs < 5.0;
  out.detail = "worst relative error " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s";
  return out;
}

Outcome rank_one_characterization() {
  Outcome out;
  Rng rng(2);
  double worst_rank1 = 0.0;
  double least_higher = INFINITY;
  for (int t = 0; t < 500; ++t) {
    const int n = 2 + t % 7;
    const SymMatrix x(testing::random_psd(rng, n, 1));
    worst_rank1 = std::max(worst_rank1, functional::lrf(x) / x.mat().squaredNorm());
  }
  int higher = 0;
  for (int t = 0; higher < 500; ++t) {
    const int n = 2 + t % 7;
    const int k = 2 + t % (n - 1);
    const SymMatrix x(testing::random_psd(rng, n, k));
    if (linalg::numerical_rank(linalg::sym_eigenvalues(x), 1e-8) < 2) continue;
    least_higher = std::min(least_higher, functional::lrf(x) / x.mat().squaredNorm());
    ++higher;
  }
  out.pass = worst_rank1 <= 1e-10 && least_higher > 1e-6;
  out.detail = "rank 1 max L/||X||^2 " + fmt("%.2e", worst_rank1) + ", rank >= 2 min " + fmt("%.2e", least_higher);
  return out;
}

Outcome particular_rank_characterization() {
  Outcome out;
  Rng rng(3);
  double worst_split = 0.0;
  double least_perturbed = INFINITY;
  for (int t = 0; t < 300; ++t) {
    const int n = 2 + t % 7;
    const int r = 1 + t % std::min(4, n);
    const SymMatrix x(testing::random_psd(rng, n, r));
    const EigenDecomposition ed = linalg::sym_eig(x);
    std::vector<SymMatrix> blocks;
    for (int k = 0; k < r; ++k) {
      blocks.push_back(SymMatrix::outer(std::sqrt(std::max(0.0, ed.values(k))) * ed.vectors.col(k)));
    }
    worst_split = std::max(worst_split, functional::prf(BlockTuple(blocks)));
    // A rank-1 addition with a component along another eigenvector.
    const int k = t % r;
    Vector v = rng.normal_vector(n);
    v += ed.vectors.col((k + 1) % n);
    std::vector<SymMatrix> perturbed = blocks;
    perturbed[static_cast<size_t>(k)] = perturbed[static_cast<size_t>(k)] + SymMatrix::outer(v);
    least_perturbed = std::min(least_perturbed, functional::prf(BlockTuple(perturbed)));
  }
  out.pass = worst_split <= 1e-9 && least_perturbed > 0.0;
  out.detail = "split max P_r " + fmt("%.2e", worst_split) + ", perturbed min P_r " + fmt("%.2e", least_perturbed);
  return out;
}

Outcome pairing_properties() {
  Outcome out;
  Rng rng(4);
  double worst_pair = INFINITY;
  double worst_gap = INFINITY;
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + t % 7;
    const SymMatrix x(testing::random_psd(rng, n, 1 + t % n));
    const SymMatrix y(testing::random_psd(rng, n, 1 + (t / 7) % n));
    const functional::PairingCheck c = functional::check_pairing_properties(x, y);
    worst_pair = std::min(worst_pair, c.pairing);
    worst_gap = std::min(worst_gap, c.superadd_gap);
  }
  out.pass = worst_pair >= -1e-10 && worst_gap >= -1e-10;
  out.detail = "min pairing " + fmt("%.3g", worst_pair) + ", min superadditivity gap " + fmt("%.3g", worst_gap);
  return out;
}

// ---------------------------------------------------------------------------

sdp::SdpInstance random_feasible_sdp(Rng& rng) {
  using namespace sdp;
  const int nb = 1 + static_cast<int>(rng.uniform_int(0, 2));
  SdpInstance in;
  std::vector<Eigen::MatrixXd> x0, c;
  int dof = 0;
  for (int b = 0; b < nb; ++b) {
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 11));
    in.add_psd_block(n);
    dof += n * (n + 1) / 2;
    const Eigen::MatrixXd g = rng.normal_matrix(n, n);
    x0.push_back(g * g.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n));
    const Eigen::MatrixXd h = rng.normal_matrix(n, n);
    c.push_back(h * h.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n));
  }
  const int m = 1 + static_cast<int>(rng.uniform_int(0, std::min(59, dof - 1)));
  for (int i = 0; i < m; ++i) {
    const bool geq = rng.uniform() < 0.3;
    const double y0 = geq ? rng.uniform() : rng.normal();
    double ax = 0.0;
    std::vector<Eigen::MatrixXd> as;
    for (int b = 0; b < nb; ++b) {
      const int n = in.block_dim(b);
      const Eigen::MatrixXd a = testing::random_sym(rng, n);
      as.push_back(a);
      ax += a.cwiseProduct(x0[static_cast<size_t>(b)]).sum();
      c[static_cast<size_t>(b)] += y0 * a;
    }
    Row r(geq ? RowSense::Geq : RowSense::Eq, geq ? ax - rng.uniform() : ax);
    for (int b = 0; b < nb; ++b) r.add_matrix(b, as[static_cast<size_t>(b)]);
    in.add_row(r);
  }
  for (int b = 0; b < nb; ++b) in.set_objective(b, c[static_cast<size_t>(b)]);
  return in;
}

/// Rows sum_i y_i A_i = P PSD with b^T y < 0 for a planted y.
sdp::SdpInstance random_infeasible_sdp(Rng& rng) {
  using namespace sdp;
  const int nb = 1 + static_cast<int>(rng.uniform_int(0, 2));
  const int m = 2 + static_cast<int>(rng.uniform_int(0, 20));
  SdpInstance in;
  for (int b = 0; b < nb; ++b) in.add_psd_block(1 + static_cast<int>(rng.uniform_int(0, 11)));
  Vector y = rng.normal_vector(m);
  if (std::abs(y(m - 1)) < 0.3) y(m - 1) = 0.3;
  std::vector<std::vector<Eigen::MatrixXd>> a(static_cast<size_t>(m), std::vector<Eigen::MatrixXd>(static_cast<size_t>(nb)));
  for (int b = 0; b < nb; ++b) {
    const int n = in.block_dim(b);
    const Eigen::MatrixXd g = rng.normal_matrix(n, n);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < m - 1; ++i) {
      a[static_cast<size_t>(i)][static_cast<size_t>(b)] = testing::random_sym(rng, n);
      acc += y(i) * a[static_cast<size_t>(i)][static_cast<size_t>(b)];
    }
    a[static_cast<size_t>(m - 1)][static_cast<size_t>(b)] = (g * g.transpose() - acc) / y(m - 1);
  }
  Vector bv = rng.normal_vector(m);
  bv -= (bv.dot(y) + 1.0 + rng.uniform()) / y.squaredNorm() * y;
  for (int i = 0; i < m; ++i) {
    Row r(RowSense::Eq, bv(i));
    for (int b = 0; b < nb; ++b) r.add_matrix(b, a[static_cast<size_t>(i)][static_cast<size_t>(b)]);
    in.add_row(r);
  }
  return in;
}

/// A_i as a dense symmetric matrix on block b.
Eigen::MatrixXd row_matrix(const sdp::SdpInstance& in, int i, int b) {
  const int n = in.block_dim(b);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : in.row(i).entries()) {
    if (e.block != b) continue;
    a(e.i, e.j) += e.value;
    if (e.i != e.j) a(e.j, e.i) += e.value;
  }
  return a;
}

Outcome sdp_core() {
  using namespace sdp;
  Outcome out;
  const auto t0 = Clock::now();
  Rng rng(12345);
  int optimal = 0;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const SdpInstance in = random_feasible_sdp(rng);
    SolverOptions opt;
    opt.target_tol = 1e-10;
    const SdpSolution s = solve(in, opt);
    if (s.status != Status::Optimal) continue;
    // Residuals recomputed from the returned primal and dual points.
    Vector b(in.num_rows());
    double pres = 0.0;
    bool sign_ok = true;
    for (int i = 0; i < in.num_rows(); ++i) {
      b(i) = in.row(i).rhs();
      double v = in.evaluate_row(i, s.blocks, s.free) - b(i);
      if (in.row(i).sense() == RowSense::Geq) {
        v = std::min(v, 0.0);
        sign_ok = sign_ok && s.dual(i) >= -1e-8;
      }
      pres += v * v;
    }
    pres = std::sqrt(pres) / (1.0 + b.norm());
    double dres = 0.0, cnorm = 0.0, xz = 0.0, min_eig = INFINITY;
    for (int k = 0; k < in.num_blocks(); ++k) {
      Eigen::MatrixXd r = in.objective(k) - s.dual_slack[static_cast<size_t>(k)];
      for (int i = 0; i < in.num_rows(); ++i) r -= s.dual(i) * row_matrix(in, i, k);
      dres += r.squaredNorm();
      cnorm += in.objective(k).squaredNorm();
      xz += s.blocks[static_cast<size_t>(k)].cwiseProduct(s.dual_slack[static_cast<size_t>(k)]).sum();
      min_eig = std::min({min_eig, linalg::min_eigenvalue(s.blocks[static_cast<size_t>(k)]),
                          linalg::min_eigenvalue(s.dual_slack[static_cast<size_t>(k)])});
    }
    dres = std::sqrt(dres) / (1.0 + std::sqrt(cnorm));
    const double pobj = in.objective_value(s.blocks, s.free);
    const double dobj = b.dot(s.dual);
    const double gap = std::max(std::abs(xz), std::abs(pobj - dobj)) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double merit = std::max({pres, dres, gap});
    worst = std::max(worst, merit);
    if (merit <= 1e-8 && sign_ok && min_eig >= -1e-9) ++optimal;
  }
  int infeasible = 0;
  Rng irng(777);
  for (int t = 0; t < 50; ++t) {
    const SdpInstance in = random_infeasible_sdp(irng);
    const SdpSolution s = solve(in);
    if (s.status != Status::Infeasible || s.farkas_pairing > -1e-6) continue;
    double by = 0.0;
    for (int i = 0; i < in.num_rows(); ++i) by += in.row(i).rhs() * s.farkas(i);
    bool cone = std::abs(by - s.farkas_pairing) <= 1e-9;
    for (int k = 0; k < in.num_blocks(); ++k) {
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(in.block_dim(k), in.block_dim(k));
      for (int i = 0; i < in.num_rows(); ++i) acc += s.farkas(i) * row_matrix(in, i, k);
      cone = cone && linalg::min_eigenvalue(acc) >= -1e-9 * std::max(1.0, acc.norm());
    }
    infeasible += cone;
  }
  const double secs = seconds_since(t0);
  out.pass = optimal == 200 && infeasible == 50 && secs < 60.0;
  out.detail = std::to_string(optimal) + "/200 optimal (worst merit " + fmt("%.2e", worst) + "), " +
               std::to_string(infeasible) + "/50 infeasible with certificate, " + fmt("%.1f", secs) + " s";
  return out;
}

// ---------------------------------------------------------------------------

Outcome planted_recovery() {
  Outcome out;
  int bil = 0, grad = 0;
  double slowest = 0.0;
  for (int s = 0; s < 20; ++s) {
    const LmeProblem p = planted_psd(6, 10, 1, 1000 + s);
    HeuristicConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(s);
    cfg.max_iters = 100;
    cfg.rank_tol = 1e-8;
    auto t0 = Clock::now();
    const PsdRun b = bilinear_psd(p, 1, cfg);
    slowest = std::max(slowest, seconds_since(t0));
    t0 = Clock::now();
    const PsdRun g = gradient_psd(p, 1, cfg);
    slowest = std::max(slowest, seconds_since(t0));
    bil += b.outcome == RunOutcome::Certified && verify_certificate(p, b.state.aggregate.mat(), b.certificate);
    grad += g.outcome == RunOutcome::Certified && verify_certificate(p, g.state.aggregate.mat(), g.certificate);
  }
  out.pass = bil >= 10 && grad >= 6 && slowest < 30.0;
  out.detail = "bilinear " + std::to_string(bil) + "/20, gradient " + std::to_string(grad) + "/20, slowest run " +
               fmt("%.2f", slowest) + " s";
  return out;
}

/// Bilinear run at the target rank; returns the final aggregate.
std::pair<Eigen::MatrixXd, RankCertificate> run_target(const LmeProblem& p, std::uint64_t seed) {
  HeuristicConfig cfg;
  cfg.seed = seed;
  const PsdRun r = bilinear_psd(p, p.target_rank(), cfg);
  const Eigen::MatrixXd x = r.state.aggregate.empty() ? Eigen::MatrixXd() : r.state.aggregate.mat();
  RankCertificate c = r.certificate;
  c.success = r.outcome == RunOutcome::Certified;
  return {x, c};
}

Outcome application_round_trips() {
  Outcome out;
  std::ostringstream d;
  bool ok = true;
  int kn_cert = 0, kn_total = 0, ss_cert = 0, ss_total = 0;
  for (int n : {4, 6, 8}) {
    for (std::uint64_t s = 0; s < 2; ++s) {
      const auto k = apps::random_knapsack(n, 50 + s);
      const auto oracle = testing::brute_knapsack(k.values, k.weights, k.min_value, k.max_weight);
      const auto [x, c] = run_target(apps::encode_knapsack(k), s);
      ++kn_total;
      if (!c.success) continue;
      ++kn_cert;
      const auto dec = apps::decode_knapsack(k, x);
      ok = ok && dec.verified && std::find(oracle.begin(), oracle.end(), dec.chosen) != oracle.end();
    }
    for (std::uint64_t s = 0; s < 2; ++s) {
      const auto ss = apps::random_subset_sum(n, 60 + s);
      const auto oracle = testing::brute_subset_sum(ss.s, ss.target);
      const auto [x, c] = run_target(apps::encode_subset_sum(ss), s);
      ++ss_total;
      if (!c.success) continue;
      ++ss_cert;
      const auto dec = apps::decode_subset_sum(ss, x);
      ok = ok && dec.verified && std::find(oracle.begin(), oracle.end(), dec.chosen) != oracle.end();
    }
  }
  d << "knapsack " << kn_cert << "/" << kn_total << " certified, subset-sum " << ss_cert << "/" << ss_total;
  double um_worst = 0.0, pr_worst = 0.0;
  int um_ok = 0, pr_ok = 0;
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto um = apps::random_unit_modulus(4, 2, s);
    const auto [x, c] = run_target(apps::encode_unit_modulus(um), s);
    if (c.success) {
      const auto dec = apps::decode_unit_modulus(um, x);
      um_worst = std::max(um_worst, dec.equation_residual);
      um_ok += dec.ok && dec.equation_residual <= 1e-6;
    }
    const auto pr = apps::random_phase_retrieval(4, s);
    const auto [y, cy] = run_target(apps::encode_phase_retrieval(pr), s);
    if (cy.success) {
      const auto dec = apps::decode_phase_retrieval(pr, y);
      pr_worst = std::max({pr_worst, dec.magnitude_residual, dec.amplitude_violation});
      pr_ok += dec.ok && dec.magnitude_residual <= 1e-6 && dec.amplitude_violation <= 1e-8;
    }
  }
  ok = ok && um_ok == 4 && pr_ok == 4;
  d << "; unit-modulus " << um_ok << "/4 (worst " << fmt("%.1e", um_worst) << "), phase retrieval " << pr_ok
    << "/4 (worst " << fmt("%.1e", pr_worst) << ")";
  int lcp_cert = 0;
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto l = apps::random_lcp(4, s);
    const auto [x, c] = run_target(apps::encode_lcp(l), s);
    if (!c.success) continue;
    ++lcp_cert;
    const auto dec = apps::decode_lcp(l, x);
    ok = ok && std::abs(dec.complementarity) <= 1e-6 && dec.equation_residual <= 1e-6 && dec.negativity <= 1e-6;
  }
  d << "; LCP " << lcp_cert << "/6 certified, all complementary";
  out.pass = ok;
  out.detail = d.str();
  return out;
}

Outcome failure_modes() {
  Outcome out;
  out.gating = false;
  // Final rank per run; -1 marks runs stopped by phase 1.
  std::map<int, int> ss_hist, lcp_hist;
  auto final_rank = [](const LmeProblem& p, std::uint64_t seed) {
    HeuristicConfig cfg;
    cfg.seed = seed;
    const PsdRun r = bilinear_psd(p, 1, cfg);
    return r.outcome == RunOutcome::Infeasible ? -1 : r.certificate.achieved_rank;
  };
  for (std::uint64_t s = 0; s < 20; ++s) {
    ++ss_hist[final_rank(apps::encode_subset_sum(apps::random_subset_sum(6, 100 + s)), s)];
    ++lcp_hist[final_rank(apps::encode_lcp(apps::random_lcp(3, 200 + s)), s)];
  }
  auto show = [](const std::map<int, int>& h) {
    std::string s;
    for (const auto& [r, c] : h) {
      s += (s.empty() ? "" : " ") + (r < 0 ? std::string("infeasible") : "r" + std::to_string(r)) + ":" +
           std::to_string(c);
    }
    return s;
  };
  const bool pattern = ss_hist.count(2) > 0 || lcp_hist.count(2) > 0;
  out.detail = "subset-sum ranks {" + show(ss_hist) + "}, LCP ranks {" + show(lcp_hist) + "}; rank-2 pattern " +
               (pattern ? "observed" : "not observed");
  return out;
}

Outcome baseline_consistency() {
  Outcome out;
  bool ok = true;
  double worst_nn = 0.0, worst_mono = -INFINITY, worst_bound = -INFINITY;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const LmeProblem r = planted_rect(3, 4, 6, 1, 300 + s);
    const NuclearNormResult nn = nuclear_norm_min(r);
    ok = ok && nn.ok();
    if (nn.ok()) worst_nn = std::max(worst_nn, std::abs(nn.value - linalg::singular_values(nn.x).sum()));

    const LmeProblem p = planted_psd(5, 8, 1, 310 + s);
    const TraceMinResult t = trace_min(p);
    const LogDetResult ld = logdet_heuristic(p);
    ok = ok && t.ok() && ld.status == sdp::Status::Optimal;
    if (!t.ok()) continue;
    for (const auto& rec : ld.trajectory) {
      if (std::isnan(rec.previous_objective)) continue;
      worst_mono = std::max(worst_mono, (rec.objective - rec.previous_objective) / std::max(1.0, std::abs(rec.previous_objective)));
    }
    std::vector<Eigen::MatrixXd> others;
    if (!ld.x.empty()) others.push_back(ld.x.mat());
    HeuristicConfig cfg;
    cfg.seed = s;
    const PsdRun b = bilinear_psd(p, 1, cfg);
    const PsdRun g = gradient_psd(p, 1, cfg);
    for (const PsdRun* run : {&b, &g}) {
      if (!run->state.aggregate.empty()) others.push_back(run->state.aggregate.mat());
    }
    for (const auto& x : others) {
      if (p.residual_norm(x) > 1e-6 * (1.0 + p.rhs_norm()) || linalg::min_eigenvalue(x) < -1e-8) continue;
      worst_bound = std::max(worst_bound, (t.value - x.trace()) / (1.0 + t.value));
    }
  }
  ok = ok && worst_nn <= 1e-7 && worst_mono <= 1e-8 && worst_bound <= 1e-7;
  out.pass = ok;
  out.detail = "nuclear value vs sum(sigma) " + fmt("%.1e", worst_nn) + ", log-det max relative increase " +
               fmt("%.1e", worst_mono) + ", trace-min max excess " + fmt("%.1e", worst_bound);
  return out;
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* f = popen(cmd.c_str(), "r");
  if (f == nullptr) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf;
  size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
  status = pclose(f);
  return out;
}

Outcome determinism(const std::string& cli, const std::string& data) {
  Outcome out;
  if (cli.empty()) {
    const LmeProblem p = planted_psd(4, 6, 1, 7);
    HeuristicConfig cfg;
    cfg.seed = 3;
    const std::string a = report::run_sweep(p, Method::Bilinear, cfg).to_json().dump();
    const std::string b = report::run_sweep(p, Method::Bilinear, cfg).to_json().dump();
    out.pass = a == b;
    out.detail = "library sweep only (no CLI path given)";
    return out;
  }
  const std::vector<std::string> runs = {
      "solve " + data + "/planted_psd_n6_seed7.txt --seed 5 --format structured",
      "solve " + data + "/planted_psd_n6_seed7.txt --method gradient --seed 5 --no-baselines --format structured",
      "knapsack --n 6 --seed 2 --format structured",
      "subset-sum --n 6 --seed 2 --format structured",
      "nonlinear --n 3 --seed 2 --format structured",
      "phase-retrieval --n 4 --seed 2 --format structured",
      "lcp --n 3 --seed 2 --format structured",
  };
  int same = 0;
  for (const auto& args : runs) {
    int s1 = 0, s2 = 0;
    const std::string a = capture("'" + cli + "' " + args + " 2>/dev/null", s1);
    const std::string b = capture("'" + cli + "' " + args + " 2>/dev/null", s2);
    const bool parsed = !a.empty() && report::Json::accept(a);
    same += a == b && s1 == s2 && parsed;
  }
  out.pass = same == static_cast<int>(runs.size());
  out.detail = std::to_string(same) + "/" + std::to_string(runs.size()) + " CLI runs bitwise identical";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::string data = argc > 2 ? argv[2] : "tests/data";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"functional identities", functional_identities},
      {"rank-1 characterization of L", rank_one_characterization},
      {"rank-r characterization of P_r", particular_rank_characterization},
      {"pairing nonnegativity and superadditivity", pairing_properties},
      {"SDP core", sdp_core},
      {"planted recovery gate", planted_recovery},
      {"application round trips", application_round_trips},
      {"failure-mode reproduction", failure_modes},
      {"baseline consistency", baseline_consistency},
      {"determinism", [&] { return determinism(cli, data); }},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const char* tag = o.pass ? "PASS" : (o.gating ? "FAIL" : "NOTE");
    if (!o.gating) tag = "PASS";
    std::cout << "[" << tag << "] " << (i + 1) << ". " << criteria[i].first << (o.gating ? "" : " (non-gating)")
              << ": " << o.detail << " [" << fmt("%.1f", seconds_since(t0)) << " s]" << std::endl;
    failures += o.gating && !o.pass;
  }
  std::cout << (failures == 0 ? "all gating criteria passed" : std::to_string(failures) + " gating criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
