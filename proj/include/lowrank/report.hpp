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

// Run reports: rank sweeps with polishing and baselines, rendered as a
// fixed-layout text report or a JSON document. The layout and schema are
// documented in docs/formats.md.

#pragma once

#include "lowrank/applications.hpp"
#include "lowrank/baselines.hpp"
#include "lowrank/heuristics.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace lowrank::report {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Exit codes shared by the report summary and the command-line tool.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitNotCertified = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitUsage = 3;

/// Departures from the method as literally stated, echoed in every report.
inline std::vector<std::string> deviations() {
  return {
      "heuristics start from a phase-1 feasible point instead of an arbitrary guess",
      "rank r >= 2 blocks start from a seeded random split of the start point",
      "bilinear runs certify the untruncated subproblem solution Y J",
      "log-det iterations start from the trace-min solution",
      "log-det steps are solved in congruence-scaled variables",
      "rectangular subproblems cap the super-block trace at its starting value",
      "interior-point subproblems stopping at gap <= 1e-4 with feasible rows are accepted",
      "complex unknowns are realified to real rank 2",
      "LCP nonnegativity is imposed by GEQ rows on the first column",
  };
}

inline const char* kDftConvention = "unnormalized forward DFT, D(k, n) = exp(-2 pi j k n / N)";

/// Maps a stored solution matrix to domain-level fields (decoded subsets,
/// phases, signals). Called at render time.
using DomainView = std::function<Json(const Eigen::MatrixXd&)>;

struct RankRun {
  int rank = 0;
  RunOutcome outcome = RunOutcome::NotCertified;
  int iterations = 0;
  std::string message;
  /// N x N for PSD problems, N x M otherwise; empty when no iterate exists.
  Eigen::MatrixXd solution;
  std::optional<Eigen::MatrixXd> polished;
  std::string polish_note;
};

struct BaselineRun {
  std::string name;
  std::string status;
  std::string message;
  /// Empty when the method returned no matrix.
  Eigen::MatrixXd solution;
  int iterations = 0;
  std::vector<std::string> notes;
};

struct RunReport {
  std::string title;
  LmeProblem problem = LmeProblem::psd(1, 1);
  Method method = Method::Bilinear;
  HeuristicConfig config;
  /// Phase-1 start point (the super-block for rectangular problems).
  std::optional<Eigen::MatrixXd> initial;
  std::vector<RankRun> ranks;
  std::vector<BaselineRun> baselines;
  /// Domain echo of the instance (weights, spectra, ...), stored verbatim.
  Json domain_instance;
  DomainView domain;
  std::vector<std::string> notes;

  /// Lowest certified rank, if any.
  std::optional<int> lowest_certified() const;
  /// Run whose solution the domain view decodes: the lowest certified rank,
  /// else the run at the target rank.
  const RankRun* selected() const;
  /// Without rank runs the baselines decide: success when one certifies
  /// the target rank.
  int exit_code() const;
  Json to_json() const;
  std::string to_text() const;
};

namespace detail {

inline Json matrix_json(const Eigen::MatrixXd& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Json int_list(const std::vector<int>& v) {
  Json out = Json::array();
  for (int x : v) out.push_back(x);
  return out;
}

/// Spectrum, numerical rank and residual of x, recomputed from scratch.
inline Json analysis(const LmeProblem& prob, const Eigen::MatrixXd& x, int r, double tol) {
  const RankCertificate c = certify(prob, x, r, tol);
  Json out;
  out[prob.is_psd() ? "eigenvalues" : "singular_values"] = vector_json(c.spectrum);
  out["numerical_rank"] = c.achieved_rank;
  out["residual"] = c.residual;
  out["residual_bound"] = c.residual_bound;
  out["certified"] = c.success;
  return out;
}

inline Json config_json(const HeuristicConfig& cfg, Method method) {
  Json c;
  c["method"] = to_string(method);
  c["max_iters"] = cfg.max_iters;
  c["rank_tol"] = cfg.rank_tol;
  c["warm_start"] = cfg.warm_start;
  c["line_search"] = to_string(cfg.line_search);
  c["split"] = to_string(cfg.split);
  c["trace_cap"] = cfg.trace_cap;
  c["sdp_tol"] = cfg.sdp.tol;
  c["sdp_max_iters"] = cfg.sdp.max_iters;
  return c;
}

inline std::string number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string scalar(const Json& v) {
  if (v.is_number_float()) return number(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "none";
  return v.dump();
}

inline bool is_scalar_list(const Json& v) {
  if (!v.is_array()) return false;
  for (const auto& e : v) {
    if (e.is_array() || e.is_object() || e.is_string()) return false;
  }
  return true;
}

inline bool is_matrix(const Json& v) {
  if (!v.is_array() || v.empty()) return false;
  for (const auto& e : v) {
    if (!e.is_array() || !is_scalar_list(e)) return false;
  }
  return true;
}

inline std::string join(const Json& v) {
  std::string s;
  for (const auto& e : v) {
    if (!s.empty()) s += ' ';
    s += scalar(e);
  }
  return s;
}

inline void render(std::ostream& os, const std::string& key, const Json& v, int depth) {
  const std::string pad(static_cast<size_t>(2 * depth), ' ');
  if (is_matrix(v)) {
    os << pad << key << ":\n";
    for (const auto& row : v) os << pad << "  " << join(row) << '\n';
  } else if (is_scalar_list(v)) {
    os << pad << key << ':' << (v.empty() ? "" : " ") << join(v) << '\n';
  } else if (v.is_array()) {
    os << pad << key << ":\n";
    size_t i = 0;
    for (const auto& e : v) {
      if (e.is_string()) {
        os << pad << "  - " << e.get<std::string>() << '\n';
      } else {
        render(os, "[" + std::to_string(i) + "]", e, depth + 1);
      }
      ++i;
    }
  } else if (v.is_object()) {
    os << pad << key << ":\n";
    for (const auto& [k, e] : v.items()) render(os, k, e, depth + 1);
  } else {
    os << pad << key << ": " << scalar(v) << '\n';
  }
}

}  // namespace detail

inline std::optional<int> RunReport::lowest_certified() const {
  std::optional<int> best;
  for (const auto& r : ranks) {
    if (r.outcome == RunOutcome::Certified && (!best || r.rank < *best)) best = r.rank;
  }
  return best;
}

inline const RankRun* RunReport::selected() const {
  const std::optional<int> low = lowest_certified();
  const int want = low.value_or(problem.target_rank());
  for (const auto& r : ranks) {
    if (r.rank == want && r.solution.size() > 0) return &r;
  }
  return nullptr;
}

inline int RunReport::exit_code() const {
  if (ranks.empty()) {
    bool infeasible = false;
    for (const auto& b : baselines) {
      infeasible = infeasible || b.status == sdp::to_string(sdp::Status::Infeasible);
      if (b.solution.size() > 0 && certify(problem, b.solution, problem.target_rank(), config.rank_tol).success) {
        return kExitSuccess;
      }
    }
    return infeasible ? kExitInfeasible : kExitNotCertified;
  }
  bool all_infeasible = !ranks.empty();
  for (const auto& r : ranks) all_infeasible = all_infeasible && r.outcome == RunOutcome::Infeasible;
  if (all_infeasible) return kExitInfeasible;
  const std::optional<int> low = lowest_certified();
  return low && *low <= problem.target_rank() ? kExitSuccess : kExitNotCertified;
}

inline Json RunReport::to_json() const {
  const LmeProblem& p = problem;
  const double tol = config.rank_tol;
  Json doc;
  doc["format"] = "lowrank-report";
  doc["version"] = kSchemaVersion;
  doc["title"] = title;

  Json meta;
  meta["seed"] = config.seed;
  meta["rng"] = Rng::kName;
  meta["config"] = detail::config_json(config, method);
  meta["dft_convention"] = kDftConvention;
  meta["instance_meta"] = p.meta;
  meta["deviations"] = deviations();
  meta["notes"] = notes;
  doc["metadata"] = std::move(meta);

  Json inst;
  inst["shape"] = p.is_psd() ? "psd" : "rect";
  inst["n"] = p.rows_dim();
  inst["m"] = p.cols_dim();
  inst["target_rank"] = p.target_rank();
  Json rows = Json::array();
  for (const auto& r : p.rows()) {
    Json row;
    row["sense"] = to_string(r.sense);
    row["rhs"] = r.rhs;
    row["coeff"] = detail::matrix_json(r.coeff);
    rows.push_back(std::move(row));
  }
  inst["rows"] = std::move(rows);
  inst["b"] = detail::vector_json(p.rhs());
  if (p.planted.has_value()) {
    inst["generator"] = detail::matrix_json(*p.planted);
    inst["generator_residual"] = p.residual_norm(*p.planted);
  } else {
    inst["generator"] = nullptr;
  }
  inst["initial"] = initial ? detail::matrix_json(*initial) : Json(nullptr);
  if (!domain_instance.is_null()) inst["domain"] = domain_instance;
  doc["instance"] = std::move(inst);

  Json rk = Json::array();
  for (const auto& r : ranks) {
    Json e;
    e["rank"] = r.rank;
    e["outcome"] = to_string(r.outcome);
    e["iterations"] = r.iterations;
    e["message"] = r.message;
    if (r.solution.size() > 0) {
      e["solution"] = detail::matrix_json(r.solution);
      e["analysis"] = detail::analysis(p, r.solution, r.rank, tol);
    } else {
      e["solution"] = nullptr;
    }
    Json pol;
    pol["status"] = r.polished ? "applied" : "skipped";
    pol["note"] = r.polish_note;
    if (r.polished) {
      pol["solution"] = detail::matrix_json(*r.polished);
      pol["analysis"] = detail::analysis(p, *r.polished, r.rank, tol);
    }
    e["polish"] = std::move(pol);
    rk.push_back(std::move(e));
  }
  doc["ranks"] = std::move(rk);

  Json bl = Json::array();
  for (const auto& b : baselines) {
    Json e;
    e["name"] = b.name;
    e["status"] = b.status;
    e["message"] = b.message;
    e["iterations"] = b.iterations;
    e["notes"] = b.notes;
    if (b.solution.size() > 0) {
      e["solution"] = detail::matrix_json(b.solution);
      Json a = detail::analysis(p, b.solution, p.target_rank(), tol);
      if (p.is_psd()) {
        a["trace"] = b.solution.trace();
      } else {
        a["nuclear_norm"] = linalg::singular_values(b.solution).sum();
      }
      e["analysis"] = std::move(a);
    } else {
      e["solution"] = nullptr;
    }
    bl.push_back(std::move(e));
  }
  doc["baselines"] = std::move(bl);

  const RankRun* sel = selected();
  if (domain) {
    Json d;
    if (sel != nullptr) {
      d["decoded_rank"] = sel->rank;
      d["fields"] = domain(sel->solution);
    } else {
      d["decoded_rank"] = nullptr;
      d["fields"] = nullptr;
    }
    doc["domain"] = std::move(d);
  }

  Json sum;
  std::vector<int> certified;
  for (const auto& r : ranks) {
    if (r.outcome == RunOutcome::Certified) certified.push_back(r.rank);
  }
  sum["certified_ranks"] = detail::int_list(certified);
  const std::optional<int> low = lowest_certified();
  sum["lowest_certified_rank"] = low ? Json(*low) : Json(nullptr);
  sum["exit_code"] = exit_code();
  doc["summary"] = std::move(sum);
  return doc;
}

/// Text layout: one "== section" heading per top-level key, then
/// "key: value" lines; lists print space-separated on one line and
/// matrices print one row per indented line.
inline std::string render_text(const Json& doc) {
  std::ostringstream os;
  os << "lowrank report: " << doc.value("title", std::string()) << '\n';
  for (const auto& [k, v] : doc.items()) {
    if (k == "format" || k == "version" || k == "title") continue;
    os << "\n== " << k << '\n';
    if (v.is_object()) {
      for (const auto& [kk, vv] : v.items()) detail::render(os, kk, vv, 0);
    } else if (v.is_array() && !detail::is_scalar_list(v)) {
      size_t i = 0;
      for (const auto& e : v) detail::render(os, "[" + std::to_string(i++) + "]", e, 0);
    } else {
      detail::render(os, k, v, 0);
    }
  }
  return os.str();
}

inline std::string RunReport::to_text() const { return render_text(to_json()); }

// ---------------------------------------------------------------------------
// Running.

struct SweepOptions {
  /// Solve only this rank instead of max rank down to 1.
  std::optional<int> rank;
  bool polish = true;
  bool baselines = true;
  LogDetConfig logdet;
};

namespace detail {

inline RankRun run_rank(const LmeProblem& prob, int r, Method method, const HeuristicConfig& cfg) {
  RankRun out;
  out.rank = r;
  if (prob.is_psd()) {
    const PsdRun run = method == Method::Gradient ? gradient_psd(prob, r, cfg) : bilinear_psd(prob, r, cfg);
    out.outcome = run.outcome;
    out.iterations = run.state.iterations;
    out.message = run.message;
    if (!run.state.aggregate.empty()) out.solution = run.state.aggregate.mat();
  } else {
    const GeneralRun run =
        method == Method::Gradient ? gradient_general(prob, r, cfg) : bilinear_general(prob, r, cfg);
    out.outcome = run.outcome;
    out.iterations = run.state.iterations;
    out.message = run.message;
    if (run.state.x.size() > 0 && run.outcome != RunOutcome::Infeasible) out.solution = run.state.x;
  }
  return out;
}

inline RankRun from_cascade(const CascadeEntry& e) {
  RankRun out;
  out.rank = e.rank;
  out.outcome = e.outcome;
  out.iterations = e.iterations;
  out.message = e.message;
  if (e.outcome != RunOutcome::Infeasible) out.solution = e.solution;
  return out;
}

inline void apply_polish(const LmeProblem& prob, RankRun& r) {
  if (r.solution.size() == 0) {
    r.polish_note = "no solution";
    return;
  }
  try {
    if (prob.is_psd()) {
      r.polished = polish(prob, SymMatrix(r.solution), r.rank).x;
    } else {
      r.polished = polish_general(prob, r.solution, r.rank).x;
    }
    r.polish_note = "applied";
  } catch (const PolishNotApplicable& e) {
    r.polish_note = e.what();
  }
}

/// The PSD embedding [[Y, X], [X^T, Z]] of a rectangular problem, with each
/// row <A, X> written as <[[0, A/2], [A^T/2, 0]], B>.
inline LmeProblem embed_rect(const LmeProblem& prob) {
  const int n = prob.rows_dim();
  const int m = prob.cols_dim();
  LmeProblem out = LmeProblem::psd(n + m, std::min(2 * prob.target_rank(), n + m));
  for (const auto& r : prob.rows()) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n + m, n + m);
    c.block(0, n, n, m) = 0.5 * r.coeff;
    c.block(n, 0, m, n) = 0.5 * r.coeff.transpose();
    out.add_row(c, r.rhs, r.sense);
  }
  out.meta = "embedding of " + prob.meta;
  return out;
}

inline BaselineRun trace_baseline(const LmeProblem& prob) {
  BaselineRun b;
  b.name = "trace-min";
  const bool rect = !prob.is_psd();
  const LmeProblem target = rect ? embed_rect(prob) : prob;
  const TraceMinResult t = trace_min(target);
  b.status = sdp::to_string(t.status);
  b.message = t.message;
  if (t.ok()) {
    b.solution = rect ? sdp::offdiag_part(t.x.mat(), prob.rows_dim(), prob.cols_dim()) : t.x.mat();
  }
  if (rect) b.notes.push_back("solved on the PSD embedding; the off-diagonal block is reported");
  return b;
}

inline BaselineRun logdet_baseline(const LmeProblem& prob, const LogDetConfig& cfg) {
  BaselineRun b;
  b.name = "log-det";
  const bool rect = !prob.is_psd();
  const LmeProblem target = rect ? embed_rect(prob) : prob;
  const LogDetResult r = logdet_heuristic(target, cfg);
  b.status = sdp::to_string(r.status);
  b.message = r.message;
  b.iterations = r.iterations;
  b.notes = r.warnings;
  if (!r.x.empty()) {
    b.solution = rect ? sdp::offdiag_part(r.x.mat(), prob.rows_dim(), prob.cols_dim()) : r.x.mat();
  }
  if (rect) b.notes.push_back("solved on the PSD embedding; the off-diagonal block is reported");
  return b;
}

inline BaselineRun nuclear_baseline(const LmeProblem& prob) {
  BaselineRun b;
  b.name = "nuclear-norm";
  if (prob.is_psd()) {
    const TraceMinResult t = trace_min(prob);
    b.status = sdp::to_string(t.status);
    b.message = t.message;
    if (t.ok()) b.solution = t.x.mat();
    b.notes.push_back("on the PSD feasible set the nuclear norm is the trace");
    return b;
  }
  for (const auto& r : prob.rows()) {
    if (r.sense != Sense::Eq) {
      b.status = "skipped";
      b.message = "inequality rows present";
      return b;
    }
  }
  const NuclearNormResult r = nuclear_norm_min(prob);
  b.status = sdp::to_string(r.status);
  b.message = r.message;
  if (r.ok()) b.solution = r.x;
  return b;
}

}  // namespace detail

inline std::vector<BaselineRun> run_baselines(const LmeProblem& prob, const LogDetConfig& cfg = {}) {
  return {detail::trace_baseline(prob), detail::logdet_baseline(prob, cfg), detail::nuclear_baseline(prob)};
}

/// Phase 1, then the rank cascade (or one rank), polishing and baselines.
/// Solver failures are recorded per rank; the call itself only throws on
/// invalid arguments.
inline RunReport run_sweep(const LmeProblem& prob, Method method, const HeuristicConfig& cfg,
                           const SweepOptions& opt = {}) {
  cfg.validate();
  opt.logdet.validate();
  if (opt.rank && (*opt.rank < 1 || *opt.rank > prob.max_rank())) {
    throw std::invalid_argument("run_sweep: rank out of range");
  }
  RunReport rep;
  rep.problem = prob;
  rep.method = method;
  rep.config = cfg;
  rep.title = prob.meta;
  HeuristicConfig local = cfg;
  if (!local.initial) {
    const sdp::FeasiblePoint fp = sdp::phase1_feasible(prob);
    if (!fp.feasible()) {
      const std::string msg = std::string("phase 1 ") + sdp::to_string(fp.status) + ": " + fp.message;
      const int hi = opt.rank.value_or(prob.max_rank());
      const int lo = opt.rank.value_or(1);
      for (int r = hi; r >= lo; --r) {
        RankRun e;
        e.rank = r;
        e.outcome = RunOutcome::Infeasible;
        e.message = msg;
        e.polish_note = "no solution";
        rep.ranks.push_back(std::move(e));
      }
      return rep;
    }
    local.initial = fp.lifted.mat();
  }
  rep.initial = local.initial;
  if (opt.rank) {
    rep.ranks.push_back(detail::run_rank(prob, *opt.rank, method, local));
  } else {
    for (const auto& e : rank_cascade(prob, local, method)) rep.ranks.push_back(detail::from_cascade(e));
  }
  if (opt.polish) {
    for (auto& r : rep.ranks) detail::apply_polish(prob, r);
  } else {
    for (auto& r : rep.ranks) r.polish_note = "disabled";
  }
  if (opt.baselines) rep.baselines = run_baselines(prob, opt.logdet);
  return rep;
}

// ---------------------------------------------------------------------------
// Domain views for the application encoders.

namespace detail {

inline Json cvector_json(const apps::CVector& v) {
  Json out;
  out["re"] = vector_json(v.real());
  out["im"] = vector_json(v.imag());
  out["magnitude"] = vector_json(v.cwiseAbs());
  Vector ph(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) ph(i) = std::arg(v(i));
  out["phase"] = vector_json(ph);
  return out;
}

}  // namespace detail

inline Json knapsack_instance_json(const apps::KnapsackInstance& k) {
  Json j;
  j["values"] = detail::vector_json(k.values);
  j["weights"] = detail::vector_json(k.weights);
  j["min_value"] = k.min_value;
  j["max_weight"] = k.max_weight;
  return j;
}

inline DomainView knapsack_view(const apps::KnapsackInstance& k) {
  return [k](const Eigen::MatrixXd& x) {
    const apps::KnapsackDecode d = apps::decode_knapsack(k, x);
    Json j;
    j["chosen"] = detail::int_list(d.chosen);
    j["total_value"] = d.value;
    j["total_weight"] = d.weight;
    j["verified"] = d.verified;
    j["message"] = d.message;
    return j;
  };
}

inline Json subset_sum_instance_json(const apps::SubsetSumInstance& ss) {
  Json j;
  Json s = Json::array();
  for (long long v : ss.s) s.push_back(v);
  j["s"] = std::move(s);
  j["target"] = ss.target;
  return j;
}

inline DomainView subset_sum_view(const apps::SubsetSumInstance& ss) {
  return [ss](const Eigen::MatrixXd& x) {
    const apps::SubsetSumDecode d = apps::decode_subset_sum(ss, x);
    Json j;
    j["chosen"] = detail::int_list(d.chosen);
    j["sum"] = d.sum;
    j["verified"] = d.verified;
    j["message"] = d.message;
    return j;
  };
}

inline Json unit_modulus_instance_json(const apps::UnitModulusInstance& um) {
  Json j;
  j["a"] = detail::matrix_json(um.a);
  j["b_re"] = detail::vector_json(um.b.real());
  j["b_im"] = detail::vector_json(um.b.imag());
  j["b_is_real"] = um.real_rhs();
  j["planted_theta"] = um.planted_theta ? detail::vector_json(*um.planted_theta) : Json(nullptr);
  return j;
}

inline DomainView unit_modulus_view(const apps::UnitModulusInstance& um) {
  return [um](const Eigen::MatrixXd& y) {
    const apps::UnitModulusDecode d = apps::decode_unit_modulus(um, y);
    Json j;
    j["theta"] = detail::vector_json(d.theta);
    j["pairing_residual"] = d.pairing_residual;
    j["equation_residual"] = d.equation_residual;
    j["ok"] = d.ok;
    j["message"] = d.message;
    return j;
  };
}

inline Json phase_retrieval_instance_json(const apps::PhaseRetrievalInstance& pr) {
  Json j;
  j["magnitude_squared_spectrum"] = detail::vector_json(pr.z);
  j["amp_bound"] = pr.amp_bound;
  j["planted"] = pr.planted ? detail::cvector_json(*pr.planted) : Json(nullptr);
  return j;
}

inline DomainView phase_retrieval_view(const apps::PhaseRetrievalInstance& pr) {
  return [pr](const Eigen::MatrixXd& y) {
    const apps::PhaseRetrievalDecode d = apps::decode_phase_retrieval(pr, y);
    Json j;
    j["signal"] = detail::cvector_json(d.x);
    const apps::CVector dx = apps::dft_matrix(pr.size()) * d.x;
    j["recovered_spectrum"] = detail::vector_json(dx.cwiseAbs2());
    j["pairing_residual"] = d.pairing_residual;
    j["magnitude_residual"] = d.magnitude_residual;
    j["amplitude_violation"] = d.amplitude_violation;
    j["ok"] = d.ok;
    j["message"] = d.message;
    return j;
  };
}

inline Json lcp_instance_json(const apps::LcpInstance& l) {
  Json j;
  j["m"] = detail::matrix_json(l.m);
  j["q"] = detail::vector_json(l.q);
  return j;
}

inline DomainView lcp_view(const apps::LcpInstance& l) {
  return [l](const Eigen::MatrixXd& x) {
    const apps::LcpDecode d = apps::decode_lcp(l, x);
    Json j;
    j["w"] = detail::vector_json(d.w);
    j["z"] = detail::vector_json(d.z);
    j["complementarity"] = d.complementarity;
    j["equation_residual"] = d.equation_residual;
    j["negativity"] = d.negativity;
    return j;
  };
}

}  // namespace lowrank::report
