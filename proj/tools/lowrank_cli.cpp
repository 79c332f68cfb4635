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

// Command-line front end: instance generation, rank sweeps, application
// demos and baselines. Exit codes: 0 success, 1 no rank certified,
// 2 infeasible, 3 usage error.

#include "lowrank/lowrank.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace {

using lowrank::report::kExitUsage;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunFlags {
  std::optional<int> rank;
  std::string method = "bilinear";
  int max_iters = 100;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  bool warm_start = false;
  std::string line_search = "paper";
  std::string report_path;
  std::string format = "text";
  bool no_polish = false;
};

void add_run_flags(CLI::App* sub, RunFlags& f) {
  sub->add_option("--rank", f.rank, "Solve only this rank")->check(CLI::PositiveNumber);
  sub->add_option("--method", f.method, "Heuristic")->check(CLI::IsMember({"gradient", "bilinear"}))
      ->capture_default_str();
  sub->add_option("--max-iters", f.max_iters, "Iteration limit")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--tol", f.tol, "Numerical rank tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--seed", f.seed, "Seed for the block split and generators")->capture_default_str();
  sub->add_flag("--warm-start", f.warm_start, "Start rank r from the rank r+1 result");
  sub->add_option("--line-search", f.line_search, "Step rule")->check(CLI::IsMember({"paper", "exact"}))
      ->capture_default_str();
  sub->add_flag("--no-polish", f.no_polish, "Skip polishing");
  sub->add_option("--report", f.report_path, "Write the report here instead of stdout");
  sub->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
}

void add_output_flags(CLI::App* sub, RunFlags& f) {
  sub->add_option("--tol", f.tol, "Numerical rank tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--report", f.report_path, "Write the report here instead of stdout");
  sub->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
}

lowrank::HeuristicConfig config_from(const RunFlags& f) {
  lowrank::HeuristicConfig cfg;
  cfg.max_iters = f.max_iters;
  cfg.rank_tol = f.tol;
  cfg.seed = f.seed;
  cfg.warm_start = f.warm_start;
  cfg.line_search = f.line_search == "exact" ? lowrank::LineSearch::Exact : lowrank::LineSearch::Paper;
  return cfg;
}

lowrank::Method method_from(const RunFlags& f) {
  return f.method == "gradient" ? lowrank::Method::Gradient : lowrank::Method::Bilinear;
}

lowrank::LmeProblem load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read instance file '" + path + "'");
  try {
    return lowrank::io::read_instance(in);
  } catch (const std::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

int finish(const lowrank::report::RunReport& rep, const RunFlags& f) {
  if (f.format == "structured") {
    emit(rep.to_json().dump(2) + "\n", f.report_path);
  } else {
    emit(rep.to_text(), f.report_path);
  }
  return rep.exit_code();
}

lowrank::report::SweepOptions sweep_options(const RunFlags& f, bool baselines) {
  lowrank::report::SweepOptions opt;
  opt.rank = f.rank;
  opt.polish = !f.no_polish;
  opt.baselines = baselines;
  return opt;
}

/// Runs an application encoding at its target rank (or --rank).
int run_app(const lowrank::LmeProblem& prob, const RunFlags& f, bool baselines, const std::string& title,
            lowrank::report::Json domain_instance, lowrank::report::DomainView view) {
  RunFlags local = f;
  if (!local.rank) local.rank = prob.target_rank();
  if (*local.rank > prob.max_rank()) throw UsageError("--rank exceeds the matrix order");
  auto rep = lowrank::report::run_sweep(prob, method_from(f), config_from(f), sweep_options(local, baselines));
  rep.title = title;
  rep.domain_instance = std::move(domain_instance);
  rep.domain = std::move(view);
  return finish(rep, f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank solutions of linear matrix equations"};
  app.require_subcommand(1);

  // generate
  std::string kind = "psd";
  int gen_n = 6, gen_m = 6, gen_rows = 10, gen_rank = 1;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Write a seeded planted instance");
  gen->add_option("--kind", kind, "Shape")->check(CLI::IsMember({"psd", "rect"}))->capture_default_str();
  gen->add_option("--n", gen_n, "Rows of the unknown")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--m-cols", gen_m, "Columns of the unknown (rect)")->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen->add_option("--rows", gen_rows, "Number of equations")->check(CLI::NonNegativeNumber)->capture_default_str();
  gen->add_option("--planted-rank", gen_rank, "Rank of the planted solution")->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  // solve
  RunFlags solve_f;
  std::string solve_path;
  bool solve_no_baselines = false;
  auto* solve = app.add_subcommand("solve", "Rank sweep with polishing and baselines");
  solve->add_option("instance", solve_path, "Instance file")->required();
  add_run_flags(solve, solve_f);
  solve->add_flag("--no-baselines", solve_no_baselines, "Skip the baseline methods");

  // baselines
  RunFlags base_f;
  std::string base_path;
  double delta = 1e-6;
  int logdet_iters = 50;
  auto* base = app.add_subcommand("baselines", "Trace, log-det and nuclear-norm minimization only");
  base->add_option("instance", base_path, "Instance file")->required();
  add_output_flags(base, base_f);
  base->add_option("--delta", delta, "Log-det regularization")->check(CLI::PositiveNumber)->capture_default_str();
  base->add_option("--logdet-iters", logdet_iters, "Log-det iteration limit")->check(CLI::PositiveNumber)
      ->capture_default_str();

  // applications
  struct AppFlags {
    RunFlags run;
    int n = 0;
    bool baselines = false;
  };
  std::map<std::string, AppFlags> apps_f;
  int equations = 2;
  auto add_app = [&](const std::string& name, const std::string& help, int default_n) {
    AppFlags& a = apps_f[name];
    a.n = default_n;
    auto* sub = app.add_subcommand(name, help);
    add_run_flags(sub, a.run);
    sub->add_option("--n", a.n, "Problem size")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_flag("--baselines", a.baselines, "Also run the baseline methods");
    return sub;
  };
  add_app("knapsack", "Random 0/1 knapsack feasibility instance", 8);
  add_app("subset-sum", "Random subset-sum instance", 8);
  add_app("nonlinear", "Unit-modulus system A x = b", 4)
      ->add_option("--equations", equations, "Number of equations")->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_app("phase-retrieval", "Signal from its magnitude-squared spectrum", 4);
  add_app("lcp", "Random symmetric linear complementarity problem", 4);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  namespace rp = lowrank::report;
  namespace ap = lowrank::apps;
  try {
    if (*gen) {
      lowrank::io::GeneratorSpec gs;
      gs.kind = kind == "rect" ? lowrank::io::InstanceKind::Rect : lowrank::io::InstanceKind::Psd;
      gs.n = gen_n;
      gs.m_cols = gen_m;
      gs.rows = gen_rows;
      gs.planted_rank = gen_rank;
      gs.seed = gen_seed;
      emit(lowrank::io::instance_to_string(lowrank::io::generate_instance(gs)), gen_out);
      return rp::kExitSuccess;
    }
    if (*solve) {
      const lowrank::LmeProblem prob = load(solve_path);
      if (solve_f.rank && *solve_f.rank > prob.max_rank()) throw UsageError("--rank exceeds the matrix order");
      const auto rep =
          rp::run_sweep(prob, method_from(solve_f), config_from(solve_f), sweep_options(solve_f, !solve_no_baselines));
      return finish(rep, solve_f);
    }
    if (*base) {
      const lowrank::LmeProblem prob = load(base_path);
      rp::RunReport rep;
      rep.problem = prob;
      rep.title = prob.meta;
      rep.config.rank_tol = base_f.tol;
      lowrank::LogDetConfig ld;
      ld.delta = delta;
      ld.max_iters = logdet_iters;
      rep.baselines = rp::run_baselines(prob, ld);
      std::ostringstream note;
      note << "log-det delta " << delta << ", iteration limit " << logdet_iters;
      rep.notes.push_back(note.str());
      return finish(rep, base_f);
    }
    for (auto& [name, a] : apps_f) {
      if (!app.got_subcommand(name)) continue;
      const std::uint64_t seed = a.run.seed;
      if (name == "knapsack") {
        const auto k = ap::random_knapsack(a.n, seed);
        return run_app(ap::encode_knapsack(k), a.run, a.baselines, "knapsack", rp::knapsack_instance_json(k),
                       rp::knapsack_view(k));
      }
      if (name == "subset-sum") {
        const auto ss = ap::random_subset_sum(a.n, seed);
        return run_app(ap::encode_subset_sum(ss), a.run, a.baselines, "subset-sum",
                       rp::subset_sum_instance_json(ss), rp::subset_sum_view(ss));
      }
      if (name == "nonlinear") {
        const auto um = ap::random_unit_modulus(a.n, equations, seed);
        return run_app(ap::encode_unit_modulus(um), a.run, a.baselines, "unit-modulus nonlinear equations",
                       rp::unit_modulus_instance_json(um), rp::unit_modulus_view(um));
      }
      if (name == "phase-retrieval") {
        const auto pr = ap::random_phase_retrieval(a.n, seed);
        return run_app(ap::encode_phase_retrieval(pr), a.run, a.baselines, "phase retrieval",
                       rp::phase_retrieval_instance_json(pr), rp::phase_retrieval_view(pr));
      }
      if (name == "lcp") {
        const auto l = ap::random_lcp(a.n, seed);
        return run_app(ap::encode_lcp(l), a.run, a.baselines, "linear complementarity", rp::lcp_instance_json(l),
                       rp::lcp_view(l));
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rp::kExitNotCertified;
  }
  return kExitUsage;
}
