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

// Text instance files and the seeded planted-instance generator. The
// grammar is documented in docs/formats.md.

#pragma once

#include "lowrank/problem.hpp"
#include "lowrank/random.hpp"

#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lowrank::io {

enum class InstanceKind { Psd, Rect };

struct GeneratorSpec {
  InstanceKind kind = InstanceKind::Psd;
  int n = 6;
  /// Ignored for PSD instances.
  int m_cols = 6;
  int rows = 10;
  int planted_rank = 1;
  std::uint64_t seed = 0;
};

/// Plants a rank-r solution (G G^T for PSD, U V^T otherwise, with Gaussian
/// factors), samples each coefficient matrix with standard normal entries
/// (symmetrized for PSD) and sets b = A vec(planted).
inline LmeProblem generate_instance(const GeneratorSpec& gen) {
  const bool psd = gen.kind == InstanceKind::Psd;
  const int n = gen.n;
  const int m = psd ? gen.n : gen.m_cols;
  if (n < 1 || m < 1 || gen.rows < 0) throw std::invalid_argument("generate_instance: dimensions must be positive");
  if (gen.planted_rank < 1 || gen.planted_rank > std::min(n, m)) {
    throw std::invalid_argument("generate_instance: planted rank out of range");
  }
  Rng rng(gen.seed);
  Eigen::MatrixXd planted;
  if (psd) {
    const Eigen::MatrixXd g = rng.normal_matrix(n, gen.planted_rank);
    planted = g * g.transpose();
  } else {
    const Eigen::MatrixXd u = rng.normal_matrix(n, gen.planted_rank);
    const Eigen::MatrixXd v = rng.normal_matrix(m, gen.planted_rank);
    planted = u * v.transpose();
  }
  LmeProblem prob = psd ? LmeProblem::psd(n, gen.planted_rank) : LmeProblem::rect(n, m, gen.planted_rank);
  for (int i = 0; i < gen.rows; ++i) {
    Eigen::MatrixXd a = rng.normal_matrix(n, m);
    if (psd) a = 0.5 * (a + a.transpose());
    prob.add_row(a, linalg::inner(a, planted), Sense::Eq);
  }
  std::ostringstream meta;
  meta << "generated kind=" << (psd ? "psd" : "rect") << " seed=" << gen.seed << " rng=" << Rng::kName;
  prob.meta = meta.str();
  prob.planted = planted;
  return prob;
}

namespace detail {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_matrix(std::ostream& os, const Eigen::MatrixXd& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) os << (j ? " " : "") << num(a(i, j));
    os << '\n';
  }
}

inline Eigen::MatrixXd read_matrix(std::istream& is, int rows, int cols) {
  Eigen::MatrixXd a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (!(is >> a(i, j))) throw std::runtime_error("instance parse error: matrix entry");
    }
  }
  return a;
}

}  // namespace detail

inline void write_instance(std::ostream& os, const LmeProblem& prob) {
  os << "lowrank-instance 1\n";
  if (prob.is_psd()) {
    os << "shape psd " << prob.rows_dim() << '\n';
  } else {
    os << "shape rect " << prob.rows_dim() << ' ' << prob.cols_dim() << '\n';
  }
  os << "rank " << prob.target_rank() << '\n';
  os << "meta " << prob.meta << '\n';
  os << "rows " << prob.num_rows() << '\n';
  for (const auto& r : prob.rows()) {
    os << "row " << to_string(r.sense) << ' ' << detail::num(r.rhs) << '\n';
    detail::write_matrix(os, r.coeff);
  }
  if (prob.planted.has_value()) {
    os << "planted\n";
    detail::write_matrix(os, *prob.planted);
  }
  os << "end\n";
}

inline std::string instance_to_string(const LmeProblem& prob) {
  std::ostringstream os;
  write_instance(os, prob);
  return os.str();
}

inline LmeProblem read_instance(std::istream& is) {
  auto fail = [](const std::string& what) -> void { throw std::runtime_error("instance parse error: " + what); };
  std::string tok;
  int version = 0;
  if (!(is >> tok >> version) || tok != "lowrank-instance" || version != 1) fail("header");
  std::string shape;
  int n = 0, m = 0;
  if (!(is >> tok >> shape) || tok != "shape") fail("shape");
  if (shape == "psd") {
    if (!(is >> n)) fail("shape dims");
    m = n;
  } else if (shape == "rect") {
    if (!(is >> n >> m)) fail("shape dims");
  } else {
    fail("unknown shape '" + shape + "'");
  }
  if (n < 1 || m < 1) fail("shape dims");
  int rank = 0;
  if (!(is >> tok >> rank) || tok != "rank") fail("rank");
  if (rank < 1 || rank > std::min(n, m)) fail("rank out of range");
  if (!(is >> tok) || tok != "meta") fail("meta");
  std::string meta;
  std::getline(is, meta);
  if (!meta.empty() && meta.front() == ' ') meta.erase(0, 1);
  int rows = 0;
  if (!(is >> tok >> rows) || tok != "rows" || rows < 0) fail("rows");
  LmeProblem prob = shape == "psd" ? LmeProblem::psd(n, rank) : LmeProblem::rect(n, m, rank);
  prob.meta = meta;
  for (int i = 0; i < rows; ++i) {
    std::string sense;
    double rhs = 0.0;
    if (!(is >> tok >> sense >> rhs) || tok != "row") fail("row header");
    const Eigen::MatrixXd a = detail::read_matrix(is, n, m);
    prob.add_row(a, rhs, parse_sense(sense));
  }
  if (!(is >> tok)) fail("missing end");
  if (tok == "planted") {
    prob.planted = detail::read_matrix(is, n, m);
    if (!(is >> tok)) fail("missing end");
  }
  if (tok != "end") fail("expected end");
  return prob;
}

inline LmeProblem instance_from_string(const std::string& s) {
  std::istringstream is(s);
  return read_instance(is);
}

}  // namespace lowrank::io
