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

// Encoders from application problems to rank-constrained feasibility
// instances, decoders back to domain answers, and seeded instance
// generators. Complex programs are realified: a Hermitian H of order n
// becomes the real symmetric [[Re H, -Im H], [Im H, Re H]] of order 2n, and
// complex rank 1 becomes real rank 2.

#pragma once

#include "lowrank/problem.hpp"
#include "lowrank/random.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lowrank::apps {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// ---------------------------------------------------------------------------
// Realification

/// T(H) = [[Re H, -Im H], [Im H, Re H]].
inline SymMatrix realify(const CMatrix& h, double tol = 1e-12) {
  if (h.rows() != h.cols()) throw std::invalid_argument("realify: square input required");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > tol * scale) {
    throw std::invalid_argument("realify: Hermitian input required");
  }
  const auto n = h.rows();
  Eigen::MatrixXd t(2 * n, 2 * n);
  t << h.real(), -h.imag(), h.imag(), h.real();
  return SymMatrix(t);
}

/// Inverse of realify on the structured subspace; blocks are averaged so
/// that slightly unstructured input maps to the nearest Hermitian matrix.
inline CMatrix derealify(const Eigen::MatrixXd& t) {
  if (t.rows() != t.cols() || t.rows() % 2 != 0) throw std::invalid_argument("derealify: even square input required");
  const auto n = t.rows() / 2;
  const Eigen::MatrixXd p = 0.5 * (t.topLeftCorner(n, n) + t.bottomRightCorner(n, n));
  const Eigen::MatrixXd q = 0.5 * (t.bottomLeftCorner(n, n) - t.topRightCorner(n, n));
  CMatrix h(n, n);
  h.real() = p;
  h.imag() = q;
  return 0.5 * (h + h.adjoint());
}

/// A linear functional sum_{a,b} coeff(a, b) H(a, b) on a Hermitian unknown,
/// compared against rhs. Inequality senses compare the real part.
struct ComplexRow {
  CMatrix coeff;
  Complex rhs{0.0, 0.0};
  Sense sense = Sense::Eq;
};

/// Rows forcing a real symmetric Y of order 2n to have the realified form:
/// equal diagonal blocks and an antisymmetric lower-left block.
inline void add_structure_rows(LmeProblem& prob, int n) {
  const int dim = 2 * n;
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a <= b; ++a) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(dim, dim);
      e(a, b) += 1.0;
      e(n + a, n + b) -= 1.0;
      prob.add_row(e, 0.0);
    }
  }
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a <= b; ++a) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(dim, dim);
      e(n + a, b) += 1.0;
      if (a != b) e(n + b, a) += 1.0;
      prob.add_row(e, 0.0);
    }
  }
}

inline bool is_hermitian(const CMatrix& c, double tol = 1e-14) {
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  return (c - c.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

/// Real rows on Y = T(H) equivalent to the complex rows on H. An equality
/// row whose coefficient is Hermitian is real-valued on Hermitian H and
/// yields one row unless its right-hand side has an imaginary part; other
/// equality rows yield a real-part and an imaginary-part row. Inequality
/// rows yield their real part only.
inline std::vector<LmeRow> realify_operator(const std::vector<ComplexRow>& rows, int n) {
  std::vector<LmeRow> out;
  const int dim = 2 * n;
  for (const auto& r : rows) {
    if (r.coeff.rows() != n || r.coeff.cols() != n) throw std::invalid_argument("realify_operator: shape mismatch");
    Eigen::MatrixXd re = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd im = Eigen::MatrixXd::Zero(dim, dim);
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < n; ++a) {
        const Complex c = r.coeff(a, b);
        // H(a, b) = Y(a, b) + j Y(n + a, b) on structured Y.
        re(a, b) += c.real();
        re(n + a, b) -= c.imag();
        im(a, b) += c.imag();
        im(n + a, b) += c.real();
      }
    }
    out.push_back({re, r.rhs.real(), r.sense});
    if (r.sense != Sense::Eq) continue;
    if (!is_hermitian(r.coeff) || r.rhs.imag() != 0.0) out.push_back({im, r.rhs.imag(), Sense::Eq});
  }
  return out;
}

/// Complex rank-1 feasibility over Hermitian H of order n, realified.
inline LmeProblem realified_problem(const std::vector<ComplexRow>& rows, int n) {
  LmeProblem prob = LmeProblem::psd(2 * n, 2);
  add_structure_rows(prob, n);
  for (const auto& r : realify_operator(rows, n)) prob.add_row(r.coeff, r.rhs, r.sense);
  return prob;
}

inline ComplexRow entry_row(int n, int a, int b, Complex rhs, Sense sense = Sense::Eq) {
  ComplexRow r;
  r.coeff = CMatrix::Zero(n, n);
  r.coeff(a, b) = 1.0;
  r.rhs = rhs;
  r.sense = sense;
  return r;
}

/// Result of reading a complex vector v from Y ~ T(v v^H).
struct ComplexFactor {
  CVector v;
  /// Distance of J u from the top-2 eigenspace, J = [[0, -I], [I, 0]] and u
  /// the top eigenvector.
  double pairing_residual = 0.0;
  bool ok = false;
};

inline constexpr double kPairingTol = 1e-6;

/// Extracts v from the top-2 eigenspace: the unit eigenvector [p; q] maps to
/// sqrt(lambda_1) (p + j q). The phase of the first entry with magnitude
/// above 1e-6 is set to 0.
inline ComplexFactor complex_factor(const Eigen::MatrixXd& y) {
  if (y.rows() % 2 != 0 || y.rows() < 2) throw std::invalid_argument("complex_factor: even order required");
  const auto n = y.rows() / 2;
  const auto ed = linalg::sym_eig(SymMatrix(y));
  const Eigen::MatrixXd u2 = ed.vectors.leftCols(2);
  const Vector u = u2.col(0);
  Vector ju(2 * n);
  ju << -u.tail(n), u.head(n);
  ComplexFactor out;
  out.pairing_residual = (ju - u2 * (u2.transpose() * ju)).norm();
  const double lam = std::max(ed.values(0), 0.0);
  out.v.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.v(i) = std::sqrt(lam) * Complex(u(i), u(n + i));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(out.v(i)) > 1e-6) {
      out.v *= std::polar(1.0, -std::arg(out.v(i)));
      break;
    }
  }
  out.ok = out.pairing_residual <= kPairingTol;
  return out;
}

/// T([1; x][1; x]^H).
inline SymMatrix lift_complex(const CVector& x) {
  CVector v(x.size() + 1);
  v << Complex(1.0, 0.0), x;
  return realify(v * v.adjoint());
}

inline CVector rotate_first_phase(CVector x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) > 1e-6) {
      x *= std::polar(1.0, -std::arg(x(i)));
      break;
    }
  }
  return x;
}

// ---------------------------------------------------------------------------
// 0/1 programs

namespace detail {

inline Eigen::MatrixXd entry(int dim, int a, int b) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(dim, dim);
  e(a, b) = 1.0;
  return e;
}

/// X(1,1) = 1 and diag(X) = X(:,1) on the order-(n+1) unknown.
inline LmeProblem binary_skeleton(int n) {
  if (n < 1) throw std::invalid_argument("binary encoder: at least one variable required");
  LmeProblem prob = LmeProblem::psd(n + 1, 1);
  prob.add_row(entry(n + 1, 0, 0), 1.0);
  for (int i = 1; i <= n; ++i) prob.add_row(entry(n + 1, i, i) - entry(n + 1, i, 0), 0.0);
  return prob;
}

/// Row sum_i c_i X(i+1, 1).
inline Eigen::MatrixXd first_column_row(const Vector& c) {
  const auto n = c.size();
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (Eigen::Index i = 0; i < n; ++i) e(i + 1, 0) = c(i);
  return e;
}

inline void require_finite(const Vector& v, const char* who) {
  if (!v.allFinite()) throw std::invalid_argument(std::string(who) + ": non-finite data");
}

}  // namespace detail

/// Lifted matrix [1; x][1; x]^T.
inline SymMatrix lift_binary(const Vector& x) {
  Vector v(x.size() + 1);
  v << 1.0, x;
  return SymMatrix(v * v.transpose());
}

/// Rounds X(2:N+1, 1) at 0.5.
inline std::vector<int> round_first_column(const Eigen::MatrixXd& x) {
  std::vector<int> bits(static_cast<size_t>(x.rows() - 1));
  for (Eigen::Index i = 1; i < x.rows(); ++i) bits[static_cast<size_t>(i - 1)] = x(i, 0) >= 0.5 ? 1 : 0;
  return bits;
}

/// Find x in {0,1}^N with C x = b.
inline LmeProblem encode_binary_feasibility(const Eigen::MatrixXd& c, const Vector& b) {
  if (c.rows() != b.size()) throw std::invalid_argument("encode_binary_feasibility: C and b disagree");
  if (!c.allFinite()) throw std::invalid_argument("encode_binary_feasibility: non-finite data");
  detail::require_finite(b, "encode_binary_feasibility");
  const int n = static_cast<int>(c.cols());
  LmeProblem prob = detail::binary_skeleton(n);
  for (Eigen::Index i = 0; i < c.rows(); ++i) prob.add_row(detail::first_column_row(c.row(i).transpose()), b(i));
  prob.meta = "binary-feasibility";
  return prob;
}

struct KnapsackInstance {
  Vector values;
  Vector weights;
  /// Lower bound on total value.
  double min_value = 0.0;
  /// Upper bound on total weight.
  double max_weight = 0.0;

  void validate() const {
    if (values.size() != weights.size()) throw std::invalid_argument("KnapsackInstance: length mismatch");
    if (values.size() < 1) throw std::invalid_argument("KnapsackInstance: empty instance");
    if (!values.allFinite() || !weights.allFinite() || !std::isfinite(min_value) || !std::isfinite(max_weight)) {
      throw std::invalid_argument("KnapsackInstance: non-finite data");
    }
  }
};

inline LmeProblem encode_knapsack(const KnapsackInstance& k) {
  k.validate();
  LmeProblem prob = detail::binary_skeleton(static_cast<int>(k.values.size()));
  prob.add_row(detail::first_column_row(k.values), k.min_value, Sense::Geq);
  prob.add_row(detail::first_column_row(k.weights), k.max_weight, Sense::Leq);
  prob.meta = "knapsack";
  return prob;
}

struct KnapsackDecode {
  std::vector<int> chosen;
  double value = 0.0;
  double weight = 0.0;
  /// Rounded subset meets both bounds on exact recomputation.
  bool verified = false;
  std::string message;
};

inline KnapsackDecode decode_knapsack(const KnapsackInstance& k, const Eigen::MatrixXd& x) {
  k.validate();
  if (x.rows() != k.values.size() + 1) throw std::invalid_argument("decode_knapsack: matrix order mismatch");
  KnapsackDecode out;
  out.chosen = round_first_column(x);
  for (size_t i = 0; i < out.chosen.size(); ++i) {
    if (out.chosen[i]) {
      out.value += k.values(static_cast<Eigen::Index>(i));
      out.weight += k.weights(static_cast<Eigen::Index>(i));
    }
  }
  const bool v_ok = out.value >= k.min_value;
  const bool w_ok = out.weight <= k.max_weight;
  out.verified = v_ok && w_ok;
  if (out.verified) {
    out.message = "subset verified";
  } else if (!v_ok && !w_ok) {
    out.message = "value below bound and weight above bound";
  } else {
    out.message = v_ok ? "weight above bound" : "value below bound";
  }
  return out;
}

struct SubsetSumInstance {
  std::vector<long long> s;
  long long target = 0;

  void validate() const {
    if (s.empty()) throw std::invalid_argument("SubsetSumInstance: empty instance");
  }
};

inline LmeProblem encode_subset_sum(const SubsetSumInstance& ss) {
  ss.validate();
  Vector c(static_cast<Eigen::Index>(ss.s.size()));
  for (size_t i = 0; i < ss.s.size(); ++i) c(static_cast<Eigen::Index>(i)) = static_cast<double>(ss.s[i]);
  LmeProblem prob = detail::binary_skeleton(static_cast<int>(c.size()));
  prob.add_row(detail::first_column_row(c), static_cast<double>(ss.target));
  prob.meta = "subset-sum";
  return prob;
}

struct SubsetSumDecode {
  std::vector<int> chosen;
  long long sum = 0;
  bool verified = false;
  std::string message;
};

inline SubsetSumDecode decode_subset_sum(const SubsetSumInstance& ss, const Eigen::MatrixXd& x) {
  ss.validate();
  if (x.rows() != static_cast<Eigen::Index>(ss.s.size()) + 1) {
    throw std::invalid_argument("decode_subset_sum: matrix order mismatch");
  }
  SubsetSumDecode out;
  out.chosen = round_first_column(x);
  for (size_t i = 0; i < out.chosen.size(); ++i) {
    if (out.chosen[i]) out.sum += ss.s[i];
  }
  out.verified = out.sum == ss.target;
  out.message = out.verified ? "subset verified" : "rounded subset misses the target";
  return out;
}

// ---------------------------------------------------------------------------
// Unit-modulus systems: find theta with A e^{j theta} = b.

struct UnitModulusInstance {
  Eigen::MatrixXd a;
  CVector b;
  /// Phases used to plant b, when known.
  std::optional<Vector> planted_theta;

  void validate() const {
    if (a.rows() != b.size()) throw std::invalid_argument("UnitModulusInstance: A and b disagree");
    if (a.cols() < 1) throw std::invalid_argument("UnitModulusInstance: empty instance");
    if (!a.allFinite() || !b.allFinite()) throw std::invalid_argument("UnitModulusInstance: non-finite data");
  }

  bool real_rhs() const { return b.imag().cwiseAbs().maxCoeff() == 0.0; }
};

/// Unknown H = [1; x][1; x]^H of order N+1 with diag(H) = 1 and
/// A H(2:N+1, 1) = b, realified to order 2(N+1) with target rank 2.
inline LmeProblem encode_unit_modulus(const UnitModulusInstance& um) {
  um.validate();
  const int n = static_cast<int>(um.a.cols()) + 1;
  std::vector<ComplexRow> rows;
  for (int i = 0; i < n; ++i) rows.push_back(entry_row(n, i, i, 1.0));
  for (Eigen::Index i = 0; i < um.a.rows(); ++i) {
    ComplexRow r;
    r.coeff = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < um.a.cols(); ++k) r.coeff(k + 1, 0) = um.a(i, k);
    r.rhs = um.b(i);
    rows.push_back(std::move(r));
  }
  LmeProblem prob = realified_problem(rows, n);
  prob.meta = std::string("unit-modulus b=") + (um.real_rhs() ? "real" : "complex");
  return prob;
}

inline CVector unit_vector(const Vector& theta) {
  CVector x(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) x(i) = std::polar(1.0, theta(i));
  return x;
}

struct UnitModulusDecode {
  /// Phases in [-pi, pi].
  Vector theta;
  double pairing_residual = 0.0;
  /// ||A e^{j theta} - b||_2.
  double equation_residual = 0.0;
  bool ok = false;
  std::string message;
};

inline UnitModulusDecode decode_unit_modulus(const UnitModulusInstance& um, const Eigen::MatrixXd& y) {
  um.validate();
  const auto n = um.a.cols();
  if (y.rows() != 2 * (n + 1)) throw std::invalid_argument("decode_unit_modulus: matrix order mismatch");
  const ComplexFactor f = complex_factor(y);
  UnitModulusDecode out;
  out.pairing_residual = f.pairing_residual;
  out.theta.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) out.theta(k) = std::arg(f.v(k + 1));
  out.equation_residual = (um.a.cast<Complex>() * unit_vector(out.theta) - um.b).norm();
  out.ok = f.ok;
  out.message = f.ok ? "decoded" : "top-2 eigenspace lacks pairing structure";
  return out;
}

// ---------------------------------------------------------------------------
// Fourier phase retrieval with an amplitude bound.

/// Unnormalized DFT: D(k, n) = exp(-j 2 pi k n / N).
inline CMatrix dft_matrix(int n) {
  CMatrix d(n, n);
  for (int k = 0; k < n; ++k) {
    for (int t = 0; t < n; ++t) {
      const long long kt = (static_cast<long long>(k) * t) % n;
      d(k, t) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(kt) / n);
    }
  }
  return d;
}

struct PhaseRetrievalInstance {
  /// Magnitude-squared spectrum |D x|^2.
  Vector z;
  /// Upper bound on |x_i|^2.
  double amp_bound = 0.0;
  std::optional<CVector> planted;

  int size() const { return static_cast<int>(z.size()); }

  void validate() const {
    if (z.size() < 1) throw std::invalid_argument("PhaseRetrievalInstance: empty spectrum");
    if (!z.allFinite() || (z.array() < 0.0).any()) {
      throw std::invalid_argument("PhaseRetrievalInstance: spectrum must be finite and nonnegative");
    }
    if (!(amp_bound >= 0.0)) throw std::invalid_argument("PhaseRetrievalInstance: amp_bound must be nonnegative");
  }
};

/// Unknown H = [1; x][1; x]^H of order N+1 with H(1,1) = 1,
/// diag(D H(2:,2:) D^H) = z and diag(H(2:,2:)) <= amp_bound, realified.
inline LmeProblem encode_phase_retrieval(const PhaseRetrievalInstance& pr) {
  pr.validate();
  const int len = pr.size();
  const int n = len + 1;
  const CMatrix d = dft_matrix(len);
  std::vector<ComplexRow> rows;
  rows.push_back(entry_row(n, 0, 0, 1.0));
  for (int k = 0; k < len; ++k) {
    ComplexRow r;
    r.coeff = CMatrix::Zero(n, n);
    // (D H D^H)_{kk} = sum_{a,b} D(k,a) conj(D(k,b)) H(a,b).
    for (int b = 0; b < len; ++b) {
      for (int a = 0; a < len; ++a) r.coeff(a + 1, b + 1) = d(k, a) * std::conj(d(k, b));
    }
    r.rhs = pr.z(k);
    rows.push_back(std::move(r));
  }
  for (int a = 0; a < len; ++a) rows.push_back(entry_row(n, a + 1, a + 1, pr.amp_bound, Sense::Leq));
  LmeProblem prob = realified_problem(rows, n);
  prob.meta = "phase-retrieval dft=unnormalized";
  return prob;
}

struct PhaseRetrievalDecode {
  CVector x;
  double pairing_residual = 0.0;
  /// max_k | |D x|_k^2 - z_k |.
  double magnitude_residual = 0.0;
  /// max(0, max_i |x_i|^2 - amp_bound).
  double amplitude_violation = 0.0;
  bool ok = false;
  std::string message;
};

inline PhaseRetrievalDecode decode_phase_retrieval(const PhaseRetrievalInstance& pr, const Eigen::MatrixXd& y) {
  pr.validate();
  const int len = pr.size();
  if (y.rows() != 2 * (len + 1)) throw std::invalid_argument("decode_phase_retrieval: matrix order mismatch");
  const ComplexFactor f = complex_factor(y);
  PhaseRetrievalDecode out;
  out.pairing_residual = f.pairing_residual;
  out.x = rotate_first_phase(f.v.tail(len));
  const CVector spectrum = dft_matrix(len) * out.x;
  out.magnitude_residual = (spectrum.cwiseAbs2() - pr.z).cwiseAbs().maxCoeff();
  out.amplitude_violation = std::max(0.0, out.x.cwiseAbs2().maxCoeff() - pr.amp_bound);
  out.ok = f.ok;
  out.message = f.ok ? "decoded" : "top-2 eigenspace lacks pairing structure";
  return out;
}

// ---------------------------------------------------------------------------
// Linear complementarity: w = M z + q, w, z >= 0, w^T z = 0.

struct LcpInstance {
  Eigen::MatrixXd m;
  Vector q;

  int size() const { return static_cast<int>(q.size()); }

  void validate() const {
    if (m.rows() != m.cols() || m.rows() != q.size()) throw std::invalid_argument("LcpInstance: shape mismatch");
    if (q.size() < 1) throw std::invalid_argument("LcpInstance: empty instance");
    if (!m.allFinite() || !q.allFinite()) throw std::invalid_argument("LcpInstance: non-finite data");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
      throw std::invalid_argument("LcpInstance: M must be symmetric");
    }
  }
};

/// Unknown [1; w; z][1; w; z]^T of order 2N+1 with
/// sum_i X(1+i, 1+N+i) = 0, w = M z + q on the first column, and w, z >= 0
/// on the first column.
inline LmeProblem encode_lcp(const LcpInstance& l) {
  l.validate();
  const int n = l.size();
  const int dim = 2 * n + 1;
  LmeProblem prob = LmeProblem::psd(dim, 1);
  prob.add_row(detail::entry(dim, 0, 0), 1.0);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < n; ++i) comp(1 + i, 1 + n + i) = 1.0;
  prob.add_row(comp, 0.0);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd e = detail::entry(dim, 1 + i, 0);
    for (int j = 0; j < n; ++j) e(1 + n + j, 0) -= l.m(i, j);
    prob.add_row(e, l.q(i));
  }
  for (int i = 1; i < dim; ++i) prob.add_row(detail::entry(dim, i, 0), 0.0, Sense::Geq);
  prob.meta = "lcp";
  return prob;
}

inline SymMatrix lift_lcp(const Vector& w, const Vector& z) {
  Vector v(w.size() + z.size() + 1);
  v << 1.0, w, z;
  return SymMatrix(v * v.transpose());
}

struct LcpDecode {
  Vector w;
  Vector z;
  /// w^T z.
  double complementarity = 0.0;
  /// ||w - M z - q||_2.
  double equation_residual = 0.0;
  /// max(0, -min entry of w and z).
  double negativity = 0.0;
};

inline LcpDecode decode_lcp(const LcpInstance& l, const Eigen::MatrixXd& x) {
  l.validate();
  const int n = l.size();
  if (x.rows() != 2 * n + 1) throw std::invalid_argument("decode_lcp: matrix order mismatch");
  LcpDecode out;
  out.w = x.col(0).segment(1, n);
  out.z = x.col(0).segment(1 + n, n);
  out.complementarity = out.w.dot(out.z);
  out.equation_residual = (out.w - l.m * out.z - l.q).norm();
  out.negativity = std::max(0.0, -std::min(out.w.minCoeff(), out.z.minCoeff()));
  return out;
}

// ---------------------------------------------------------------------------
// Seeded generators

/// Integer values and weights in [1, 20]; the bounds are the totals of a
/// random planted subset, so the instance is feasible.
inline KnapsackInstance random_knapsack(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_knapsack: n must be positive");
  Rng rng(seed);
  KnapsackInstance k;
  k.values.resize(n);
  k.weights.resize(n);
  for (int i = 0; i < n; ++i) k.values(i) = static_cast<double>(rng.uniform_int(1, 20));
  for (int i = 0; i < n; ++i) k.weights(i) = static_cast<double>(rng.uniform_int(1, 20));
  for (int i = 0; i < n; ++i) {
    if (rng.uniform() < 0.5) {
      k.min_value += k.values(i);
      k.max_weight += k.weights(i);
    }
  }
  return k;
}

/// Integers in [1, 50]; the target is the sum of a random planted subset.
inline SubsetSumInstance random_subset_sum(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_subset_sum: n must be positive");
  Rng rng(seed);
  SubsetSumInstance ss;
  for (int i = 0; i < n; ++i) ss.s.push_back(rng.uniform_int(1, 50));
  for (int i = 0; i < n; ++i) {
    if (rng.uniform() < 0.5) ss.target += ss.s[static_cast<size_t>(i)];
  }
  return ss;
}

/// Gaussian A (m x n), phases uniform on [-pi, pi), b = A e^{j theta}.
inline UnitModulusInstance random_unit_modulus(int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("random_unit_modulus: dimensions must be positive");
  Rng rng(seed);
  UnitModulusInstance um;
  um.a = rng.normal_matrix(m, n);
  Vector theta(n);
  for (int i = 0; i < n; ++i) theta(i) = rng.uniform(-std::numbers::pi, std::numbers::pi);
  um.b = um.a.cast<Complex>() * unit_vector(theta);
  um.planted_theta = theta;
  return um;
}

/// Complex signal with magnitudes in [0.2, 1] and uniform phases;
/// z = |D x|^2 and amp_bound = max |x_i|^2.
inline PhaseRetrievalInstance random_phase_retrieval(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_phase_retrieval: n must be positive");
  Rng rng(seed);
  CVector x(n);
  for (int i = 0; i < n; ++i) {
    const double mag = rng.uniform(0.2, 1.0);
    x(i) = std::polar(mag, rng.uniform(-std::numbers::pi, std::numbers::pi));
  }
  PhaseRetrievalInstance pr;
  pr.z = (dft_matrix(n) * x).cwiseAbs2();
  pr.amp_bound = x.cwiseAbs2().maxCoeff();
  pr.planted = x;
  return pr;
}

/// Symmetric M = (G + G^T) / 2 and q with standard normal entries.
inline LcpInstance random_lcp(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_lcp: n must be positive");
  Rng rng(seed);
  LcpInstance l;
  const Eigen::MatrixXd g = rng.normal_matrix(n, n);
  l.m = 0.5 * (g + g.transpose());
  l.q = rng.normal_vector(n);
  return l;
}

}  // namespace lowrank::apps
