// Copyright 2026 The spinpulse developers
//
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

#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spinpulse/angular_momentum.hpp"
#include "spinpulse/pulse.hpp"

namespace spinpulse {

// Chain layout for two encoded qubits on six sites: the left qubit is site 0
// plus the pair (1,2) with spin label a, the right qubit is the pair (3,4)
// with label b plus site 5.  Two-qubit sequences pulse sites 1..5 only.
inline constexpr int kChainSites = 6;
inline constexpr int kLeftPairLo = 1;   // pair (1,2) carries a
inline constexpr int kRightPairLo = 3;  // pair (3,4) carries b

/// S_i . S_j on the 2^n product space.
inline Eigen::MatrixXcd spin_dot_matrix(int n_sites, int i, int j) {
  const std::int64_t dim = std::int64_t{1} << n_sites;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    const int bi = static_cast<int>((idx >> i) & 1);
    const int bj = static_cast<int>((idx >> j) & 1);
    if (bi == bj) {
      h(idx, idx) += 0.25;
    } else {
      const std::int64_t other = idx ^ (std::int64_t{1} << i) ^ (std::int64_t{1} << j);
      h(idx, idx) += -0.25;
      h(other, idx) += 0.5;
    }
  }
  return h;
}

/// Total-spin-squared operator of the sites [first, last].
inline Eigen::MatrixXcd total_spin_squared(int n_sites, int first, int last) {
  const std::int64_t dim = std::int64_t{1} << n_sites;
  const int count = last - first + 1;
  Eigen::MatrixXcd s2 = 0.75 * count * Eigen::MatrixXcd::Identity(dim, dim);
  for (int i = first; i <= last; ++i) {
    for (int j = i + 1; j <= last; ++j) {
      s2 += 2.0 * spin_dot_matrix(n_sites, i, j);
    }
  }
  return s2;
}

/// Total S_z (diagonal) of the full chain.
inline Eigen::MatrixXcd total_sz(int n_sites) {
  const std::int64_t dim = std::int64_t{1} << n_sites;
  Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    int down = 0;
    for (int s = 0; s < n_sites; ++s) down += static_cast<int>((idx >> s) & 1);
    sz(idx, idx) = 0.5 * (n_sites - 2 * down);
  }
  return sz;
}

/// Largest-entry deviation between A and B after removing one global phase
/// from each (normalized by the phase of its largest-magnitude entry).
inline double max_abs_diff_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const auto dephased = [](const Eigen::MatrixXcd& m) {
    Eigen::Index r = 0, c = 0;
    m.cwiseAbs().maxCoeff(&r, &c);
    const std::complex<double> v = m(r, c);
    if (std::abs(v) == 0.0) return m;
    return Eigen::MatrixXcd(m * (std::abs(v) / v));
  };
  // align b's reference entry onto a's instead of each onto its own modulus,
  // so nearly-tied maxima cannot pick different pivots
  Eigen::Index r = 0, c = 0;
  a.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(a(r, c)) == 0.0 || std::abs(b(r, c)) == 0.0) {
    return (dephased(a) - dephased(b)).cwiseAbs().maxCoeff();
  }
  const std::complex<double> phase = (b(r, c) / a(r, c));
  const std::complex<double> unit = phase / std::abs(phase);
  return (a - b / unit).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Canonical bases

/// Three-site basis ((xy)_a z)_c in the order ac = {0 1/2, 1 1/2, 1 3/2}.
inline std::vector<CouplingTree> three_spin_ac_basis() {
  const auto t = [](double a, double c) {
    return CouplingTree::couple(
        CouplingTree::couple(CouplingTree::leaf(0), CouplingTree::leaf(1), a),
        CouplingTree::leaf(2), c);
  };
  return {t(0.0, 0.5), t(1.0, 0.5), t(1.0, 1.5)};
}

/// Four-site basis ((01)_1 (23)_b)_d with a = 1 fixed, in the order
/// bd = {10 | 01, 11 | 12}.
inline std::vector<CouplingTree> four_spin_bd_basis() {
  const auto t = [](double b, double d) {
    return CouplingTree::couple(
        CouplingTree::couple(CouplingTree::leaf(0), CouplingTree::leaf(1), 1.0),
        CouplingTree::couple(CouplingTree::leaf(2), CouplingTree::leaf(3), b), d);
  };
  return {t(1.0, 0.0), t(0.0, 1.0), t(1.0, 1.0), t(1.0, 2.0)};
}

/// Four-site basis ((01)_a (23)_b)_d in the order abd = {000, 110 | 011, 101,
/// 111 | 112}, grouped by total spin d.
inline std::vector<CouplingTree> four_spin_abd_basis() {
  const auto t = [](double a, double b, double d) {
    return CouplingTree::couple(
        CouplingTree::couple(CouplingTree::leaf(0), CouplingTree::leaf(1), a),
        CouplingTree::couple(CouplingTree::leaf(2), CouplingTree::leaf(3), b), d);
  };
  return {t(0, 0, 0), t(1, 1, 0), t(0, 1, 1), t(1, 0, 1), t(1, 1, 1), t(1, 1, 2)};
}

/// Five-site basis ((01)_1 ((23)_1 4)_e)_f with a = b = 1, in the order
/// ef = {1/2 1/2, 3/2 1/2 | 1/2 3/2, 3/2 3/2}.
inline std::vector<CouplingTree> five_spin_ef_basis() {
  const auto t = [](double e, double f) {
    return CouplingTree::couple(
        CouplingTree::couple(CouplingTree::leaf(0), CouplingTree::leaf(1), 1.0),
        CouplingTree::couple(
            CouplingTree::couple(CouplingTree::leaf(2), CouplingTree::leaf(3), 1.0),
            CouplingTree::leaf(4), e),
        f);
  };
  return {t(0.5, 0.5), t(1.5, 0.5), t(0.5, 1.5), t(1.5, 1.5)};
}

/// Encoded two-qubit basis on the six-site chain at total spin g and magnetic
/// number m: columns for ab = 00, 01, 10, 11 built from the trees
/// ((0 (12)_a)_{1/2} ((34)_b 5)_{1/2})_g.
struct EncodedBasis {
  int g;
  double m;
  std::vector<CouplingTree> trees;
  Eigen::MatrixXcd columns;  // 64 x 4
};

inline CouplingTree encoded_tree(double a, double b, double g) {
  const CouplingTree left = CouplingTree::couple(
      CouplingTree::leaf(0),
      CouplingTree::couple(CouplingTree::leaf(1), CouplingTree::leaf(2), a), 0.5);
  const CouplingTree right = CouplingTree::couple(
      CouplingTree::couple(CouplingTree::leaf(3), CouplingTree::leaf(4), b),
      CouplingTree::leaf(5), 0.5);
  return CouplingTree::couple(left, right, g);
}

inline EncodedBasis encoded_basis(int g, double m) {
  if (g != 0 && g != 1) throw std::invalid_argument("encoded_basis: g must be 0 or 1");
  EncodedBasis basis;
  basis.g = g;
  basis.m = m;
  for (const auto& [a, b] : std::array<std::pair<double, double>, 4>{
           {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}}}) {
    basis.trees.push_back(encoded_tree(a, b, static_cast<double>(g)).with_m(m));
  }
  basis.columns = basis_matrix(basis.trees);
  return basis;
}

/// Two-qubit basis supported on the total-spin-1/2 sector of sites 1..5:
/// (0 ((12)_a ((34)_b 5)_{1/2})_{1/2})_g.  The five-site subtree is the same
/// for g = 0 and g = 1, which makes the two sector representations of any
/// pulse sequence on sites 1..5 directly comparable.
inline Eigen::MatrixXcd f_half_two_qubit_basis(int g, double m) {
  if (g != 0 && g != 1) throw std::invalid_argument("f_half_two_qubit_basis: g must be 0 or 1");
  std::vector<CouplingTree> trees;
  for (const auto& [a, b] : std::array<std::pair<double, double>, 4>{
           {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}}}) {
    const CouplingTree five = CouplingTree::couple(
        CouplingTree::couple(CouplingTree::leaf(1), CouplingTree::leaf(2), a),
        CouplingTree::couple(
            CouplingTree::couple(CouplingTree::leaf(3), CouplingTree::leaf(4), b),
            CouplingTree::leaf(5), 0.5),
        0.5);
    trees.push_back(CouplingTree::couple(CouplingTree::leaf(0), five, static_cast<double>(g)).with_m(m));
  }
  return basis_matrix(trees);
}

// ---------------------------------------------------------------------------
// Gate extraction

/// Local invariants of a two-qubit gate in the magic basis.  Two gates are
/// locally equivalent iff their invariants agree; CNOT has (0, 1), the
/// identity (1, 3).
inline std::pair<std::complex<double>, double> makhlin_invariants(const Eigen::Matrix4cd& gate) {
  if (!is_unitary(gate, 1e-9)) {
    throw std::invalid_argument("makhlin_invariants: gate is not unitary within 1e-9");
  }
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix4cd magic;
  const std::complex<double> i1(0.0, 1.0);
  magic << s, 0, 0, i1 * s,
           0, i1 * s, s, 0,
           0, i1 * s, -s, 0,
           s, 0, 0, -i1 * s;
  const Eigen::Matrix4cd ub = magic.adjoint() * gate * magic;
  const Eigen::Matrix4cd m = ub.transpose() * ub;
  const std::complex<double> det = gate.determinant();
  const std::complex<double> trm = m.trace();
  const std::complex<double> g1 = trm * trm / (16.0 * det);
  const std::complex<double> g2 = (trm * trm - (m * m).trace()) / (4.0 * det);
  return {g1, g2.real()};
}

inline std::pair<std::complex<double>, double> makhlin_cnot() {
  return {std::complex<double>(0.0, 0.0), 1.0};
}

/// Encoded-gate analysis of a six-site unitary in one (g, m) sector.
struct GateReport {
  int g = 0;
  double m = 0.0;
  Eigen::Matrix4cd gate;                 // P U P in the encoded ab basis
  double leakage_norm = 0.0;             // largest singular value of (1-P) U P
  bool diagonal = false;                 // max off-diagonal below 1e-9
  std::array<double, 4> diagonal_phases{};  // arg of diagonal entries (when diagonal)
  double entangling_phase = 0.0;         // phi00 - phi01 - phi10 + phi11 mod 2pi
  std::optional<std::pair<std::complex<double>, double>> makhlin;  // set when gate is unitary
};

inline GateReport gate_report(const SquareUnitary& u, int g, double m) {
  if (u.rows() != 64 || u.cols() != 64) {
    throw std::invalid_argument("gate_report: expected a six-site (64x64) operator");
  }
  const Eigen::MatrixXcd s2 = total_spin_squared(kChainSites, 0, 5);
  const Eigen::MatrixXcd sz = total_sz(kChainSites);
  if ((u * s2 - s2 * u).cwiseAbs().maxCoeff() > 1e-10 ||
      (u * sz - sz * u).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("gate_report: non-conserving U");
  }

  const EncodedBasis basis = encoded_basis(g, m);
  GateReport report;
  report.g = g;
  report.m = m;
  const Eigen::MatrixXcd w = u * basis.columns;
  report.gate = (basis.columns.adjoint() * w).eval();
  const Eigen::MatrixXcd outside = w - basis.columns * (basis.columns.adjoint() * w);
  report.leakage_norm = outside.jacobiSvd().singularValues()(0);

  Eigen::Matrix4cd off = report.gate;
  off.diagonal().setZero();
  report.diagonal = off.cwiseAbs().maxCoeff() < 1e-9;
  if (report.diagonal) {
    for (int k = 0; k < 4; ++k) report.diagonal_phases[static_cast<std::size_t>(k)] = std::arg(report.gate(k, k));
    report.entangling_phase = wrap_angle(report.diagonal_phases[0] - report.diagonal_phases[1] -
                                         report.diagonal_phases[2] + report.diagonal_phases[3]);
  }
  if (is_unitary(report.gate, 1e-9)) {
    report.makhlin = makhlin_invariants(report.gate);
  }
  return report;
}

/// True when the g = 0 and g = 1 encoded gates of a sequence on sites 1..5
/// agree entrywise up to one global phase.
struct GIndependence {
  bool ok = false;
  double max_deviation = 0.0;
};

inline GIndependence g_independence_check(const PulseSequence& seq, double tol = 1e-9) {
  if (seq.n_sites() != kChainSites) {
    throw std::invalid_argument("g_independence_check: expected the six-site chain");
  }
  if (!seq.avoids_site(0)) {
    throw std::invalid_argument("g_independence_check: touches site 0");
  }
  const SquareUnitary u = compose(seq);
  const GateReport r0 = gate_report(u, 0, 0.0);
  const GateReport r1 = gate_report(u, 1, 1.0);
  GIndependence out;
  out.max_deviation = max_abs_diff_up_to_phase(r0.gate, r1.gate);
  out.ok = out.max_deviation <= tol;
  return out;
}

/// True when the g = 1 encoded gate is identical (not merely up to phase) at
/// every magnetic quantum number m = -1, 0, 1; g = 0 has only m = 0.
struct SzIndependence {
  bool ok = false;
  double max_deviation = 0.0;
};

inline SzIndependence sz_independence_check(const PulseSequence& seq, double tol = 1e-10) {
  const SquareUnitary u = compose(seq);
  const GateReport at_m1 = gate_report(u, 1, 1.0);
  SzIndependence out;
  for (const double m : {0.0, -1.0}) {
    const GateReport r = gate_report(u, 1, m);
    out.max_deviation = std::max(out.max_deviation,
                                 (r.gate - at_m1.gate).cwiseAbs().maxCoeff());
  }
  out.ok = out.max_deviation <= tol;
  return out;
}

/// Matrix elements <tree_i | U | tree_j> over an orthonormal tree basis that
/// spans a U-invariant subspace; throws "not invariant" otherwise.
inline Eigen::MatrixXcd sector_matrix(const SquareUnitary& u, const std::vector<CouplingTree>& basis) {
  const Eigen::MatrixXcd b = basis_matrix(basis);
  if (b.rows() != u.rows()) throw std::invalid_argument("sector_matrix: dimension mismatch");
  const Eigen::MatrixXcd gram = b.adjoint() * b;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(gram.rows(), gram.cols());
  if ((gram - id).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("sector_matrix: basis is not orthonormal");
  }
  const Eigen::MatrixXcd w = u * b;
  const Eigen::MatrixXcd residual = w - b * (b.adjoint() * w);
  if (residual.cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("sector_matrix: not invariant");
  }
  return b.adjoint() * w;
}

// ---------------------------------------------------------------------------
// Four-spin theorem ingredients

/// Traces of S_i . S_j + 3/4 over the total-spin-d sectors of the four central
/// chain sites (one magnetic slice per sector), plus the alternating sum
/// tr_0 - tr_1 + tr_2.  Sites are named in chain coordinates 1..4.
struct FourSpinTraces {
  double d0 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double alternating = 0.0;
};

inline FourSpinTraces four_spin_trace_check(int i, int j) {
  if (i < 1 || i > 4 || j < 1 || j > 4 || i == j) {
    throw std::invalid_argument("four_spin_trace_check: pair outside the central four sites");
  }
  // shift chain sites 1..4 onto a standalone four-site space 0..3
  Eigen::MatrixXcd h = spin_dot_matrix(4, i - 1, j - 1);
  h += 0.75 * Eigen::MatrixXcd::Identity(16, 16);

  FourSpinTraces out;
  double* slot[3] = {&out.d0, &out.d1, &out.d2};
  for (int d = 0; d <= 2; ++d) {
    CouplingTree shape = CouplingTree::couple(
        CouplingTree::couple_free(CouplingTree::leaf(0), CouplingTree::leaf(1)),
        CouplingTree::couple_free(CouplingTree::leaf(2), CouplingTree::leaf(3)),
        static_cast<double>(d));
    double tr = 0.0;
    for (const CouplingTree& t : enumerate_labelings(shape)) {
      const Eigen::VectorXd v = build_state(t);
      tr += (v.transpose() * h.real() * v).value();
    }
    *slot[d] = tr;
  }
  out.alternating = out.d0 - out.d1 + out.d2;
  return out;
}

}  // namespace spinpulse
