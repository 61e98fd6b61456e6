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
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinpulse/su2_geometry.hpp"

namespace spinpulse {

namespace detail {

inline double factorial(int n) {
  static const auto table = [] {
    std::array<double, 25> t{};
    t[0] = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  if (n < 0 || n >= static_cast<int>(table.size())) {
    throw std::domain_error("factorial: argument out of supported range");
  }
  return table[static_cast<std::size_t>(n)];
}

inline bool is_half_integer(double x) {
  return std::abs(2.0 * x - std::round(2.0 * x)) < 1e-9;
}

inline int to_twice(double x, const char* what) {
  if (!is_half_integer(x)) {
    throw std::domain_error(std::string(what) + ": expected a half-integer, got " + std::to_string(x));
  }
  return static_cast<int>(std::round(2.0 * x));
}

/// Clebsch-Gordan coefficient with doubled quantum numbers (tj = 2j, ...).
/// Racah's closed form in the Condon-Shortley convention.
inline double cg_twice(int tj1, int tm1, int tj2, int tm2, int tJ, int tM) {
  if (tm1 + tm2 != tM) return 0.0;
  if (tJ < std::abs(tj1 - tj2) || tJ > tj1 + tj2) return 0.0;
  if ((tj1 + tj2 + tJ) % 2 != 0) return 0.0;
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tM) > tJ) return 0.0;
  if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0) return 0.0;

  const auto h = [](int x) { return x / 2; };
  double pref = (tJ + 1) * factorial(h(tj1 + tj2 - tJ)) * factorial(h(tj1 - tj2 + tJ)) *
                factorial(h(-tj1 + tj2 + tJ)) / factorial(h(tj1 + tj2 + tJ) + 1);
  pref *= factorial(h(tJ + tM)) * factorial(h(tJ - tM)) * factorial(h(tj1 + tm1)) *
          factorial(h(tj1 - tm1)) * factorial(h(tj2 + tm2)) * factorial(h(tj2 - tm2));
  const int kmin = std::max({0, (tj2 - tJ - tm1) / 2, (tj1 + tm2 - tJ) / 2});
  const int kmax = std::min({h(tj1 + tj2 - tJ), h(tj1 - tm1), h(tj2 + tm2)});
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double denom = factorial(k) * factorial(h(tj1 + tj2 - tJ) - k) *
                         factorial(h(tj1 - tm1) - k) * factorial(h(tj2 + tm2) - k) *
                         factorial(h(tJ - tj2 + tm1) + k) * factorial(h(tJ - tj1 - tm2) + k);
    sum += ((k % 2 == 0) ? 1.0 : -1.0) / denom;
  }
  return std::sqrt(pref) * sum;
}

}  // namespace detail

/// <j1 m1; j2 m2 | J M> in the Condon-Shortley convention.  Zero when
/// M != m1 + m2 or the triangle rule fails; throws on non-half-integer input.
inline double cg_coefficient(double j1, double m1, double j2, double m2, double J, double M) {
  using detail::to_twice;
  return detail::cg_twice(to_twice(j1, "j1"), to_twice(m1, "m1"), to_twice(j2, "j2"),
                          to_twice(m2, "m2"), to_twice(J, "J"), to_twice(M, "M"));
}

/// Binary spin-coupling tree over spin-1/2 sites.  Each internal node carries a
/// total-spin label; a label may be left free for later enumeration.  The tree
/// also records the magnetic quantum number M used when it is realized as a
/// state vector (defaults to the maximal M of its root spin).
class CouplingTree {
 public:
  struct Node {
    int site = -1;  // >= 0 for leaves
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    int twice_j = kFreeLabel;

    bool is_leaf() const { return site >= 0; }
  };

  static constexpr int kFreeLabel = -1;
  static constexpr int kUnsetM = std::numeric_limits<int>::min();

  static CouplingTree leaf(int site) {
    if (site < 0) throw std::invalid_argument("CouplingTree::leaf: negative site");
    auto n = std::make_shared<Node>();
    n->site = site;
    n->twice_j = 1;
    return CouplingTree(std::move(n));
  }

  static CouplingTree couple(const CouplingTree& left, const CouplingTree& right, double j) {
    const int tj = detail::to_twice(j, "coupled spin");
    const int tl = left.root_->twice_j;
    const int tr = right.root_->twice_j;
    if (tl != kFreeLabel && tr != kFreeLabel) {
      if (tj < std::abs(tl - tr) || tj > tl + tr || (tl + tr + tj) % 2 != 0) {
        throw std::invalid_argument("CouplingTree::couple: triangle rule violated");
      }
    }
    return make_internal(left, right, tj);
  }

  static CouplingTree couple_free(const CouplingTree& left, const CouplingTree& right) {
    return make_internal(left, right, kFreeLabel);
  }

  /// Same tree realized at magnetic quantum number m.
  CouplingTree with_m(double m) const {
    CouplingTree t = *this;
    t.twice_m_ = detail::to_twice(m, "M");
    if (root_->twice_j != kFreeLabel) {
      if (std::abs(t.twice_m_) > root_->twice_j || (t.twice_m_ + root_->twice_j) % 2 != 0) {
        throw std::invalid_argument("CouplingTree::with_m: |M| <= S and M = S (mod 1) required");
      }
    }
    return t;
  }

  double spin() const {
    if (root_->twice_j == kFreeLabel) throw std::logic_error("CouplingTree::spin: free root label");
    return root_->twice_j / 2.0;
  }

  int twice_spin() const { return root_->twice_j; }

  /// M in use; maximal M of the root spin unless overridden by with_m().
  double m() const { return twice_m() / 2.0; }

  int twice_m() const {
    if (twice_m_ != kUnsetM) return twice_m_;
    if (root_->twice_j == kFreeLabel) throw std::logic_error("CouplingTree::m: free root label");
    return root_->twice_j;
  }

  bool has_explicit_m() const { return twice_m_ != kUnsetM; }

  const std::shared_ptr<const Node>& root() const { return root_; }

  /// Number of leaf sites; leaves must form a contiguous range {0..n-1}.
  int site_count() const {
    std::vector<int> sites;
    collect_sites(root_.get(), sites);
    std::sort(sites.begin(), sites.end());
    for (std::size_t k = 0; k < sites.size(); ++k) {
      if (sites[k] != static_cast<int>(k)) {
        throw std::invalid_argument("CouplingTree: leaf sites must form a contiguous range 0..n-1");
      }
    }
    return static_cast<int>(sites.size());
  }

  bool fully_labeled() const { return fully_labeled(root_.get()); }

 private:
  explicit CouplingTree(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  static CouplingTree make_internal(const CouplingTree& left, const CouplingTree& right, int tj) {
    auto n = std::make_shared<Node>();
    n->left = left.root_;
    n->right = right.root_;
    n->twice_j = tj;
    return CouplingTree(std::move(n));
  }

  static void collect_sites(const Node* n, std::vector<int>& out) {
    if (n->is_leaf()) {
      out.push_back(n->site);
      return;
    }
    collect_sites(n->left.get(), out);
    collect_sites(n->right.get(), out);
  }

  static bool fully_labeled(const Node* n) {
    if (n->is_leaf()) return true;
    return n->twice_j != kFreeLabel && fully_labeled(n->left.get()) && fully_labeled(n->right.get());
  }

  std::shared_ptr<const Node> root_;
  int twice_m_ = kUnsetM;
};

namespace detail {

inline CouplingTree rebuild_tree(const std::shared_ptr<const CouplingTree::Node>& n) {
  if (n->is_leaf()) return CouplingTree::leaf(n->site);
  return CouplingTree::couple(rebuild_tree(n->left), rebuild_tree(n->right), n->twice_j / 2.0);
}

struct SubtreeStates {
  int twice_j = 0;
  // component for m = j - k at index k (k = 0 .. 2j)
  std::vector<Eigen::VectorXd> by_m;

  const Eigen::VectorXd* component(int twice_m) const {
    const int k = (twice_j - twice_m) / 2;
    if (twice_m > twice_j || twice_m < -twice_j || (twice_j - twice_m) % 2 != 0) return nullptr;
    return &by_m[static_cast<std::size_t>(k)];
  }
};

inline SubtreeStates couple_subtree(const CouplingTree::Node* node, int n_sites) {
  const std::int64_t dim = std::int64_t{1} << n_sites;
  if (node->is_leaf()) {
    SubtreeStates s;
    s.twice_j = 1;
    Eigen::VectorXd up = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd dn = Eigen::VectorXd::Zero(dim);
    up[0] = 1.0;  // bit clear = m = +1/2; spectator sites sit at bit 0
    dn[std::int64_t{1} << node->site] = 1.0;
    s.by_m = {up, dn};
    return s;
  }
  if (node->twice_j == CouplingTree::kFreeLabel) {
    throw std::invalid_argument("build_state: tree has free labels");
  }
  const SubtreeStates ls = couple_subtree(node->left.get(), n_sites);
  const SubtreeStates rs = couple_subtree(node->right.get(), n_sites);
  const int tJ = node->twice_j;
  if (tJ < std::abs(ls.twice_j - rs.twice_j) || tJ > ls.twice_j + rs.twice_j ||
      (ls.twice_j + rs.twice_j + tJ) % 2 != 0) {
    throw std::invalid_argument("build_state: triangle rule violated");
  }
  SubtreeStates s;
  s.twice_j = tJ;
  for (int tM = tJ; tM >= -tJ; tM -= 2) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    for (int tml = -ls.twice_j; tml <= ls.twice_j; tml += 2) {
      const int tmr = tM - tml;
      const Eigen::VectorXd* lv = ls.component(tml);
      const Eigen::VectorXd* rv = rs.component(tmr);
      if (lv == nullptr || rv == nullptr) continue;
      const double c = cg_twice(ls.twice_j, tml, rs.twice_j, tmr, tJ, tM);
      if (c == 0.0) continue;
      // disjoint site supports: combine configurations with bitwise OR
      for (std::int64_t il = 0; il < dim; ++il) {
        const double al = (*lv)[il];
        if (al == 0.0) continue;
        for (std::int64_t ir = 0; ir < dim; ++ir) {
          const double ar = (*rv)[ir];
          if (ar == 0.0) continue;
          v[il | ir] += c * al * ar;
        }
      }
    }
    s.by_m.push_back(std::move(v));
  }
  return s;
}

}  // namespace detail

/// Realizes a fully labeled coupling tree as a normalized vector in the
/// 2^n product space at the tree's magnetic quantum number.
inline Eigen::VectorXd build_state(const CouplingTree& tree) {
  const int n = tree.site_count();
  if (n > 16) throw std::invalid_argument("build_state: too many sites");
  const detail::SubtreeStates s = detail::couple_subtree(tree.root().get(), n);
  const int tM = tree.twice_m();
  if (std::abs(tM) > s.twice_j || (s.twice_j - tM) % 2 != 0) {
    throw std::invalid_argument("build_state: invalid M for root spin");
  }
  const Eigen::VectorXd* v = s.component(tM);
  return *v;
}

/// All assignments of the free labels of `shape` consistent with the triangle
/// rule, ordered by ascending labels (left subtree varying slowest, node label
/// fastest).  The root label must be fixed.
inline std::vector<CouplingTree> enumerate_labelings(const CouplingTree& shape) {
  using Node = CouplingTree::Node;
  if (shape.root()->twice_j == CouplingTree::kFreeLabel) {
    throw std::invalid_argument("enumerate_labelings: root label must be fixed");
  }

  struct Rec {
    static std::vector<std::shared_ptr<const Node>> expand(const std::shared_ptr<const Node>& n) {
      if (n->is_leaf()) return {n};
      std::vector<std::shared_ptr<const Node>> out;
      for (const auto& l : expand(n->left)) {
        for (const auto& r : expand(n->right)) {
          const int tl = l->twice_j;
          const int tr = r->twice_j;
          std::vector<int> labels;
          if (n->twice_j != CouplingTree::kFreeLabel) {
            labels.push_back(n->twice_j);
          } else {
            for (int tj = std::abs(tl - tr); tj <= tl + tr; tj += 2) labels.push_back(tj);
          }
          for (int tj : labels) {
            if (tj < std::abs(tl - tr) || tj > tl + tr || (tl + tr + tj) % 2 != 0) continue;
            auto node = std::make_shared<Node>();
            node->left = l;
            node->right = r;
            node->twice_j = tj;
            out.push_back(std::move(node));
          }
        }
      }
      return out;
    }
  };

  std::vector<CouplingTree> result;
  for (const auto& n : Rec::expand(shape.root())) {
    CouplingTree t = detail::rebuild_tree(n);
    if (shape.has_explicit_m()) t = t.with_m(shape.m());
    result.push_back(std::move(t));
  }
  return result;
}

/// Column matrix of build_state outputs (complex-typed for unitary algebra).
inline Eigen::MatrixXcd basis_matrix(const std::vector<CouplingTree>& trees) {
  if (trees.empty()) throw std::invalid_argument("basis_matrix: empty tree list");
  const Eigen::VectorXd first = build_state(trees.front());
  Eigen::MatrixXcd b(first.size(), static_cast<Eigen::Index>(trees.size()));
  b.col(0) = first.cast<std::complex<double>>();
  for (std::size_t k = 1; k < trees.size(); ++k) {
    const Eigen::VectorXd v = build_state(trees[k]);
    if (v.size() != first.size()) throw std::invalid_argument("basis_matrix: mixed site counts");
    b.col(static_cast<Eigen::Index>(k)) = v.cast<std::complex<double>>();
  }
  return b;
}

/// Orthogonal change-of-basis matrix between two coupling-tree shapes over the
/// same leaves.  Entry (i, j) = <shape_b labeling j | shape_a labeling i>.
struct RecouplingMatrix {
  Eigen::MatrixXd coefficients;
  std::vector<CouplingTree> row_basis;  // labelings of shape_a
  std::vector<CouplingTree> col_basis;  // labelings of shape_b
};

inline RecouplingMatrix recoupling_matrix(const CouplingTree& shape_a, const CouplingTree& shape_b) {
  if (shape_a.root()->twice_j == CouplingTree::kFreeLabel ||
      shape_b.root()->twice_j == CouplingTree::kFreeLabel ||
      shape_a.root()->twice_j != shape_b.root()->twice_j) {
    throw std::invalid_argument("recoupling_matrix: shapes must share a fixed root spin");
  }
  if (shape_a.site_count() != shape_b.site_count()) {
    throw std::invalid_argument("recoupling_matrix: shapes must cover the same leaves");
  }

  RecouplingMatrix out;
  out.row_basis = enumerate_labelings(shape_a);
  out.col_basis = enumerate_labelings(shape_b);
  if (out.row_basis.size() != out.col_basis.size()) {
    throw std::invalid_argument("recoupling_matrix: incompatible shapes");
  }

  const int tS = shape_a.root()->twice_j;
  const auto overlaps_at = [&](int tM) {
    const double m = tM / 2.0;
    Eigen::MatrixXd f(static_cast<Eigen::Index>(out.row_basis.size()),
                      static_cast<Eigen::Index>(out.col_basis.size()));
    for (std::size_t i = 0; i < out.row_basis.size(); ++i) {
      const Eigen::VectorXd a = build_state(out.row_basis[i].with_m(m));
      for (std::size_t j = 0; j < out.col_basis.size(); ++j) {
        const Eigen::VectorXd b = build_state(out.col_basis[j].with_m(m));
        f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = b.dot(a);
      }
    }
    return f;
  };

  out.coefficients = overlaps_at(tS);
  if (tS >= 2) {
    // rotational invariance: the overlaps may not depend on M
    const Eigen::MatrixXd other = overlaps_at(tS - 2);
    if ((out.coefficients - other).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::logic_error("recoupling_matrix: overlaps depend on M");
    }
  }
  const Eigen::MatrixXd gram = out.coefficients.transpose() * out.coefficients;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
  if ((gram - id).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::logic_error("recoupling_matrix: result is not orthogonal");
  }
  return out;
}

/// Orthogonal projector sum |psi><psi| over an orthonormal tree family.
inline Eigen::MatrixXcd subspace_projector(const std::vector<CouplingTree>& trees) {
  const Eigen::MatrixXcd b = basis_matrix(trees);
  const Eigen::MatrixXcd gram = b.adjoint() * b;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(gram.rows(), gram.cols());
  if ((gram - id).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("subspace_projector: trees are not orthonormal");
  }
  return b * b.adjoint();
}

}  // namespace spinpulse
