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
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spinpulse/su2_geometry.hpp"

namespace spinpulse {

using SquareUnitary = Eigen::MatrixXcd;

/// One nearest-neighbor exchange pulse: sites (i, j) coupled for duration t,
/// in units of the inverse coupling strength.
struct PulseSpec {
  int i;
  int j;
  double t;
};

/// Ordered list of exchange pulses on an n-site chain; index 0 acts first.
/// Durations lie in (0, 2*pi) and pairs are chain neighbors.
class PulseSequence {
 public:
  PulseSequence(int n_sites, std::vector<PulseSpec> pulses)
      : n_sites_(n_sites), pulses_(std::move(pulses)) {
    if (n_sites_ < 2) throw std::invalid_argument("PulseSequence: need at least two sites");
    for (std::size_t k = 0; k < pulses_.size(); ++k) {
      const PulseSpec& p = pulses_[k];
      if (p.i < 0 || p.i >= n_sites_ || p.j < 0 || p.j >= n_sites_) {
        throw std::invalid_argument("PulseSequence: pulse " + std::to_string(k) + " site out of range");
      }
      if (std::abs(p.i - p.j) != 1) {
        throw std::invalid_argument("PulseSequence: pulse " + std::to_string(k) + " is not nearest-neighbor");
      }
      if (!(p.t > 0.0 && p.t < kTwoPi)) {
        throw std::invalid_argument("PulseSequence: pulse " + std::to_string(k) + " duration outside (0, 2*pi)");
      }
    }
  }

  int n_sites() const { return n_sites_; }
  const std::vector<PulseSpec>& pulses() const { return pulses_; }
  std::size_t size() const { return pulses_.size(); }

  /// True when no pulse touches `site`.
  bool avoids_site(int site) const {
    for (const PulseSpec& p : pulses_) {
      if (p.i == site || p.j == site) return false;
    }
    return true;
  }

  PulseSequence appended(const std::vector<PulseSpec>& extra) const {
    std::vector<PulseSpec> all = pulses_;
    all.insert(all.end(), extra.begin(), extra.end());
    return PulseSequence(n_sites_, std::move(all));
  }

 private:
  int n_sites_;
  std::vector<PulseSpec> pulses_;
};

/// exp(-i t (S_i . S_j + 3/4)) on the 2^n product space: eigenphase 1 on the
/// pair singlet and e^{-it} on the pair triplet, identity elsewhere.
inline SquareUnitary exchange_unitary(int n_sites, int i, int j, double t) {
  if (n_sites < 2 || n_sites > 16) throw std::invalid_argument("exchange_unitary: bad site count");
  if (i < 0 || i >= n_sites || j < 0 || j >= n_sites || i == j) {
    throw std::invalid_argument("exchange_unitary: site out of range");
  }
  if (!(t >= 0.0 && t <= kTwoPi)) {
    throw std::invalid_argument("exchange_unitary: duration outside [0, 2*pi]");
  }
  const std::int64_t dim = std::int64_t{1} << n_sites;
  const std::complex<double> ph = std::exp(std::complex<double>(0.0, -t));
  SquareUnitary u = SquareUnitary::Zero(dim, dim);
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    const int bi = static_cast<int>((idx >> i) & 1);
    const int bj = static_cast<int>((idx >> j) & 1);
    if (bi == bj) {
      u(idx, idx) = ph;  // aligned pair: pure triplet
    } else {
      const std::int64_t other = idx ^ (std::int64_t{1} << i) ^ (std::int64_t{1} << j);
      u(idx, idx) += (ph + 1.0) / 2.0;
      u(other, idx) += (ph - 1.0) / 2.0;
    }
  }
  return u;
}

/// Ordered product U = U_N ... U_2 U_1 (first pulse acts first).
inline SquareUnitary compose(const PulseSequence& seq) {
  const std::int64_t dim = std::int64_t{1} << seq.n_sites();
  SquareUnitary u = SquareUnitary::Identity(dim, dim);
  for (const PulseSpec& p : seq.pulses()) {
    u = exchange_unitary(seq.n_sites(), p.i, p.j, p.t) * u;
  }
  return u;
}

/// Inverse sequence: reversed order with each duration t replaced by 2*pi - t.
inline PulseSequence invert_sequence(const PulseSequence& seq) {
  std::vector<PulseSpec> out;
  out.reserve(seq.size());
  for (auto it = seq.pulses().rbegin(); it != seq.pulses().rend(); ++it) {
    out.push_back(PulseSpec{it->i, it->j, kTwoPi - it->t});
  }
  return PulseSequence(seq.n_sites(), std::move(out));
}

struct Durations {
  double serial;    // sum of pulse durations
  double parallel;  // greedy earliest-start makespan preserving per-site order
};

/// Serial time and the makespan of the earliest-start schedule in which pulses
/// on disjoint pairs overlap while pulses sharing a site keep their order.
inline Durations durations(const PulseSequence& seq) {
  double serial = 0.0;
  std::vector<double> ready(static_cast<std::size_t>(seq.n_sites()), 0.0);
  double makespan = 0.0;
  for (const PulseSpec& p : seq.pulses()) {
    serial += p.t;
    const double start = std::max(ready[static_cast<std::size_t>(p.i)],
                                  ready[static_cast<std::size_t>(p.j)]);
    const double end = start + p.t;
    ready[static_cast<std::size_t>(p.i)] = end;
    ready[static_cast<std::size_t>(p.j)] = end;
    makespan = std::max(makespan, end);
  }
  return Durations{serial, makespan};
}

inline bool is_unitary(const SquareUnitary& u, double tol = 1e-10) {
  const Eigen::MatrixXcd g = u.adjoint() * u;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(g.rows(), g.cols());
  return (g - id).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace spinpulse
