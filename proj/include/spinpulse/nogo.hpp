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

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "spinpulse/synthesis.hpp"
#include "spinpulse/verification.hpp"

namespace spinpulse {

/// Numerical demonstration that exchange pulses on the four central chain
/// sites cannot yield a leakage-free entangling two-qubit gate:
///  - the determinant identity det|_{d=0} det|_{d=2} / det|_{d=1} = 1 holds
///    for arbitrary random pulse sequences (the trace identity 1 - 2 + 1 = 0
///    exponentiated), and
///  - diagonal-by-construction sequences (products of label-pair pulses and
///    nested five-operation blocks) always have vanishing entangling phase
///    phi00 - phi01 - phi10 + phi11, with the ab = 11 phase read from the
///    d = 0 sector.
struct NogoReport {
  std::uint64_t seed = 0;
  int diagonal_trials = 0;
  int determinant_trials = 0;
  int pulses_per_trial = 0;
  double max_entangling_deviation = 0.0;
  double max_diagonality_deviation = 0.0;
  double max_determinant_deviation = 0.0;
  bool pass = false;
};

namespace detail {

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  return std::mt19937_64(x);
}

/// Diagonal entries over the abd basis {000, 110 | 011, 101, 111 | 112} of a
/// four-site operator; throws if any basis state is not an eigenvector.
inline std::array<std::complex<double>, 6> abd_diagonal(const SquareUnitary& u, double* max_dev) {
  const std::vector<CouplingTree> trees = four_spin_abd_basis();
  std::array<std::complex<double>, 6> out{};
  for (std::size_t k = 0; k < trees.size(); ++k) {
    const Eigen::VectorXcd v = build_state(trees[k]).cast<std::complex<double>>();
    const std::complex<double> amp = v.dot(u * v);
    const double dev = std::abs(std::abs(amp) - 1.0);
    if (max_dev != nullptr) *max_dev = std::max(*max_dev, dev);
    if (dev > 1e-6) throw std::logic_error("abd_diagonal: operator is not diagonal in the abd basis");
    out[k] = amp;
  }
  return out;
}

}  // namespace detail

/// Entangling phase of a diagonal four-site operator, with the ab = 11 phase
/// taken from the d = 0 sector, folded into [-pi, pi).
inline double four_spin_entangling_phase(const SquareUnitary& u, double* max_dev = nullptr) {
  const auto d = detail::abd_diagonal(u, max_dev);
  const double phase = std::arg(d[0]) - std::arg(d[2]) - std::arg(d[3]) + std::arg(d[1]);
  const double w = wrap_angle(phase);
  return w < kPi ? w : w - kTwoPi;
}

/// Determinant ratio det|_{d=0} det|_{d=2} / det|_{d=1} over the labeled-tree
/// sectors of a four-site operator.
inline std::complex<double> four_spin_determinant_ratio(const SquareUnitary& u) {
  std::array<std::complex<double>, 3> dets{};
  for (int d = 0; d <= 2; ++d) {
    CouplingTree shape = CouplingTree::couple(
        CouplingTree::couple_free(CouplingTree::leaf(0), CouplingTree::leaf(1)),
        CouplingTree::couple_free(CouplingTree::leaf(2), CouplingTree::leaf(3)),
        static_cast<double>(d));
    const Eigen::MatrixXcd m = sector_matrix(u, enumerate_labelings(shape));
    dets[static_cast<std::size_t>(d)] = m.determinant();
  }
  return dets[0] * dets[2] / dets[1];
}

inline NogoReport four_spin_nogo_demo(int diagonal_trials, int determinant_trials,
                                      int pulses_per_trial, std::uint64_t seed) {
  if (diagonal_trials <= 0 || determinant_trials <= 0 || pulses_per_trial <= 0) {
    throw std::invalid_argument("four_spin_nogo_demo: trial counts must be positive");
  }
  NogoReport report;
  report.seed = seed;
  report.diagonal_trials = diagonal_trials;
  report.determinant_trials = determinant_trials;
  report.pulses_per_trial = pulses_per_trial;

  // arbitrary sequences: determinant identity
  for (int trial = 0; trial < determinant_trials; ++trial) {
    std::mt19937_64 rng = detail::trial_rng(seed, static_cast<std::uint64_t>(trial));
    std::uniform_int_distribution<int> pair(0, 2);
    std::uniform_real_distribution<double> dur(0.05, kTwoPi - 0.05);
    std::vector<PulseSpec> pulses;
    for (int k = 0; k < pulses_per_trial; ++k) {
      const int lo = pair(rng);
      pulses.push_back(PulseSpec{lo, lo + 1, dur(rng)});
    }
    const SquareUnitary u = compose(PulseSequence(4, std::move(pulses)));
    const std::complex<double> ratio = four_spin_determinant_ratio(u);
    report.max_determinant_deviation =
        std::max(report.max_determinant_deviation, std::abs(ratio - 1.0));
  }

  // diagonal-by-construction sequences: entangling phase vanishes
  for (int trial = 0; trial < diagonal_trials; ++trial) {
    std::mt19937_64 rng = detail::trial_rng(seed ^ 0x5851F42D4C957F2DULL,
                                            static_cast<std::uint64_t>(trial));
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<int> nblocks(1, 4);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_real_distribution<double> dur(0.05, kTwoPi - 0.05);
    std::vector<PulseSpec> pulses;
    const int blocks = nblocks(rng);
    for (int k = 0; k < blocks; ++k) {
      switch (kind(rng)) {
        case 0:
          pulses.push_back(PulseSpec{0, 1, dur(rng)});
          break;
        case 1:
          pulses.push_back(PulseSpec{2, 3, dur(rng)});
          break;
        default: {
          const auto pick = [&] { return coin(rng) == 0 ? U3Variant::kShort : U3Variant::kLong; };
          detail::append_u4(pulses, dur(rng), {pick(), pick(), pick()}, 0);
          break;
        }
      }
    }
    const SquareUnitary u = compose(PulseSequence(4, std::move(pulses)));
    const double phase = four_spin_entangling_phase(u, &report.max_diagonality_deviation);
    report.max_entangling_deviation = std::max(report.max_entangling_deviation, std::abs(phase));
  }

  report.pass = report.max_determinant_deviation < 1e-8 &&
                report.max_entangling_deviation < 1e-8;
  return report;
}

}  // namespace spinpulse
