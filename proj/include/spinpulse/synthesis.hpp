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

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spinpulse/pulse.hpp"
#include "spinpulse/su2_geometry.hpp"
#include "spinpulse/verification.hpp"

namespace spinpulse {

// Fixed angles of the nested constructions: the four-spin conjugation angle
// arccos((z.n2)/(z.n2 + 1)) = 2*pi/3 and the five-spin one
// arccos((z.n2)/(z.n2 - 1)) = arccos(1/4).
inline double u4_conjugation_angle() { return conjugation_angle(-1.0 / 3.0, +1); }
inline double u5_conjugation_angle() { return conjugation_angle(-1.0 / 3.0, -1); }

enum class U3Variant { kShort, kLong };

inline const char* to_string(U3Variant v) { return v == U3Variant::kShort ? "short" : "long"; }

/// Solution of the three-pulse diagonalization for a target phase:
/// tan(t/2) tan(tbar/2) = -2 and t + tbar - pi = phi (mod 2*pi).
/// The short variant has t < pi <= tbar, the long variant the swap.
struct U3Solution {
  double phi = 0.0;
  double t = 0.0;
  double tbar = 0.0;
  U3Variant variant = U3Variant::kShort;
};

namespace detail {

/// Phase produced by the three-pulse sequence with leading angle t in (0, pi):
/// phi(t) = t + tbar(t) - pi, monotone from 0 to 2*pi.
inline double u3_phase_of_t(double t) {
  return t + three_rotation_companion(-0.5, t) - kPi;
}

inline U3Solution solve_u3_bisection(double phi, U3Variant variant) {
  double lo = 1e-15;
  double hi = kPi - 1e-15;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (u3_phase_of_t(mid) < phi ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  const double tbar = three_rotation_companion(-0.5, t);
  if (variant == U3Variant::kShort) return {phi, t, tbar, variant};
  return {phi, tbar, t, variant};
}

}  // namespace detail

/// Solves the three-pulse diagonalization for phi in (0, 2*pi).  tan(t/2) and
/// tan(tbar/2) are the roots of x^2 + 3 cot(phi/2) x - 2 = 0; a monotone
/// bisection on phi(t) backs the closed form if it ever loses accuracy.
inline U3Solution solve_u3(double phi, U3Variant variant) {
  if (!(phi > 0.0 && phi < kTwoPi)) {
    throw std::domain_error("solve_u3: phi must lie in (0, 2*pi)");
  }
  const double b = 3.0 * std::cos(phi / 2.0) / std::sin(phi / 2.0);
  const double disc = std::sqrt(b * b + 8.0);
  const double xpos = (-b + disc) / 2.0;
  const double xneg = (-b - disc) / 2.0;
  const double t_short = 2.0 * std::atan(xpos);
  const double tbar_short = 2.0 * std::atan(xneg) + kTwoPi;

  U3Solution sol{phi, t_short, tbar_short, U3Variant::kShort};
  if (variant == U3Variant::kLong) sol = {phi, tbar_short, t_short, U3Variant::kLong};

  const double residual_product = std::tan(sol.t / 2.0) * std::tan(sol.tbar / 2.0) + 2.0;
  const double residual_phase = angle_distance(sol.t + sol.tbar - kPi, phi);
  if (std::abs(residual_product) > 1e-9 || residual_phase > 1e-9) {
    return detail::solve_u3_bisection(phi, variant);
  }
  return sol;
}

/// Three-pulse realization on consecutive sites (x, y, z) with the pair (x, y)
/// carrying the conserved label: pulses (y,z) t, (x,y) tbar, (y,z) t.
inline void append_u3(std::vector<PulseSpec>& out, const U3Solution& sol, int x, int y, int z) {
  out.push_back(PulseSpec{y, z, sol.t});
  out.push_back(PulseSpec{x, y, sol.tbar});
  out.push_back(PulseSpec{y, z, sol.t});
}

inline PulseSequence u3_sequence(const U3Solution& sol, int x, int y, int z, int n_sites) {
  if (y != x + 1 || z != y + 1) {
    throw std::invalid_argument("u3_sequence: sites must be consecutive");
  }
  std::vector<PulseSpec> pulses;
  append_u3(pulses, sol, x, y, z);
  return PulseSequence(n_sites, std::move(pulses));
}

/// Per-instance short/long choices for the eleven three-pulse blocks of the
/// full construction, in time order:
///   [0..2]  first nested block  (inner phases s4, t5, t4)
///   [3]     standalone block with phase s5
///   [4..6]  central nested block (inner phases s4, phi, t4)
///   [7]     standalone block with phase t5
///   [8..10] last nested block   (inner phases s4, s5, t4)
struct VariantProfile {
  std::array<U3Variant, 11> slots{};
  std::string name = "custom";

  /// t-type blocks short, s-type blocks long; one correction pulse results.
  static VariantProfile fig9a() {
    VariantProfile p;
    constexpr U3Variant S = U3Variant::kShort;
    constexpr U3Variant L = U3Variant::kLong;
    p.slots = {L, S, S, L, L, S, S, S, L, L, S};
    p.name = "fig9a";
    return p;
  }

  /// All blocks short; two correction pulses, slightly shorter in parallel.
  static VariantProfile fig9b() {
    VariantProfile p;
    p.slots.fill(U3Variant::kShort);
    p.name = "fig9b";
    return p;
  }

  /// Eleven characters of 's'/'l' in slot order.
  static VariantProfile parse(std::string_view spec) {
    if (spec.size() != 11) {
      throw std::invalid_argument("VariantProfile: expected 11 characters of 's' or 'l'");
    }
    VariantProfile p;
    for (std::size_t k = 0; k < 11; ++k) {
      if (spec[k] == 's') {
        p.slots[k] = U3Variant::kShort;
      } else if (spec[k] == 'l') {
        p.slots[k] = U3Variant::kLong;
      } else {
        throw std::invalid_argument("VariantProfile: expected 11 characters of 's' or 'l'");
      }
    }
    p.name = "custom:" + std::string(spec);
    return p;
  }

  std::vector<std::string> to_strings() const {
    std::vector<std::string> out;
    for (const U3Variant v : slots) out.emplace_back(to_string(v));
    return out;
  }
};

namespace detail {

/// Five-operation nested block on sites (base..base+3): three-pulse blocks on
/// (base, base+1, base+2) around plain pulses on (base+2, base+3).  Time
/// order: U3(s4), U2(s4), U3(phi), U2(t4), U3(t4).
inline void append_u4(std::vector<PulseSpec>& out, double phi,
                      const std::array<U3Variant, 3>& variants, int base) {
  const double t4 = u4_conjugation_angle();
  const double s4 = kTwoPi - t4;
  const int x = base, y = base + 1, z = base + 2, w = base + 3;
  append_u3(out, solve_u3(s4, variants[0]), x, y, z);
  out.push_back(PulseSpec{z, w, s4});
  append_u3(out, solve_u3(phi, variants[1]), x, y, z);
  out.push_back(PulseSpec{z, w, t4});
  append_u3(out, solve_u3(t4, variants[2]), x, y, z);
}

}  // namespace detail

/// Eleven-pulse block performing the conserving diagonal operation with phase
/// phi on four sites starting at `base`.
inline PulseSequence u4_sequence_at(double phi, const std::array<U3Variant, 3>& variants,
                                    int base, int n_sites) {
  std::vector<PulseSpec> pulses;
  detail::append_u4(pulses, phi, variants, base);
  return PulseSequence(n_sites, std::move(pulses));
}

/// Canonical eleven-pulse block on chain sites 1..4 of the six-site chain.
inline PulseSequence u4_sequence(double phi,
                                 const std::array<U3Variant, 3>& variants = {
                                     U3Variant::kShort, U3Variant::kShort, U3Variant::kShort}) {
  return u4_sequence_at(phi, variants, kLeftPairLo, kChainSites);
}

namespace detail {

inline std::vector<PulseSpec> u5_pulses(double phi, const VariantProfile& profile, int base) {
  const double t5 = u5_conjugation_angle();
  const double s5 = kTwoPi - t5;
  const int bx = base + 2, by = base + 3, bz = base + 4;  // standalone blocks act low on the chain
  std::vector<PulseSpec> out;
  append_u4(out, t5, {profile.slots[0], profile.slots[1], profile.slots[2]}, base);
  append_u3(out, solve_u3(s5, profile.slots[3]), bx, by, bz);
  append_u4(out, phi, {profile.slots[4], profile.slots[5], profile.slots[6]}, base);
  append_u3(out, solve_u3(t5, profile.slots[7]), bx, by, bz);
  append_u4(out, s5, {profile.slots[8], profile.slots[9], profile.slots[10]}, base);
  return out;
}

}  // namespace detail

/// The 39-pulse controlled-phase core on five sites starting at `base`.
inline PulseSequence u5_sequence_at(double phi, const VariantProfile& profile, int base, int n_sites) {
  return PulseSequence(n_sites, detail::u5_pulses(phi, profile, base));
}

/// Canonical 39-pulse controlled-phase core on chain sites 1..5.
inline PulseSequence u5_sequence(double phi, const VariantProfile& profile) {
  return u5_sequence_at(phi, profile, kLeftPairLo, kChainSites);
}

// ---------------------------------------------------------------------------
// Alternate nested block built from two three-operation blocks

class UnachievableThetaError : public std::domain_error {
 public:
  explicit UnachievableThetaError(const std::string& msg) : std::domain_error(msg) {}
};

/// Phase difference theta produced by the three-operation block as a function
/// of its leading effective angle t in (0, pi):
/// theta(t) = t - tbar(t) + pi with tan(t/2) tan(tbar/2) = -3.
inline double u4tilde_theta_curve(double t) {
  return t - three_rotation_companion(-1.0 / 3.0, t) + kPi;
}

/// Supremum pi/3 of theta(t) on the (0, pi) branch, attained at t = 2*pi/3.
/// The full achievable set is (0, max] together with its mirror
/// [2*pi - max, 2*pi) from the t -> 2*pi - t symmetry.
inline double theta_range_max() {
  return u4tilde_theta_curve(2.0 * kPi / 3.0);
}

struct U3TildeSolution {
  double theta = 0.0;
  double t = 0.0;
  double tbar = 0.0;
  int branch = 0;
};

/// Solves tan(t/2) tan(tbar/2) = -3 with t - tbar + pi = theta (mod 2*pi).
/// With p = tan(t/2) and q = tan(tbar/2): p - q = 2 cot(theta/2) and
/// p + q = -+ 2 sqrt(cot^2(theta/2) - 3); the discriminant is negative exactly
/// for unachievable theta.  Branches are indexed by ascending t.
inline U3TildeSolution solve_u3_tilde(double theta, int branch = 0) {
  if (branch != 0 && branch != 1) throw std::domain_error("solve_u3_tilde: branch must be 0 or 1");
  const double th = wrap_angle(theta);
  if (th <= 0.0) throw UnachievableThetaError("unachievable theta");
  const bool mirror = th > kPi;
  const double reduced = mirror ? kTwoPi - th : th;
  const double cot = std::cos(reduced / 2.0) / std::sin(reduced / 2.0);
  const double disc = cot * cot - 3.0;
  if (disc < 0.0) {
    throw UnachievableThetaError("unachievable theta: outside (0, pi/3] and its mirror");
  }
  const double half_sum = (branch == 0 ? -1.0 : 1.0) * std::sqrt(disc);
  double t = 2.0 * std::atan(half_sum + cot);
  double tbar = 2.0 * std::atan(half_sum - cot) + kTwoPi;
  if (mirror) {
    t = kTwoPi - t;
    tbar = kTwoPi - tbar;
  }
  return {theta, t, tbar, branch};
}

/// Seven-pulse three-operation block: U3(t), U2(tbar), U3(t) with the tilde
/// constraint; diagonal on the four-site block with phase difference theta
/// between the one-dimensional b=1,d=0 state and the d=1, b=1 state.
inline PulseSequence u4tilde_sequence_at(double theta, int branch, int base, int n_sites,
                                         U3Variant variant = U3Variant::kShort) {
  const U3TildeSolution sol = solve_u3_tilde(theta, branch);
  const int x = base, y = base + 1, z = base + 2, w = base + 3;
  std::vector<PulseSpec> out;
  append_u3(out, solve_u3(sol.t, variant), x, y, z);
  out.push_back(PulseSpec{z, w, sol.tbar});
  append_u3(out, solve_u3(sol.t, variant), x, y, z);
  return PulseSequence(n_sites, std::move(out));
}

namespace detail {

/// Merged product of two three-operation blocks with phases theta1 then
/// theta2: the adjacent central U3 blocks combine into one, giving the same
/// eleven-pulse footprint as the similarity-transform block.
inline void append_merged_tilde_pair(std::vector<PulseSpec>& out, double theta1, double theta2,
                                     int branch, int base, U3Variant variant) {
  const U3TildeSolution a = solve_u3_tilde(theta1, branch);
  const U3TildeSolution b = solve_u3_tilde(theta2, branch);
  const int x = base, y = base + 1, z = base + 2, w = base + 3;
  const double merged = wrap_angle(a.t + b.t);
  if (merged <= 0.0 || merged >= kTwoPi) {
    throw UnachievableThetaError("merged central block phase is degenerate");
  }
  append_u3(out, solve_u3(a.t, variant), x, y, z);
  out.push_back(PulseSpec{z, w, a.tbar});
  append_u3(out, solve_u3(merged, variant), x, y, z);
  out.push_back(PulseSpec{z, w, b.tbar});
  append_u3(out, solve_u3(b.t, variant), x, y, z);
}

}  // namespace detail

/// 39-pulse alternate core: both outer nested blocks are replaced by merged
/// pairs of three-operation blocks whose phases split the conjugation angle as
/// theta1 + theta2 = t5 (mirrored for the s5 slot); the central block is
/// unchanged.  theta1 and t5 - theta1 must both be achievable.
inline PulseSequence alt_u5_sequence(double phi, double theta1,
                                     const VariantProfile& profile = VariantProfile::fig9b(),
                                     int branch = 0) {
  const double t5 = u5_conjugation_angle();
  const double theta2 = t5 - theta1;
  const int base = kLeftPairLo;
  const int bx = base + 2, by = base + 3, bz = base + 4;
  const double s5 = kTwoPi - t5;
  std::vector<PulseSpec> out;
  detail::append_merged_tilde_pair(out, theta1, theta2, branch, base, profile.slots[1]);
  append_u3(out, solve_u3(s5, profile.slots[3]), bx, by, bz);
  detail::append_u4(out, phi, {profile.slots[4], profile.slots[5], profile.slots[6]}, base);
  append_u3(out, solve_u3(t5, profile.slots[7]), bx, by, bz);
  detail::append_merged_tilde_pair(out, kTwoPi - theta1, kTwoPi - theta2, branch, base,
                                   profile.slots[9]);
  return PulseSequence(kChainSites, std::move(out));
}

// ---------------------------------------------------------------------------
// Corrections and the synthesis entry points

/// Single-qubit correction pulses on the label pairs (1,2) and/or (3,4),
/// computed from the diagonal phases of the composed encoded gate so that the
/// corrected gate equals diag(1, 1, 1, e^{-i phi}) up to a global phase.
/// Zero-duration corrections are omitted.
inline std::vector<PulseSpec> correction_pulses(const PulseSequence& core, double phi) {
  const SquareUnitary u = compose(core);
  const GateReport report = gate_report(u, 1, 1.0);
  if (!report.diagonal) {
    throw std::invalid_argument("correction_pulses: not diagonal");
  }
  if (angle_distance(report.entangling_phase, kTwoPi - phi) > 1e-9) {
    throw std::invalid_argument("correction_pulses: entangling phase does not match -phi");
  }
  const auto& ph = report.diagonal_phases;
  const double ta = wrap_angle(ph[2] - ph[0]);  // removes the a-pair phase
  const double tb = wrap_angle(ph[1] - ph[0]);  // removes the b-pair phase
  std::vector<PulseSpec> out;
  const double eps = 1e-9;
  if (ta > eps && ta < kTwoPi - eps) out.push_back(PulseSpec{kLeftPairLo, kLeftPairLo + 1, ta});
  if (tb > eps && tb < kTwoPi - eps) out.push_back(PulseSpec{kRightPairLo, kRightPairLo + 1, tb});
  return out;
}

struct SynthesisResult {
  PulseSequence core;
  std::vector<PulseSpec> corrections;
  double phi = 0.0;
  VariantProfile profile;
  std::optional<double> alt_theta1;

  PulseSequence full() const { return core.appended(corrections); }
};

inline SynthesisResult synthesize(double phi, const VariantProfile& profile) {
  PulseSequence core = u5_sequence(phi, profile);
  std::vector<PulseSpec> corrections = correction_pulses(core, phi);
  return SynthesisResult{std::move(core), std::move(corrections), phi, profile, std::nullopt};
}

inline SynthesisResult synthesize_alt(double phi, double theta1,
                                      const VariantProfile& profile = VariantProfile::fig9b()) {
  PulseSequence core = alt_u5_sequence(phi, theta1, profile);
  std::vector<PulseSpec> corrections = correction_pulses(core, phi);
  return SynthesisResult{std::move(core), std::move(corrections), phi, profile, theta1};
}

}  // namespace spinpulse
