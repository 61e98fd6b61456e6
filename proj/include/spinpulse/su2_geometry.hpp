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
#include <numbers>
#include <stdexcept>

namespace spinpulse {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

/// Distance between two angles modulo 2*pi.
inline double angle_distance(double a, double b) {
  double d = wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

/// Unit vector in R^3.  Construction enforces |v|^2 = 1 within 1e-12.
struct UnitVector3 {
  double x;
  double y;
  double z;

  UnitVector3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
    if (std::abs(x * x + y * y + z * z - 1.0) > 1e-12) {
      throw std::invalid_argument("UnitVector3: components are not unit norm");
    }
  }

  static UnitVector3 normalized(double x, double y, double z) {
    const double n = std::sqrt(x * x + y * y + z * z);
    if (n == 0.0) throw std::invalid_argument("UnitVector3: zero vector");
    return UnitVector3(x / n, y / n, z / n);
  }

  double dot(const UnitVector3& o) const { return x * o.x + y * o.y + z * o.z; }
};

inline UnitVector3 z_axis() { return UnitVector3(0.0, 0.0, 1.0); }
inline UnitVector3 x_axis() { return UnitVector3(1.0, 0.0, 0.0); }
inline UnitVector3 y_axis() { return UnitVector3(0.0, 1.0, 0.0); }

/// Reflection axis of the three-spin pseudospin basis change, (sqrt(3)/2, 0, -1/2).
inline UnitVector3 reflection_axis_f1() {
  return UnitVector3(std::sqrt(3.0) / 2.0, 0.0, -0.5);
}

/// Reflection axis of the spin-1 pseudospin basis change, (sqrt(2/3), 0, -1/sqrt(3)).
inline UnitVector3 reflection_axis_f2() {
  return UnitVector3(std::sqrt(2.0 / 3.0), 0.0, -1.0 / std::sqrt(3.0));
}

/// Rotation given as axis and angle in [0, 2*pi).  Positive angles are
/// left-handed rotations: the vector action induced by conjugation with
/// exp(i*angle*(axis.sigma)/2).
struct AxisAngle {
  UnitVector3 axis;
  double angle;

  AxisAngle(UnitVector3 axis_, double angle_) : axis(axis_), angle(angle_) {
    if (angle < 0.0 || angle >= kTwoPi) {
      throw std::invalid_argument("AxisAngle: angle outside [0, 2*pi)");
    }
  }
};

/// Applies the left-handed Rodrigues rotation of `r` to `v`.
inline UnitVector3 rotate_vector(const UnitVector3& v, const AxisAngle& r) {
  const UnitVector3& n = r.axis;
  const double c = std::cos(r.angle);
  const double s = -std::sin(r.angle);  // left-handed
  const double nv = n.dot(v);
  const double cx = n.y * v.z - n.z * v.y;
  const double cy = n.z * v.x - n.x * v.z;
  const double cz = n.x * v.y - n.y * v.x;
  return UnitVector3(v.x * c + cx * s + n.x * nv * (1.0 - c),
                     v.y * c + cy * s + n.y * nv * (1.0 - c),
                     v.z * c + cz * s + n.z * nv * (1.0 - c));
}

/// Rotation axis obtained from a reflection axis f: returns 2 f (f.z) - z.
/// Maps the f1/f2 reflection axes to the n1/n2 pulse rotation axes.
inline UnitVector3 axis_from_reflection(const UnitVector3& f) {
  const double fz = f.z;
  return UnitVector3(2.0 * f.x * fz, 2.0 * f.y * fz, 2.0 * f.z * fz - 1.0);
}

/// Axis of the bottom-pair pulse in the three-spin pseudospin picture; z.n1 = -1/2.
inline UnitVector3 pulse_axis_n1() { return axis_from_reflection(reflection_axis_f1()); }

/// Axis of the composite-spin-1 pulse in the four-spin pseudospin picture; z.n2 = -1/3.
inline UnitVector3 pulse_axis_n2() { return axis_from_reflection(reflection_axis_f2()); }

/// Companion angle tbar of the three-rotation identity
///   tan(t/2) * tan(tbar/2) = 1/c,   c = z.n in (-1, 0),
/// such that the rotation sequence R(n,t) R(z,tbar) R(n,t) fixes the z axis.
/// Evaluated in cotangent form, tan(tbar/2) = cos(t/2) / (c sin(t/2)), which
/// stays finite across t = pi.
inline double three_rotation_companion(double c, double t) {
  if (!(c > -1.0 && c < 0.0)) {
    throw std::domain_error("three_rotation_companion: c must lie in (-1, 0)");
  }
  if (!(t > 0.0 && t < kTwoPi)) {
    throw std::domain_error("three_rotation_companion: t must lie in (0, 2*pi)");
  }
  double half = std::atan2(std::cos(t / 2.0), c * std::sin(t / 2.0));
  if (half <= 0.0) half += kPi;
  return 2.0 * half;
}

/// Angle arccos(c / (c + sign)) of the two-step cone construction that takes
/// the pulse axis n (z.n = c) onto +z (sign = +1) or -z (sign = -1).
inline double conjugation_angle(double c, int sign) {
  if (!(c > -1.0 && c < 0.0)) {
    throw std::domain_error("conjugation_angle: c must lie in (-1, 0)");
  }
  if (sign != 1 && sign != -1) {
    throw std::domain_error("conjugation_angle: sign must be +1 or -1");
  }
  const double ratio = c / (c + static_cast<double>(sign));
  if (std::abs(ratio) > 1.0) {
    throw std::domain_error("conjugation_angle: |c/(c+sign)| exceeds 1");
  }
  return std::acos(ratio);
}

}  // namespace spinpulse
