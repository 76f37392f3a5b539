// Copyright 2026 The sqzlev Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace sqzlev {

using cplx = std::complex<double>;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return s * a; }
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) { return (1.0 / norm(a)) * a; }

inline constexpr Vec3 kEx{1.0, 0.0, 0.0};
inline constexpr Vec3 kEy{0.0, 1.0, 0.0};
inline constexpr Vec3 kEz{0.0, 0.0, 1.0};

/// Component of `v` transverse to the unit vector `n`.
constexpr Vec3 transverse(Vec3 v, Vec3 n) { return v - dot(v, n) * n; }

/// Complex 3-vector; used for transverse field amplitudes.
struct CVec3 {
  cplx x{}, y{}, z{};

  friend CVec3 operator+(const CVec3& a, const CVec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend CVec3 operator*(cplx s, const CVec3& a) { return {s * a.x, s * a.y, s * a.z}; }
};

inline CVec3 operator*(cplx s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }

/// Bilinear product without conjugation.
inline cplx bilinear(const CVec3& a, const CVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
/// Hermitian product a . conj(b).
inline cplx hermitian(const CVec3& a, const CVec3& b) {
  return a.x * std::conj(b.x) + a.y * std::conj(b.y) + a.z * std::conj(b.z);
}
inline double norm_sq(const CVec3& a) { return std::norm(a.x) + std::norm(a.y) + std::norm(a.z); }
inline cplx project(const CVec3& a, Vec3 e) { return a.x * e.x + a.y * e.y + a.z * e.z; }

}  // namespace sqzlev
