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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sqzlev/angular.hpp"
#include "sqzlev/error.hpp"

namespace sqzlev {

Vec3 unit_vector(Axis axis) {
  switch (axis) {
    case Axis::X: return kEx;
    case Axis::Y: return kEy;
    case Axis::Z: return kEz;
  }
  return kEz;
}

char axis_name(Axis axis) {
  switch (axis) {
    case Axis::X: return 'x';
    case Axis::Y: return 'y';
    case Axis::Z: return 'z';
  }
  return '?';
}

Axis parse_axis(char c) {
  switch (c) {
    case 'x': case 'X': return Axis::X;
    case 'y': case 'Y': return Axis::Y;
    case 'z': case 'Z': return Axis::Z;
    default: throw InvalidArgument(std::string("invalid axis '") + c + "', expected x, y or z");
  }
}

Vec3 Direction::unit_vector() const {
  const double s = std::sin(theta);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

Direction Direction::from_vector(Vec3 v) {
  const double r = norm(v);
  const double theta = std::acos(std::clamp(v.z / r, -1.0, 1.0));
  double phi = std::atan2(v.y, v.x);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  return {theta, phi};
}

PolarizationBasis polarization_basis(const Direction& dir) {
  const double ct = std::cos(dir.theta), st = std::sin(dir.theta);
  const double cp = std::cos(dir.phi), sp = std::sin(dir.phi);
  return {{ct * cp, ct * sp, -st}, {-sp, cp, 0.0}};
}

Vec3 polarization_vector(const Direction& dir, Polarization pol) {
  const auto basis = polarization_basis(dir);
  return pol == Polarization::Theta ? basis.e_theta : basis.e_phi;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre order must be >= 1");
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi initial guess for the i-th largest root.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute derivative at the converged root.
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    x[n - 1 - i] = z;
    x[i] = -z;
    w[n - 1 - i] = weight;
    w[i] = weight;
  }
  return {std::move(x), std::move(w)};
}

namespace {

// Two Gauss-Legendre panels: cos(theta') in [-1, 0] and [0, 1].
void theta_panels(int n_theta, std::vector<double>& cos_theta, std::vector<double>& weights) {
  const auto [x, w] = gauss_legendre(n_theta / 2);
  cos_theta.reserve(n_theta);
  weights.reserve(n_theta);
  for (int panel = 0; panel < 2; ++panel) {
    const double shift = panel == 0 ? -0.5 : 0.5;
    for (std::size_t k = 0; k < x.size(); ++k) {
      cos_theta.push_back(0.5 * x[k] + shift);
      weights.push_back(0.5 * w[k]);
    }
  }
}

void check_sizes(int n_theta, int n_phi) {
  if (n_theta < 2 || n_theta % 2 != 0)
    throw InvalidArgument("quadrature n_theta must be an even number >= 2, got " +
                          std::to_string(n_theta));
  if (n_phi < 1) throw InvalidArgument("quadrature n_phi must be >= 1, got " + std::to_string(n_phi));
}

Vec3 unit_pole(Vec3 pole) {
  const double len = norm(pole);
  if (!(len > 0.0) || !std::isfinite(len)) throw InvalidArgument("quadrature pole must be a nonzero vector");
  return (1.0 / len) * pole;
}

Vec3 frame_u_for(Vec3 pole) {
  Vec3 u = transverse(kEx, pole);
  if (norm(u) < 1e-8) u = transverse(kEy, pole);
  return normalized(u);
}

}  // namespace

QuadratureRule::QuadratureRule(int n_theta, int n_phi, Vec3 pole)
    : n_theta_(n_theta), n_phi_(n_phi) {
  check_sizes(n_theta, n_phi);
  pole_ = unit_pole(pole);
  frame_u_ = frame_u_for(pole_);
  frame_v_ = cross(pole_, frame_u_);

  std::vector<double> weights;
  theta_panels(n_theta, cos_theta_, weights);

  const double dphi = 2.0 * std::numbers::pi / n_phi;
  nodes_.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const double c = cos_theta_[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < n_phi; ++j) {
      const double p = j * dphi;
      const Vec3 dir = (s * std::cos(p)) * frame_u_ + (s * std::sin(p)) * frame_v_ + c * pole_;
      nodes_.push_back({dir, weights[i] * dphi});
    }
  }
}

QuadratureRule::QuadratureRule(int n_theta, int n_phi, Vec3 pole, std::vector<double> cut_angles)
    : tensor_(false), n_theta_(n_theta), n_phi_(n_phi) {
  check_sizes(n_theta, n_phi);
  pole_ = unit_pole(pole);
  frame_u_ = frame_u_for(pole_);
  frame_v_ = cross(pole_, frame_u_);

  std::vector<double> weights;
  theta_panels(n_theta, cos_theta_, weights);

  const double two_pi = 2.0 * std::numbers::pi;
  std::sort(cut_angles.begin(), cut_angles.end());
  // Gauss-Legendre on each arc between consecutive cut meridians, with nodes
  // allotted in proportion to the arc length.
  std::vector<double> phi, wphi;
  for (std::size_t a = 0; a < cut_angles.size(); ++a) {
    const double lo = cut_angles[a];
    const double hi = a + 1 < cut_angles.size() ? cut_angles[a + 1] : cut_angles.front() + two_pi;
    const double len = hi - lo;
    if (!(len > 1e-14)) continue;
    const int n = std::max(4, static_cast<int>(std::ceil(n_phi * len / two_pi)));
    const auto [x, w] = gauss_legendre(n);
    for (int k = 0; k < n; ++k) {
      phi.push_back(lo + 0.5 * len * (x[k] + 1.0));
      wphi.push_back(0.5 * len * w[k]);
    }
  }

  nodes_.reserve(cos_theta_.size() * phi.size());
  for (std::size_t i = 0; i < cos_theta_.size(); ++i) {
    const double c = cos_theta_[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (std::size_t j = 0; j < phi.size(); ++j) {
      const Vec3 dir = (s * std::cos(phi[j])) * frame_u_ + (s * std::sin(phi[j])) * frame_v_ + c * pole_;
      nodes_.push_back({dir, weights[i] * wphi[j]});
    }
  }
}

QuadratureRule QuadratureRule::for_cuts(int n_theta, int n_phi, const std::vector<Vec3>& cut_axes) {
  std::vector<Vec3> planes;
  for (const Vec3& axis : cut_axes) {
    const Vec3 n = unit_pole(axis);
    bool known = false;
    for (const Vec3& p : planes) known = known || std::abs(std::abs(dot(p, n)) - 1.0) < 1e-12;
    if (!known) planes.push_back(n);
  }
  if (planes.empty()) return QuadratureRule(n_theta, n_phi);
  if (planes.size() == 1) return QuadratureRule(n_theta, n_phi, planes.front());
  if (planes.size() > 2) {
    warn("more than two distinct cut planes; quadrature aligned with the first");
    return QuadratureRule(n_theta, n_phi, planes.front());
  }
  // Both cut planes contain the line along n1 x n2, so with that line as the
  // pole they become meridians phi' = const.
  const Vec3 pole = normalized(cross(planes[0], planes[1]));
  const Vec3 u = frame_u_for(pole);
  const Vec3 v = cross(pole, u);
  std::vector<double> cuts;
  for (const Vec3& n : planes) {
    double a = std::atan2(-dot(n, u), dot(n, v));
    if (a < 0.0) a += std::numbers::pi;
    cuts.push_back(a);
    cuts.push_back(a + std::numbers::pi);
  }
  return QuadratureRule(n_theta, n_phi, pole, std::move(cuts));
}

std::size_t QuadratureRule::nearest_node(Vec3 dir) const {
  if (!tensor_) throw InvalidArgument("nearest_node needs a tensor-product rule");
  const double c = dot(dir, pole_) / norm(dir);
  auto it = std::lower_bound(cos_theta_.begin(), cos_theta_.end(), c);
  std::size_t i = static_cast<std::size_t>(it - cos_theta_.begin());
  if (i == cos_theta_.size() || (i > 0 && std::abs(cos_theta_[i - 1] - c) < std::abs(cos_theta_[i] - c)))
    --i;
  double p = std::atan2(dot(dir, frame_v_), dot(dir, frame_u_));
  if (p < 0.0) p += 2.0 * std::numbers::pi;
  const double dphi = 2.0 * std::numbers::pi / n_phi_;
  const auto j = static_cast<std::size_t>(std::llround(p / dphi)) % static_cast<std::size_t>(n_phi_);
  return i * static_cast<std::size_t>(n_phi_) + j;
}

}  // namespace sqzlev
