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

#include <string>

#include "sqzlev/angular.hpp"
#include "sqzlev/squeeze.hpp"
#include "sqzlev/table.hpp"

namespace sqzlev {

enum class CrossSectionUnits {
  /// Units of (2 pi)^3 |alpha0|^2 Gamma^(0) / c; the bare pattern integrates to 1.
  Shape,
  /// Multiplied by (2 pi)^3 |alpha0|^2 Gamma^(0) / c in SI units.
  Absolute,
};

struct ScatterConfig {
  AngularDistribution target;  // A_mu or A_mu^(l)
  AngularDistribution beam;    // A_s
  SqueezeParams sq;
  cplx alpha0{1.0, 0.0};
  double bare_recoil = 1.0;  // Gamma^(0), 1/s
  QuadratureRule rule;
};

struct ScatteringAmplitudes {
  cplx f_plus;
  cplx f_minus;
};

/// Evaluates f+ = -conj(alpha0) sqrt((2 pi)^3 Gamma0 / c) [A_mu + conj(A_s) g] and
/// f- = -alpha0 sqrt((2 pi)^3 Gamma0 / c) conj(A_s) conj(g), with
/// g = xi s0 (s0 - c0 e^{i(phi_s - 2 psi)}).
class Scatterer {
 public:
  explicit Scatterer(ScatterConfig config, CrossSectionUnits units = CrossSectionUnits::Shape);

  const ScatterConfig& config() const { return config_; }
  const OverlapResult& overlap() const { return xi_; }
  cplx g() const { return g_; }
  CrossSectionUnits units() const { return units_; }

  /// (2 pi)^3 |alpha0|^2 Gamma^(0) / c, or 1 in shape units.
  double unit_scale() const;

  ScatteringAmplitudes amplitudes(const Direction& dir, Polarization pol) const;
  /// Transverse vector amplitudes at `k`; sum_pol |f|^2 is their squared norm.
  std::pair<CVec3, CVec3> amplitude_vectors(const Vec3& k) const;

  double differential_cross_section(const Direction& dir) const;
  double differential_cross_section(const Vec3& k) const;
  /// Contribution of one polarization channel.
  double differential_cross_section(const Direction& dir, Polarization pol) const;

  /// Gamma / Gamma^(0) via the squeeze module.
  double recoil_ratio() const;
  /// Closed-form integral of dsigma/dOmega: unit_scale() * recoil_ratio().
  double total_cross_section_expected() const;
  /// Quadrature of dsigma/dOmega on the rule suited to target and beam.
  double total_cross_section_numeric() const;

 private:
  ScatterConfig config_;
  CrossSectionUnits units_;
  OverlapResult xi_;
  cplx g_;
  cplx prefactor_plus_;
  cplx prefactor_minus_;
};

struct IrpGridSpec {
  int n_theta = 181;
  int n_phi = 360;
  int threads = 1;
};

struct IrpMetadata {
  double normalization = 0.0;           // quadrature of dsigma/dOmega
  double normalization_expected = 0.0;  // closed form
  double normalization_relative_error = 0.0;
  double dsigma_min = 0.0;
  double dsigma_max = 0.0;
  bool has_negative = false;
  double irp_grid_integral = 0.0;  // equiangular-grid estimate of int I dOmega
  OverlapResult xi;
  double recoil_ratio = 0.0;
};

struct IrpGrid {
  /// theta, phi, dsigma, irp, f_plus_sq, f_minus_sq, dsigma_theta, dsigma_phi;
  /// row-major in theta then phi, theta_i = pi i / (n_theta - 1), phi_j = 2 pi j / n_phi.
  Table table;
  IrpMetadata metadata;
};

/// Throws NumericalFailure when the normalization integral is not positive.
IrpGrid irp_grid(const Scatterer& scatterer, const IrpGridSpec& spec = {});

}  // namespace sqzlev
