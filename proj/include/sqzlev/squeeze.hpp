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
#include <vector>

#include "sqzlev/angular.hpp"
#include "sqzlev/physics.hpp"
#include "sqzlev/table.hpp"

namespace sqzlev {

/// Squeezing degree r_s >= 0 and absolute phase phi_s in [0, 2 pi) at the carrier.
struct SqueezeParams {
  double r = 0.0;
  double phi = 0.0;

  SqueezeParams() = default;
  SqueezeParams(double r, double phi);

  /// Absolute phase chosen so that phi_s - 2 arg(xi) equals `relative_phase`.
  static SqueezeParams relative_to(double r, double relative_phase, cplx xi);

  double s0() const;
  double c0() const;
};

/// r = db ln(10) / 20. Throws on negative or non-finite input.
double db_to_r(double db);
double r_to_db(double r);

/// Reduces an angle to [0, 2 pi).
double wrap_phase(double phi);

struct OverlapResult {
  cplx xi;

  double modulus() const { return std::abs(xi); }
  double phase() const { return std::arg(xi); }
};

/// xi = overlap(beam, target) on the rule suited to the pair. Warns when
/// |xi| exceeds 1 by more than 1e-10 (unnormalized inputs).
OverlapResult compute_overlap(const AngularDistribution& beam, const AngularDistribution& target,
                              const QuadratureRule& rule = QuadratureRule());

/// Gamma / Gamma^(0) = 1 - |xi|^2 [1 - e^{2r} sin^2(Phi/2) - e^{-2r} cos^2(Phi/2)],
/// Phi = phi_s - 2 psi.
double recoil_ratio(const OverlapResult& xi, const SqueezeParams& sq);
double recoil_ratio_relative(double xi_modulus_sq, double r, double relative_phase);

/// Gamma_{mu mu'}; `same_mode` adds the diagonal Gamma^(0) term.
double cross_rate(const OverlapResult& xi_a, const OverlapResult& xi_b, double bare_a, double bare_b,
                  const SqueezeParams& sq, bool same_mode);

/// A beam column of a recoil sweep.
struct NamedBeam {
  std::string name;
  AngularDistribution beam;
};

/// Cartesian grid of squeezing degrees (dB) and phases phi_s - 2 psi.
struct SweepGrid {
  std::vector<double> db;
  std::vector<double> relative_phase;
};

struct SweepOptions {
  bool include_perfect = true;
  QuadratureRule rule;
  int threads = 1;
};

/// Columns: r_db, phase, ratio_perfect (optional), ratio_<name> per beam.
/// Rows run over db (outer) then phase (inner).
Table recoil_sweep(const AngularDistribution& target, const std::vector<NamedBeam>& beams,
                   const SweepGrid& grid, const SweepOptions& options = {});
Table recoil_sweep(Axis motion_axis, const std::vector<NamedBeam>& beams, const SweepGrid& grid,
                   const SweepOptions& options = {});
Table libration_recoil_sweep(Axis libration_axis, const std::vector<NamedBeam>& beams,
                             const SweepGrid& grid, const SweepOptions& options = {});

/// <n>(t) = n0 + ratio Gamma^(0) t: diffusion without damping or thermal bath.
/// Columns: t, n.
Table reheating_trajectory(const MechanicalMode& mode, double ratio, double n0,
                           const std::vector<double>& times);

}  // namespace sqzlev
