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
#include <string>

#include "sqzlev/angular.hpp"
#include "sqzlev/vec3.hpp"

namespace sqzlev {

/// CODATA 2018 values, SI.
namespace constants {
inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;
}  // namespace constants

struct Particle {
  double radius = 0.0;                 // m
  double density = 0.0;                // kg/m^3
  double relative_permittivity = 0.0;  // dimensionless

  void validate() const;
  double volume() const;
  double mass() const;
  /// alpha = 3 eps0 V (eps - 1) / (eps + 2), F m^2.
  double polarizability() const;
};

/// Convenience preset, not a measured value: rho = 2200 kg/m^3, eps = 2.1.
Particle silica_particle(double radius = 70e-9);

/// Cylindrically symmetric rotor aligned with the laser polarization.
struct Rotor {
  double alpha_parallel = 0.0;         // alpha_3, F m^2
  double alpha_perp = 0.0;             // alpha_1, F m^2
  double moment_of_inertia = 0.0;      // kg m^2
  double relative_permittivity = 0.0;  // dimensionless

  void validate() const;
  double delta_alpha() const { return alpha_parallel - alpha_perp; }
};

struct Laser {
  double power = 0.0;       // W
  double waist = 0.0;       // m
  double wavelength = 0.0;  // m
  double alpha0_phase = 0.0;

  void validate() const;
  double angular_frequency() const;
  double wavenumber() const;
};

/// Coherent amplitude of the displaced laser mode (units m^-3/2).
struct Alpha0 {
  double modulus_sq = 0.0;
  double phase = 0.0;
  cplx value() const;
};

Alpha0 derive_alpha0(const Laser& laser);

enum class ModeKind { Motion, Libration };

struct MechanicalMode {
  ModeKind kind = ModeKind::Motion;
  Axis axis = Axis::Z;
  double frequency = 0.0;        // Omega, rad/s
  double zero_point = 0.0;       // m (motion) or rad (libration)
  double damping = 0.0;          // gamma, rad/s
  double bare_recoil = 0.0;      // Gamma^(0), 1/s
  double geometry_factor = 0.0;  // l_mu, motion only

  std::string name() const;
};

/// Default damping as a fraction of the mechanical frequency.
inline constexpr double kDefaultDampingFraction = 1e-6;

/// Paraxial trap: Omega_x = Omega_y = sqrt((eps-1)/(eps+2) 12 P / (pi c rho W^4)),
/// Omega_z = Omega_x lambda / (sqrt(2) pi W). Warns when W < lambda / 2.
std::array<MechanicalMode, 3> derive_motion_modes(const Particle& p, const Laser& laser,
                                                  double damping_fraction = kDefaultDampingFraction);

/// Libration about y and z (identical frequency and recoil rate).
std::array<MechanicalMode, 2> derive_libration_modes(const Rotor& r, const Laser& laser,
                                                     double damping_fraction = kDefaultDampingFraction);

/// Libration frequency sqrt(delta_alpha / I * hbar omega0 |alpha0|^2 / (eps0 (2 pi)^3)).
double libration_frequency(const Rotor& r, const Laser& laser);

/// Gamma^(0) = (2 pi / c) |alpha0|^2 [alpha / (2 eps0 (2 pi)^3)]^2 omega0^2 r0^2 (8 pi k0^4 / 3) l_mu.
double recoil_bare(const MechanicalMode& mode, const Particle& p, const Laser& laser);

/// Gamma^(0) = (2 pi / c) |alpha0|^2 [delta_alpha / (2 eps0 (2 pi)^3)]^2 (8 pi k0^2 / 3) r0^2 omega0^2.
double recoil_bare_libration(const MechanicalMode& mode, const Rotor& r, const Laser& laser);

/// hbar / (2 m Omega) under a square root.
double zero_point(double inertia, double frequency);

}  // namespace sqzlev
