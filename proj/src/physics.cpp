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

#include "sqzlev/physics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sqzlev/error.hpp"

namespace sqzlev {

using namespace constants;
using std::numbers::pi;

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << what << " must be positive and finite, got " << v;
    throw InvalidArgument(msg.str());
  }
}

constexpr double kTwoPiCubed = 8.0 * pi * pi * pi;

}  // namespace

void Particle::validate() const {
  require_positive(radius, "particle.radius");
  require_positive(density, "particle.density");
  if (!(relative_permittivity > 1.0) || !std::isfinite(relative_permittivity))
    throw InvalidArgument("particle.permittivity must be > 1");
}

double Particle::volume() const { return 4.0 / 3.0 * pi * radius * radius * radius; }
double Particle::mass() const { return density * volume(); }
double Particle::polarizability() const {
  return 3.0 * kVacuumPermittivity * volume() * (relative_permittivity - 1.0) / (relative_permittivity + 2.0);
}

Particle silica_particle(double radius) { return {radius, 2200.0, 2.1}; }

void Rotor::validate() const {
  require_positive(alpha_perp, "rotor.alpha_perp");
  require_positive(moment_of_inertia, "rotor.moment_of_inertia");
  if (!(alpha_parallel > alpha_perp) || !std::isfinite(alpha_parallel))
    throw InvalidArgument("rotor.alpha_parallel must exceed rotor.alpha_perp (delta alpha > 0)");
  if (!(relative_permittivity > 1.0)) throw InvalidArgument("rotor.permittivity must be > 1");
}

void Laser::validate() const {
  if (!(power >= 0.0) || !std::isfinite(power)) throw InvalidArgument("laser.power must be >= 0");
  require_positive(waist, "laser.waist");
  require_positive(wavelength, "laser.wavelength");
  if (!std::isfinite(alpha0_phase)) throw InvalidArgument("laser.alpha0_phase must be finite");
}

double Laser::angular_frequency() const { return 2.0 * pi * kSpeedOfLight / wavelength; }
double Laser::wavenumber() const { return 2.0 * pi / wavelength; }

cplx Alpha0::value() const { return std::polar(std::sqrt(modulus_sq), phase); }

Alpha0 derive_alpha0(const Laser& laser) {
  laser.validate();
  const double k0 = laser.wavenumber();
  const double mod2 =
      16.0 * pi * pi * laser.power / (kHbar * kSpeedOfLight * kSpeedOfLight * k0 * laser.waist * laser.waist);
  return {mod2, laser.alpha0_phase};
}

std::string MechanicalMode::name() const {
  return std::string(kind == ModeKind::Motion ? "motion_" : "libration_") + axis_name(axis);
}

double zero_point(double inertia, double frequency) {
  require_positive(inertia, "mass / moment of inertia");
  require_positive(frequency, "mechanical frequency");
  return std::sqrt(kHbar / (2.0 * inertia * frequency));
}

std::array<MechanicalMode, 3> derive_motion_modes(const Particle& p, const Laser& laser,
                                                  double damping_fraction) {
  p.validate();
  laser.validate();
  require_positive(laser.power, "laser.power");
  if (!(damping_fraction >= 0.0)) throw InvalidArgument("damping fraction must be >= 0");
  if (laser.waist < 0.5 * laser.wavelength) {
    std::ostringstream msg;
    msg << "laser waist " << laser.waist << " m is below lambda/2; paraxial trap frequencies are unreliable";
    warn(msg.str());
  }
  const double eps = p.relative_permittivity;
  const double w2 = laser.waist * laser.waist;
  const double omega_xy =
      std::sqrt((eps - 1.0) / (eps + 2.0) * 12.0 * laser.power / (pi * kSpeedOfLight * p.density * w2 * w2));
  const double omega_z = omega_xy * laser.wavelength / (std::sqrt(2.0) * pi * laser.waist);

  std::array<MechanicalMode, 3> modes;
  const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
  for (int i = 0; i < 3; ++i) {
    MechanicalMode& m = modes[i];
    m.kind = ModeKind::Motion;
    m.axis = axes[i];
    m.frequency = axes[i] == Axis::Z ? omega_z : omega_xy;
    m.zero_point = zero_point(p.mass(), m.frequency);
    m.damping = damping_fraction * m.frequency;
    m.geometry_factor = motion_geometry_factor(axes[i]);
    m.bare_recoil = recoil_bare(m, p, laser);
  }
  return modes;
}

double libration_frequency(const Rotor& r, const Laser& laser) {
  r.validate();
  const Alpha0 a0 = derive_alpha0(laser);
  return std::sqrt(r.delta_alpha() / r.moment_of_inertia * kHbar * laser.angular_frequency() * a0.modulus_sq /
                   (kVacuumPermittivity * kTwoPiCubed));
}

std::array<MechanicalMode, 2> derive_libration_modes(const Rotor& r, const Laser& laser,
                                                     double damping_fraction) {
  r.validate();
  laser.validate();
  require_positive(laser.power, "laser.power");
  if (!(damping_fraction >= 0.0)) throw InvalidArgument("damping fraction must be >= 0");
  const double omega = libration_frequency(r, laser);
  std::array<MechanicalMode, 2> modes;
  const Axis axes[2] = {Axis::Y, Axis::Z};
  for (int i = 0; i < 2; ++i) {
    MechanicalMode& m = modes[i];
    m.kind = ModeKind::Libration;
    m.axis = axes[i];
    m.frequency = omega;
    m.zero_point = zero_point(r.moment_of_inertia, omega);
    m.damping = damping_fraction * omega;
    m.geometry_factor = 0.0;
    m.bare_recoil = recoil_bare_libration(m, r, laser);
  }
  return modes;
}

double recoil_bare(const MechanicalMode& mode, const Particle& p, const Laser& laser) {
  const Alpha0 a0 = derive_alpha0(laser);
  const double w0 = laser.angular_frequency();
  const double k0 = laser.wavenumber();
  const double coupling = p.polarizability() / (2.0 * kVacuumPermittivity * kTwoPiCubed);
  const double k4 = k0 * k0 * k0 * k0;
  return 2.0 * pi / kSpeedOfLight * a0.modulus_sq * coupling * coupling * w0 * w0 * mode.zero_point *
         mode.zero_point * (8.0 * pi * k4 / 3.0) * mode.geometry_factor;
}

double recoil_bare_libration(const MechanicalMode& mode, const Rotor& r, const Laser& laser) {
  const Alpha0 a0 = derive_alpha0(laser);
  const double w0 = laser.angular_frequency();
  const double k0 = laser.wavenumber();
  const double coupling = r.delta_alpha() / (2.0 * kVacuumPermittivity * kTwoPiCubed);
  return 2.0 * pi / kSpeedOfLight * a0.modulus_sq * coupling * coupling * (8.0 * pi * k0 * k0 / 3.0) *
         mode.zero_point * mode.zero_point * w0 * w0;
}

}  // namespace sqzlev
