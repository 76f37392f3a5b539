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

#include <cmath>
#include <numbers>

#include "sqzlev/angular.hpp"
#include "sqzlev/error.hpp"
#include "sqzlev/physics.hpp"
#include "support.hpp"

using namespace sqzlev;
using sqztest::Gen;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHbar = constants::kHbar;
constexpr double kC = constants::kSpeedOfLight;
constexpr double kEps0 = constants::kVacuumPermittivity;

Laser default_laser() { return Laser{0.5, 0.7e-6, 1064e-9, 0.0}; }

Particle random_particle(Gen& g) {
  return Particle{g.log_uniform(20e-9, 200e-9), g.uniform(1000.0, 5000.0), g.uniform(1.5, 6.0)};
}

Laser random_laser(Gen& g) {
  const double wavelength = g.uniform(500e-9, 1600e-9);
  return Laser{g.log_uniform(0.01, 2.0), g.uniform(0.6, 3.0) * wavelength, wavelength, g.uniform(0.0, 6.0)};
}

Rotor random_rotor(Gen& g) {
  const double perp = g.log_uniform(1e-33, 1e-31);
  return Rotor{perp * g.uniform(1.05, 3.0), perp, g.log_uniform(1e-36, 1e-32), 2.1};
}

// Peak intensity of the focused Gaussian beam, 2P / (pi W^2).
double intensity(const Laser& l) { return 2.0 * l.power / (kPi * l.waist * l.waist); }

}  // namespace

TEST_CASE("particle derived quantities") {
  const Particle p = silica_particle();
  CHECK(p.volume() == doctest::Approx(4.0 / 3.0 * kPi * std::pow(70e-9, 3)).epsilon(1e-14));
  CHECK(p.mass() == doctest::Approx(2200.0 * p.volume()).epsilon(1e-14));
  CHECK(p.polarizability() == doctest::Approx(3.0 * kEps0 * p.volume() * 1.1 / 4.1).epsilon(1e-14));
  CHECK_THROWS_AS((Particle{-1.0, 2200.0, 2.1}.validate()), InvalidArgument);
  CHECK_THROWS_AS((Particle{1e-7, 2200.0, 1.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((Laser{-1.0, 1e-6, 1e-6, 0.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((Rotor{1e-32, 2e-32, 1e-34, 2.1}.validate()), InvalidArgument);
}

TEST_CASE("coherent amplitude corresponds to the focal field energy") {
  // hbar omega0 |alpha0|^2 / (eps0 (2 pi)^3) equals E0^2 / 2 with I = c eps0 E0^2 / 2.
  sqztest::for_all(50, 41, [](Gen& g, int) {
    const Laser l = random_laser(g);
    const Alpha0 a = derive_alpha0(l);
    const double lhs = kHbar * l.angular_frequency() * a.modulus_sq / (kEps0 * std::pow(2.0 * kPi, 3));
    CHECK(lhs == doctest::Approx(intensity(l) / (kC * kEps0)).epsilon(1e-12));
    CHECK(std::arg(a.value()) == doctest::Approx(std::remainder(l.alpha0_phase, 2.0 * kPi)).epsilon(1e-12));
  });
}

TEST_CASE("trap frequencies follow from the optical potential curvature") {
  // U = -alpha |E|^2 / 4 with |E|^2 = E0^2 exp(-2 rho^2 / W^2) / (1 + z^2 / zR^2).
  sqztest::for_all(50, 43, [](Gen& g, int) {
    const Particle p = random_particle(g);
    const Laser l = random_laser(g);
    const auto modes = derive_motion_modes(p, l);
    const double e0_sq = 2.0 * intensity(l) / (kC * kEps0);
    const double k_rho = p.polarizability() * e0_sq / (l.waist * l.waist);
    const double z_r = kPi * l.waist * l.waist / l.wavelength;
    const double k_z = p.polarizability() * e0_sq / (2.0 * z_r * z_r);
    CHECK(modes[0].frequency == doctest::Approx(std::sqrt(k_rho / p.mass())).epsilon(1e-12));
    CHECK(modes[1].frequency == doctest::Approx(modes[0].frequency).epsilon(1e-15));
    CHECK(modes[2].frequency == doctest::Approx(std::sqrt(k_z / p.mass())).epsilon(1e-12));
  });
}

TEST_CASE("zero-point invariant and positive rates") {
  sqztest::for_all(100, 47, [](Gen& g, int) {
    const Particle p = random_particle(g);
    const Laser l = random_laser(g);
    const double damping = g.log_uniform(1e-9, 1e-3);
    for (const auto& m : derive_motion_modes(p, l, damping)) {
      CHECK(m.zero_point * m.zero_point * 2.0 * p.mass() * m.frequency == doctest::Approx(kHbar).epsilon(1e-12));
      CHECK(m.bare_recoil > 0.0);
      CHECK(m.frequency > 0.0);
      CHECK(m.damping == doctest::Approx(damping * m.frequency).epsilon(1e-15));
    }
  });
}

TEST_CASE("motional recoil rate equals the photon-recoil diffusion estimate") {
  // Scattered photon flux P_sc / (hbar omega0) with Rayleigh cross section
  // k0^4 alpha^2 / (6 pi eps0^2), each kick weighted by k0^2 r0^2 <(k - e_z)_mu^2> = l_mu.
  sqztest::for_all(100, 53, [](Gen& g, int) {
    const Particle p = random_particle(g);
    const Laser l = random_laser(g);
    const double k0 = 2.0 * kPi / l.wavelength;
    const double alpha = p.polarizability();
    const double sigma = std::pow(k0, 4) * alpha * alpha / (6.0 * kPi * kEps0 * kEps0);
    const double flux = intensity(l) * sigma / (kHbar * kC * k0);
    for (const auto& m : derive_motion_modes(p, l)) {
      const double expected = flux * k0 * k0 * m.zero_point * m.zero_point * m.geometry_factor;
      CHECK(sqztest::rel_err(m.bare_recoil, expected) < 1e-12);
      CHECK(sqztest::rel_err(recoil_bare(m, p, l), m.bare_recoil) < 1e-15);
    }
  });
}

TEST_CASE("recoil rate scaling laws") {
  const Particle p = silica_particle();
  const Laser l = default_laser();
  const auto base = derive_motion_modes(p, l);
  CHECK(base[2].bare_recoil / base[0].bare_recoil ==
        doctest::Approx(7.0 * base[0].frequency / base[2].frequency).epsilon(1e-12));

  // Doubling the power: |alpha0|^2 doubles, Omega grows by sqrt 2, r0^2 shrinks by sqrt 2.
  Laser l2 = l;
  l2.power *= 2.0;
  const auto doubled = derive_motion_modes(p, l2);
  for (int i = 0; i < 3; ++i) {
    CHECK(doubled[i].frequency / base[i].frequency == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(doubled[i].bare_recoil / base[i].bare_recoil == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }

  // Doubling the volume at fixed density: alpha and m double, Omega unchanged, so Gamma doubles.
  Particle p2 = p;
  p2.radius *= std::cbrt(2.0);
  const auto bigger = derive_motion_modes(p2, l);
  for (int i = 0; i < 3; ++i) {
    CHECK(bigger[i].frequency == doctest::Approx(base[i].frequency).epsilon(1e-12));
    CHECK(bigger[i].bare_recoil / base[i].bare_recoil == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("unit audit: consistent rescaling of lengths") {
  // Every length scaled by s at fixed P, rho and eps.
  const Particle p = silica_particle();
  const Laser l = default_laser();
  const double s = 1.7;
  Particle ps = p;
  ps.radius *= s;
  Laser ls = l;
  ls.waist *= s;
  ls.wavelength *= s;
  const auto a = derive_motion_modes(p, l);
  const auto b = derive_motion_modes(ps, ls);
  // Omega^2 ~ P / (rho W^4): Omega scales as s^-2. r0^2 ~ 1/(m Omega) ~ s^-3 s^2 = s^-1.
  // Gamma ~ P alpha^2 k0^5 r0^2 / W^2 ~ s^6 s^-5 s^-1 s^-2 = s^-2.
  for (int i = 0; i < 3; ++i) {
    CHECK(b[i].frequency / a[i].frequency == doctest::Approx(std::pow(s, -2)).epsilon(1e-12));
    CHECK(b[i].zero_point / a[i].zero_point == doctest::Approx(std::pow(s, -0.5)).epsilon(1e-12));
    CHECK(b[i].bare_recoil / a[i].bare_recoil == doctest::Approx(std::pow(s, -2)).epsilon(1e-12));
  }
}

TEST_CASE("silica defaults sit in the expected ranges") {
  const auto modes = derive_motion_modes(silica_particle(), default_laser());
  const double fx = modes[0].frequency / (2.0 * kPi);
  CHECK(fx > 1e5);
  CHECK(fx < 1e6);
  CHECK(modes[2].frequency < modes[0].frequency);
  CHECK(modes[2].bare_recoil < modes[2].frequency);
}

TEST_CASE("narrow waists trigger a paraxial warning") {
  int warnings = 0;
  auto previous = set_warning_handler([&](std::string_view) { ++warnings; });
  Laser l = default_laser();
  l.waist = 0.3e-6;
  derive_motion_modes(silica_particle(), l);
  set_warning_handler(previous);
  CHECK(warnings == 1);
}

TEST_CASE("libration frequency follows from the alignment potential") {
  // U = -(delta_alpha / 4) E0^2 cos^2(theta) gives I Omega^2 = delta_alpha E0^2 / 2.
  sqztest::for_all(50, 59, [](Gen& g, int) {
    const Rotor r = random_rotor(g);
    const Laser l = random_laser(g);
    const double e0_sq = 2.0 * intensity(l) / (kC * kEps0);
    const double expected = std::sqrt(r.delta_alpha() * e0_sq / (2.0 * r.moment_of_inertia));
    CHECK(libration_frequency(r, l) == doctest::Approx(expected).epsilon(1e-12));
    const auto modes = derive_libration_modes(r, l);
    CHECK(modes[0].frequency == modes[1].frequency);
    CHECK(modes[0].bare_recoil == modes[1].bare_recoil);
    CHECK(modes[0].axis == Axis::Y);
    CHECK(modes[1].axis == Axis::Z);
  });
}

TEST_CASE("libration recoil rate equals the sideband dipole emission rate") {
  // The angular zero-point motion modulates the dipole by delta_alpha r0 E0;
  // its Rayleigh emission rate in photons per second is the heating rate.
  sqztest::for_all(50, 61, [](Gen& g, int) {
    const Rotor r = random_rotor(g);
    const Laser l = random_laser(g);
    const double k0 = 2.0 * kPi / l.wavelength;
    for (const auto& m : derive_libration_modes(r, l)) {
      const double dipole = r.delta_alpha() * m.zero_point;
      const double sigma = std::pow(k0, 4) * dipole * dipole / (6.0 * kPi * kEps0 * kEps0);
      const double expected = intensity(l) * sigma / (kHbar * kC * k0);
      CHECK(sqztest::rel_err(m.bare_recoil, expected) < 1e-12);
      CHECK(m.zero_point * m.zero_point * 2.0 * r.moment_of_inertia * m.frequency ==
            doctest::Approx(kHbar).epsilon(1e-12));
    }
  });
}

TEST_CASE("libration scaling with the coherent amplitude") {
  const Rotor r{2e-32, 1e-32, 1e-34, 2.1};
  Laser l = default_laser();
  const auto a = derive_libration_modes(r, l);
  l.power *= 2.0;
  const auto b = derive_libration_modes(r, l);
  CHECK(b[0].frequency / a[0].frequency == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(b[0].bare_recoil / a[0].bare_recoil == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // Nearly isotropic particle: frequency and rate vanish with delta_alpha.
  const Rotor iso{1e-32 * (1.0 + 1e-10), 1e-32, 1e-34, 2.1};
  const auto c = derive_libration_modes(iso, default_laser());
  CHECK(c[0].frequency < 1e-4 * derive_libration_modes(r, default_laser())[0].frequency);
}

TEST_CASE("recoil prefactor is consistent with the target normalization") {
  // Integrating |sqrt(c^3 Gamma0 / (2 pi omega0^2)) A_mu|^2 over the sphere returns the prefactor.
  const Particle p = silica_particle();
  const Laser l = default_laser();
  for (const auto& m : derive_motion_modes(p, l)) {
    const auto a = make_motion_distribution(m.axis);
    const double pref = std::pow(kC, 3) * m.bare_recoil / (2.0 * kPi * std::pow(l.angular_frequency(), 2));
    const double integral = pref * norm_squared(a);
    CHECK(sqztest::rel_err(integral, pref) < 1e-8);
  }
}
