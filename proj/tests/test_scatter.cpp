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
#include "sqzlev/scatter.hpp"
#include "support.hpp"

using namespace sqzlev;
using sqztest::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 random_unit(Gen& g) {
  const double c = g.uniform(-1.0, 1.0), phi = g.uniform(0.0, 2.0 * kPi);
  const double s = std::sqrt(1.0 - c * c);
  return {s * std::cos(phi), s * std::sin(phi), c};
}

GaussianBeam beam_spec(double na, Vec3 axis = Vec3{0, 0, -1}, double pol = 0.0,
                       BeamSupport support = BeamSupport::Hemisphere) {
  GaussianBeam b;
  b.na = na;
  b.axis = axis;
  b.polarization_angle = pol;
  b.support = support;
  return b;
}

ScatterConfig base_config(double na, double db, double rel_phase, const QuadratureRule& rule,
                          AngularDistribution target = make_motion_distribution(Axis::Z)) {
  ScatterConfig c{target, make_gaussian_beam(beam_spec(na), rule), SqueezeParams(), cplx(1.0), 1.0, rule};
  const cplx xi = overlap(c.beam, c.target, rule);
  c.sq = SqueezeParams::relative_to(db_to_r(db), rel_phase, xi);
  return c;
}

// (1 - kx^2)(k_mu - delta_mu z)^2 / N_mu for a laser along +z polarized along x.
double motion_pattern(Axis axis, const Vec3& k) {
  const double n[3] = {8.0 * kPi / 15.0, 16.0 * kPi / 15.0, 56.0 * kPi / 15.0};
  const int i = static_cast<int>(axis);
  const double comp[3] = {k.x, k.y, k.z - 1.0};
  return (1.0 - k.x * k.x) * comp[i] * comp[i] / n[i];
}

double ratio_oracle(double xi_sq, double r, double rel) {
  const double s = std::sinh(r), c = std::cosh(r);
  return 1.0 - xi_sq + xi_sq * (1.0 + 2.0 * s * s - 2.0 * s * c * std::cos(rel));
}

}  // namespace

TEST_CASE("cross section integrates to the recoil ratio") {
  const QuadratureRule rule(64, 128);
  sqztest::for_all(20, 101, [&](Gen& g, int) {
    AngularDistribution target = g.coin() ? make_motion_distribution(static_cast<Axis>(g.integer(0, 2)))
                                          : make_libration_distribution(g.coin() ? Axis::Y : Axis::Z);
    const auto support = g.coin() ? BeamSupport::Hemisphere : BeamSupport::Full;
    const auto beam = make_gaussian_beam(
        beam_spec(g.uniform(0.2, 0.95), random_unit(g), g.uniform(0.0, kPi), support), rule);
    const double r = db_to_r(g.uniform(0.0, 15.0));
    const double rel = g.uniform(0.0, 2.0 * kPi);
    const cplx xi = overlap(beam, target, rule);
    ScatterConfig c{target, beam, SqueezeParams::relative_to(r, rel, xi), std::polar(g.uniform(0.1, 5.0), g.uniform(0.0, 6.0)),
                    1.0, rule};
    const Scatterer s(c);
    const double want = ratio_oracle(std::norm(xi), r, rel);
    CHECK(sqztest::rel_err(s.total_cross_section_numeric(), want) < 1e-6);
    CHECK(sqztest::rel_err(s.total_cross_section_expected(), want) < 1e-12);
  });
}

TEST_CASE("amplitudes match a direct evaluation") {
  const QuadratureRule rule(48, 96);
  sqztest::for_all(10, 103, [&](Gen& g, int) {
    const auto target = make_motion_distribution(static_cast<Axis>(g.integer(0, 2)));
    const auto beam = make_gaussian_beam(beam_spec(g.uniform(0.3, 0.9), random_unit(g), g.uniform(0.0, kPi)), rule);
    const double r = g.uniform(0.0, 2.0);
    const double phi_s = g.uniform(0.0, 2.0 * kPi);
    const cplx alpha0 = std::polar(g.uniform(0.5, 2.0), g.uniform(0.0, 6.0));
    const Scatterer s(ScatterConfig{target, beam, SqueezeParams(r, phi_s), alpha0, 1.0, rule});
    const cplx xi = overlap(beam, target, rule);
    const cplx gg = xi * std::sinh(r) * (std::sinh(r) - std::cosh(r) * std::polar(1.0, phi_s - 2.0 * std::arg(xi)));
    const cplx u = alpha0 / std::abs(alpha0);
    for (int n = 0; n < 20; ++n) {
      const Direction d = Direction::from_vector(random_unit(g));
      double total = 0.0;
      for (Polarization p : {Polarization::Theta, Polarization::Phi}) {
        const cplx am = target.amplitude(d, p), as = beam.amplitude(d, p);
        const cplx fp = -std::conj(u) * (am + std::conj(as) * gg);
        const cplx fm = -u * std::conj(as) * std::conj(gg);
        const auto got = s.amplitudes(d, p);
        CHECK(std::abs(got.f_plus - fp) < 1e-12 * (1.0 + std::abs(fp)));
        CHECK(std::abs(got.f_minus - fm) < 1e-12 * (1.0 + std::abs(fm)));
        CHECK(s.differential_cross_section(d, p) == doctest::Approx(std::norm(fp) - std::norm(fm)).epsilon(1e-10));
        total += std::norm(fp) - std::norm(fm);
      }
      CHECK(s.differential_cross_section(d) == doctest::Approx(total).epsilon(1e-10));
    }
  });
}

TEST_CASE("vacuum input gives the bare dipole pattern") {
  const QuadratureRule rule(32, 64);
  sqztest::for_all(200, 107, [&](Gen& g, int) {
    const Axis axis = static_cast<Axis>(g.integer(0, 2));
    ScatterConfig c = base_config(0.7, 0.0, 0.0, rule, make_motion_distribution(axis));
    const Scatterer s(c);
    const Vec3 k = random_unit(g);
    CHECK(s.differential_cross_section(k) == doctest::Approx(motion_pattern(axis, k)).epsilon(1e-12));
  });
}

TEST_CASE("outside the beam support the pattern is bare") {
  const QuadratureRule rule(32, 64);
  const Scatterer s(base_config(0.8, 13.0, 0.0, rule));
  sqztest::for_all(200, 109, [&](Gen& g, int) {
    Vec3 k = random_unit(g);
    if (k.z < 0.0) k.z = -k.z;
    if (k.z == 0.0) return;
    const auto [plus, minus] = s.amplitude_vectors(k);
    CHECK(norm_sq(minus) == 0.0);
    CHECK(s.differential_cross_section(k) == doctest::Approx(motion_pattern(Axis::Z, k)).epsilon(1e-12));
  });
}

TEST_CASE("libration pattern is a donut around its axis") {
  const QuadratureRule rule(32, 64);
  for (Axis axis : {Axis::Y, Axis::Z}) {
    const Scatterer s(base_config(0.5, 0.0, 0.0, rule, make_libration_distribution(axis)));
    const Vec3 e = unit_vector(axis);
    CHECK(s.differential_cross_section(e) == doctest::Approx(0.0));
    CHECK(s.differential_cross_section(-1.0 * e) == doctest::Approx(0.0));
    sqztest::for_all(50, 113, [&](Gen& g, int) {
      const Vec3 k = random_unit(g);
      const double kmu = dot(k, e);
      CHECK(s.differential_cross_section(k) == doctest::Approx(3.0 / (8.0 * kPi) * (1.0 - kmu * kmu)).epsilon(1e-12));
    });
  }
}

TEST_CASE("mirror symmetry for a beam aligned with the laser polarization") {
  const QuadratureRule rule(32, 64);
  const Scatterer s(base_config(0.8, 10.0, 0.7, rule));
  sqztest::for_all(200, 127, [&](Gen& g, int) {
    const Vec3 k = random_unit(g);
    const double v = s.differential_cross_section(k);
    CHECK(s.differential_cross_section(Vec3{k.x, -k.y, k.z}) == doctest::Approx(v).epsilon(1e-12));
    CHECK(s.differential_cross_section(Vec3{-k.x, k.y, k.z}) == doctest::Approx(v).epsilon(1e-12));
  });
}

TEST_CASE("coherent amplitude phase and modulus") {
  const QuadratureRule rule(32, 64);
  ScatterConfig c = base_config(0.8, 12.0, 0.4, rule);
  const Scatterer ref(c);
  c.alpha0 = std::polar(3.0, 1.1);
  const Scatterer shape(c);
  c.bare_recoil = 1234.0;
  const Scatterer absolute(c, CrossSectionUnits::Absolute);
  const double scale = 8.0 * kPi * kPi * kPi * 9.0 * 1234.0 / constants::kSpeedOfLight;
  CHECK(absolute.unit_scale() == doctest::Approx(scale).epsilon(1e-14));
  sqztest::for_all(100, 131, [&](Gen& g, int) {
    const Vec3 k = random_unit(g);
    const double v = ref.differential_cross_section(k);
    CHECK(shape.differential_cross_section(k) == doctest::Approx(v).epsilon(1e-12));
    CHECK(absolute.differential_cross_section(k) == doctest::Approx(scale * v).epsilon(1e-12));
  });
  CHECK(absolute.total_cross_section_numeric() == doctest::Approx(scale * ref.recoil_ratio()).epsilon(1e-7));
}

TEST_CASE("wider beams scatter less at the optimal phase") {
  const QuadratureRule rule(64, 128);
  double previous = 2.0;
  for (double na : {0.2, 0.4, 0.6, 0.8, 0.95}) {
    CAPTURE(na);
    const double total = Scatterer(base_config(na, 13.0, 0.0, rule)).total_cross_section_numeric();
    CHECK(total < previous);
    CHECK(total > std::pow(10.0, -1.3));
    previous = total;
  }
}

TEST_CASE("IRP grid") {
  const QuadratureRule rule(64, 128);
  const Scatterer s(base_config(0.9, 13.0, 0.0, rule));
  const IrpGrid grid = irp_grid(s, IrpGridSpec{91, 180, 2});
  const auto& m = grid.metadata;
  REQUIRE(grid.table.rows.size() == 91u * 180u);
  CHECK(grid.table.columns.size() == 8);
  CHECK(m.normalization_relative_error < 1e-6);
  CHECK(m.normalization == doctest::Approx(s.recoil_ratio()).epsilon(1e-6));
  // The equatorial row sits on the beam cut, so the equiangular estimate converges at first order.
  const double coarse_err = std::abs(m.irp_grid_integral - 1.0);
  const double fine_err = std::abs(irp_grid(s, IrpGridSpec{181, 180, 2}).metadata.irp_grid_integral - 1.0);
  MESSAGE("grid integral errors " << coarse_err << " " << fine_err);
  CHECK(coarse_err < 0.05);
  CHECK(fine_err < 0.6 * coarse_err);
  CHECK(m.has_negative == (m.dsigma_min < 0.0));
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < grid.table.rows.size(); ++i) {
    const auto& row = grid.table.rows[i];
    CHECK(row[0] == doctest::Approx(kPi * static_cast<double>(i / 180) / 90.0));
    CHECK(row[1] == doctest::Approx(2.0 * kPi * static_cast<double>(i % 180) / 180.0));
    CHECK(row[3] == doctest::Approx(row[2] / m.normalization).epsilon(1e-14));
    CHECK(row[2] == doctest::Approx(row[4] - row[5]).epsilon(1e-12).scale(1e-12));
    CHECK(row[2] == doctest::Approx(row[6] + row[7]).epsilon(1e-10).scale(1e-12));
    lo = std::min(lo, row[2]);
    hi = std::max(hi, row[2]);
  }
  CHECK(lo == m.dsigma_min);
  CHECK(hi == m.dsigma_max);
  const IrpGrid serial = irp_grid(s, IrpGridSpec{91, 180, 1});
  CHECK(serial.table.rows == grid.table.rows);
  CHECK_THROWS_AS(irp_grid(s, IrpGridSpec{1, 10, 1}), InvalidArgument);
}

TEST_CASE("scatterer input validation") {
  const QuadratureRule rule(16, 32);
  ScatterConfig c = base_config(0.5, 3.0, 0.0, rule);
  c.bare_recoil = -1.0;
  CHECK_THROWS_AS(Scatterer{c}, InvalidArgument);
  c.bare_recoil = 1.0;
  c.alpha0 = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(Scatterer{c}, InvalidArgument);
}
