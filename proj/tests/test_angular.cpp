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
#include <sstream>

#include "sqzlev/angular.hpp"
#include "sqzlev/error.hpp"
#include "support.hpp"

using namespace sqzlev;
using sqztest::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 random_unit(Gen& g) {
  const double c = g.uniform(-1.0, 1.0);
  const double p = g.uniform(0.0, 2.0 * kPi);
  const double s = std::sqrt(1.0 - c * c);
  return {s * std::cos(p), s * std::sin(p), c};
}

// Composite Simpson in cos(theta) times trapezoid in phi, in the lab frame.
// Only used as an independent reference; the library rule is never involved.
template <class F>
double simpson_sphere(F f, double c_lo, double c_hi, int nc, int np) {
  const double hc = (c_hi - c_lo) / nc;
  double total = 0.0;
  for (int i = 0; i <= nc; ++i) {
    const double c = c_lo + i * hc;
    const double wc = (i == 0 || i == nc) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    double ring = 0.0;
    for (int j = 0; j < np; ++j) {
      const double p = 2.0 * kPi * j / np;
      ring += f(Vec3{s * std::cos(p), s * std::sin(p), c});
    }
    total += wc * ring * (2.0 * kPi / np);
  }
  return total * hc / 3.0;
}

}  // namespace

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
  for (int n : {1, 2, 5, 16, 32}) {
    const auto [x, w] = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * std::pow(x[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("sphere rule reproduces moments for arbitrary poles") {
  sqztest::for_all(20, 11, [](Gen& g, int) {
    const QuadratureRule rule(16, 32, random_unit(g));
    double area = 0.0, m2 = 0.0, m222 = 0.0, odd = 0.0;
    for (const auto& node : rule.nodes()) {
      const Vec3 k = node.direction;
      area += node.weight;
      m2 += node.weight * k.x * k.x;
      m222 += node.weight * k.x * k.x * k.y * k.y * k.z * k.z;
      odd += node.weight * k.x * k.y * k.y;
    }
    CHECK(area == doctest::Approx(4.0 * kPi).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-13));
    CHECK(m222 == doctest::Approx(4.0 * kPi / 105.0).epsilon(1e-12));
    CHECK(std::abs(odd) < 1e-13);
  });
}

TEST_CASE("invalid rule sizes are rejected") {
  CHECK_THROWS_AS(QuadratureRule(3, 8), InvalidArgument);
  CHECK_THROWS_AS(QuadratureRule(0, 8), InvalidArgument);
  CHECK_THROWS_AS(QuadratureRule(8, 0), InvalidArgument);
}

TEST_CASE("motion patterns match the recoil-weighted dipole closed form") {
  // sum_pol |A_mu|^2 = (1 - k_x^2)(k_mu - delta_mu_z)^2 / N_mu with the
  // analytic integrals N = 8 pi / 15, 16 pi / 15, 56 pi / 15.
  const double n_mu[3] = {8.0 * kPi / 15.0, 16.0 * kPi / 15.0, 56.0 * kPi / 15.0};
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    const auto a = make_motion_distribution(axis, 0.3);
    const Vec3 e = unit_vector(axis);
    sqztest::for_all(50, 17, [&](Gen& g, int) {
      const Vec3 k = random_unit(g);
      const double recoil = dot(k, e) - (axis == Axis::Z ? 1.0 : 0.0);
      const double expected = (1.0 - k.x * k.x) * recoil * recoil / n_mu[static_cast<int>(axis)];
      CHECK(norm_sq(a.field(k)) == doctest::Approx(expected).epsilon(1e-12));
      CHECK(std::abs(bilinear(a.field(k), CVec3{k.x, k.y, k.z})) < 1e-14);
    });
  }
}

TEST_CASE("geometry factors follow from the normalization integrals") {
  // l_mu is the recoil-weighted pattern integral over the bare dipole integral 8 pi / 3.
  const QuadratureRule rule;
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    const Vec3 e = unit_vector(axis);
    const double shift = axis == Axis::Z ? 1.0 : 0.0;
    const cplx integral = integrate_field(
        [&](const Vec3& k) {
          const double d = dot(k, e) - shift;
          return cplx((1.0 - k.x * k.x) * d * d);
        },
        rule);
    CHECK(integral.real() / (8.0 * kPi / 3.0) == doctest::Approx(motion_geometry_factor(axis)).epsilon(1e-12));
  }
  CHECK(motion_geometry_factor(Axis::X) == doctest::Approx(0.2));
  CHECK(motion_geometry_factor(Axis::Y) == doctest::Approx(0.4));
  CHECK(motion_geometry_factor(Axis::Z) == doctest::Approx(1.4));
  CHECK(motion_geometry_factor(Axis::Z) / motion_geometry_factor(Axis::X) == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("motion and libration sets are orthonormal at default quadrature") {
  const QuadratureRule rule;
  const AngularDistribution motion[3] = {make_motion_distribution(Axis::X), make_motion_distribution(Axis::Y),
                                         make_motion_distribution(Axis::Z)};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const cplx v = overlap_hermitian(motion[i], motion[j], rule);
      CHECK(std::abs(v - cplx(i == j ? 1.0 : 0.0)) < 1e-8);
    }
  const AngularDistribution lib[2] = {make_libration_distribution(Axis::Y), make_libration_distribution(Axis::Z)};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const cplx v = overlap_hermitian(lib[i], lib[j], rule);
      CHECK(std::abs(v - cplx(i == j ? 1.0 : 0.0)) < 1e-8);
    }
  CHECK_THROWS_AS(make_libration_distribution(Axis::X), InvalidArgument);
}

TEST_CASE("libration pattern is a dipole donut around its axis") {
  const auto a = make_libration_distribution(Axis::Y);
  CHECK(norm_sq(a.field(kEy)) < 1e-30);
  sqztest::for_all(50, 23, [&](Gen& g, int) {
    const Vec3 k = random_unit(g);
    CHECK(norm_sq(a.field(k)) == doctest::Approx(3.0 / (8.0 * kPi) * (1.0 - k.y * k.y)).epsilon(1e-12));
  });
}

TEST_CASE("gaussian beams are normalized, transverse and cut at the hemisphere") {
  sqztest::for_all(20, 29, [](Gen& g, int) {
    GaussianBeam b;
    b.na = g.uniform(0.1, 1.0);
    b.axis = random_unit(g);
    b.polarization_angle = g.uniform(0.0, 2.0 * kPi);
    const auto beam = make_gaussian_beam(b);
    CHECK(norm_squared(beam) == doctest::Approx(1.0).epsilon(1e-12));
    const Vec3 k = random_unit(g);
    CHECK(std::abs(bilinear(beam.field(k), CVec3{k.x, k.y, k.z})) < 1e-14);
    if (dot(k, b.axis) < 0.0) CHECK(norm_sq(beam.field(k)) == 0.0);
    CHECK(std::abs(dot(beam_polarization(b), b.axis)) < 1e-14);
  });
  GaussianBeam full;
  full.support = BeamSupport::Full;
  const auto f = make_gaussian_beam(full);
  CHECK(norm_sq(f.field(kEz)) > 0.0);
  CHECK(norm_squared(f) == doctest::Approx(1.0).epsilon(1e-12));
  GaussianBeam bad;
  bad.na = 1.5;
  CHECK_THROWS_AS(make_gaussian_beam(bad), InvalidArgument);
  bad.na = 0.5;
  bad.axis = Vec3{0.0, 0.0, 0.0};
  CHECK_THROWS_AS(make_gaussian_beam(bad), InvalidArgument);
}

TEST_CASE("backward beam overlap agrees with an independent lab-frame integration") {
  // Closed-form fields written out here: beam -exp(-sin^2/NA^2) P_perp e_x on
  // the backward hemisphere, target i sqrt(3 / (8 pi l_z)) (k_z - 1) P_perp e_x.
  const double na = 0.9;
  auto beam_amp = [&](const Vec3& k) { return std::exp(-(1.0 - k.z * k.z) / (na * na)); };
  auto transverse_sq = [](const Vec3& k) { return 1.0 - k.x * k.x; };
  const double norm = simpson_sphere([&](const Vec3& k) { return beam_amp(k) * beam_amp(k) * transverse_sq(k); },
                                     -1.0, 0.0, 2000, 256);
  const double raw = simpson_sphere(
      [&](const Vec3& k) { return -beam_amp(k) * (k.z - 1.0) * transverse_sq(k); }, -1.0, 0.0, 2000, 256);
  const double xi_ref = raw * std::sqrt(3.0 / (8.0 * kPi * 1.4)) / std::sqrt(norm);

  GaussianBeam b;
  b.na = na;
  const cplx xi = overlap(make_gaussian_beam(b), make_motion_distribution(Axis::Z));
  CHECK(std::abs(xi) == doctest::Approx(std::abs(xi_ref)).epsilon(1e-9));
  CHECK(std::abs(xi.real()) < 1e-12);
}

TEST_CASE("overlap is symmetric, bilinear and bounded by one") {
  sqztest::for_all(30, 31, [](Gen& g, int) {
    GaussianBeam b1, b2;
    b1.na = g.uniform(0.1, 1.0);
    b1.axis = random_unit(g);
    b2.na = g.uniform(0.1, 1.0);
    b2.axis = random_unit(g);
    b2.support = g.coin() ? BeamSupport::Full : BeamSupport::Hemisphere;
    const auto a = make_gaussian_beam(b1);
    const auto c = make_gaussian_beam(b2);
    const cplx ab = overlap(a, c);
    CHECK(std::abs(ab - overlap(c, a)) < 1e-12);
    const cplx k(g.uniform(-2, 2), g.uniform(-2, 2));
    auto previous = set_warning_handler([](std::string_view) {});
    CHECK(std::abs(overlap(a.scaled(k), c) - k * ab) < 1e-12);
    set_warning_handler(previous);
    CHECK(std::abs(ab) <= 1.0 + 1e-10);
    const auto t = make_motion_distribution(static_cast<Axis>(g.integer(0, 2)), g.uniform(0.0, 6.0));
    CHECK(std::abs(overlap(a, t)) <= 1.0 + 1e-10);
  });
}

TEST_CASE("overlaps across two distinct cut planes converge") {
  const QuadratureRule fine(256, 512);
  sqztest::for_all(10, 37, [&](Gen& g, int) {
    GaussianBeam b1, b2;
    b1.na = g.uniform(0.2, 1.0);
    b1.axis = random_unit(g);
    b2.na = g.uniform(0.2, 1.0);
    b2.axis = random_unit(g);
    const auto a = make_gaussian_beam(b1);
    const auto c = make_gaussian_beam(b2);
    CHECK(!integration_rule(a, c, QuadratureRule()).is_tensor());
    CHECK(std::abs(overlap(a, c) - overlap(a, c, fine)) < 1e-9);
    const auto s = make_superposition({{cplx(g.uniform(0.1, 1.0)), a}, {cplx(0.0, g.uniform(0.1, 1.0)), c}});
    CHECK(norm_squared(s, fine) == doctest::Approx(1.0).epsilon(1e-9));
  });
  // A meridian-cut rule still integrates smooth moments exactly.
  const auto rule = QuadratureRule::for_cuts(16, 32, {kEx, Vec3{1.0, 1.0, 0.3}});
  double area = 0.0, m2 = 0.0;
  for (const auto& node : rule.nodes()) {
    area += node.weight;
    m2 += node.weight * node.direction.z * node.direction.z;
  }
  CHECK(area == doctest::Approx(4.0 * kPi).epsilon(1e-13));
  MESSAGE("meridian rule second moment error " << m2 - 4.0 * kPi / 3.0);
  CHECK(m2 == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(rule.nearest_node(kEz), InvalidArgument);
}

TEST_CASE("superposition is normalized and reduces to a single term") {
  GaussianBeam b1, b2;
  b2.axis = kEz;
  const auto a = make_gaussian_beam(b1);
  const auto c = make_gaussian_beam(b2);
  const auto s = make_superposition({{cplx(0.6, 0.0), a}, {cplx(0.0, 0.8), c}});
  CHECK(norm_squared(s) == doctest::Approx(1.0).epsilon(1e-12));
  const auto only = make_superposition({{cplx(2.0, 0.0), a}});
  const auto t = make_motion_distribution(Axis::Z);
  CHECK(std::abs(overlap(only, t) - overlap(a, t)) < 1e-12);
  CHECK_THROWS_AS(make_superposition({}), InvalidArgument);
}

TEST_CASE("tabulated distributions round-trip through the text format") {
  const QuadratureRule rule(32, 64);
  GaussianBeam b;
  b.na = 0.7;
  b.support = BeamSupport::Full;
  const auto beam = make_gaussian_beam(b, rule);
  std::stringstream text;
  write_tabulated(text, beam.scaled(cplx(0.0, 3.0)), rule);
  const auto loaded = load_tabulated(text, rule);
  CHECK(loaded.pre_normalization_norm == doctest::Approx(9.0).epsilon(1e-10));
  const auto t = make_motion_distribution(Axis::Z);
  CHECK(std::abs(overlap(loaded.distribution, t, rule) - cplx(0.0, 1.0) * overlap(beam, t, rule)) < 1e-9);

  std::stringstream missing("theta,phi,re_theta,im_theta,re_phi,im_phi\n0.1,0.2,1,0,0,0\n");
  CHECK_THROWS_AS(load_tabulated(missing, rule), InvalidArgument);
  std::stringstream garbage("theta,phi,re_theta,im_theta,re_phi,im_phi\nx,y,z\n");
  CHECK_THROWS_AS(load_tabulated(garbage, rule), InvalidArgument);
  CHECK_THROWS_AS(load_tabulated_file("/nonexistent/file.csv", rule), InvalidArgument);
}

TEST_CASE("non-finite integrands are reported") {
  CHECK_THROWS_AS(integrate_field([](const Vec3&) { return cplx(std::nan("")); }, QuadratureRule(8, 8)),
                  NumericalFailure);
}
