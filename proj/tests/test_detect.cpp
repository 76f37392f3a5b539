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

#include "sqzlev/detect.hpp"
#include "sqzlev/error.hpp"
#include "sqzlev/physics.hpp"
#include "sqzlev/squeeze.hpp"
#include "support.hpp"

using namespace sqzlev;
using sqztest::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

// Golden-section search on a unimodal function of one variable.
template <class F>
double golden_min(F f, double a, double b, int iterations = 200) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations && b - a > 1e-14 * (1.0 + std::abs(a)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::min(fc, fd);
}

// Log grid over [1e-4, 1e4] followed by golden-section refinement around the best node.
double brute_min_over_u(const InputSpectra& in, const Susceptibility& chi) {
  const int n = 801;
  const double lo = std::log(1e-4), hi = std::log(1e4), step = (hi - lo) / (n - 1);
  auto f = [&](double lu) { return s_min(in, chi, std::exp(lu)); };
  int best = 0;
  double best_v = f(lo);
  for (int i = 1; i < n; ++i) {
    const double v = f(lo + i * step);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const double a = lo + std::max(0, best - 1) * step;
  const double b = lo + std::min(n - 1, best + 1) * step;
  return std::min(best_v, golden_min(f, a, b));
}

Susceptibility random_chi(Gen& g) {
  const double omega = g.coin() ? g.log_uniform(1e-3, 0.9) : g.log_uniform(1.1, 10.0);
  return Susceptibility::at(g.coin() ? omega : -omega, 1.0, g.log_uniform(1e-6, 1e-1));
}

MechanicalMode test_mode(Gen& g) {
  MechanicalMode m;
  m.frequency = g.log_uniform(1e4, 1e7);
  m.zero_point = g.log_uniform(1e-13, 1e-10);
  m.bare_recoil = g.log_uniform(1e-1, 1e5);
  return m;
}

}  // namespace

TEST_CASE("input spectra equal the recoil ratio and respect the uncertainty bound") {
  sqztest::for_all(1000, 201, [](Gen& g, int) {
    const double xi = g.uniform(0.0, 1.0), r = g.uniform(0.0, 3.0), phase = g.uniform(0.0, 2.0 * kPi);
    const InputSpectra in = input_spectra_relative(xi, r, phase);
    CHECK(std::abs(in.sxx - recoil_ratio_relative(xi * xi, r, phase)) <= 1e-12 * in.sxx);
    CHECK(in.determinant() >= 1.0 - 1e-10);
    const InputSpectra pure = input_spectra_relative(1.0, r, phase);
    CHECK(std::abs(pure.determinant() - 1.0) <= 1e-8 * pure.sxx * pure.syy);
  });
  const InputSpectra vac = input_spectra_relative(0.7, 0.0, 1.0);
  CHECK(vac.sxx == 1.0);
  CHECK(vac.syy == 1.0);
  CHECK(vac.scross == 0.0);
  CHECK_THROWS_AS(input_spectra_relative(-0.1, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("input spectra in the absolute phase convention") {
  sqztest::for_all(200, 203, [](Gen& g, int) {
    const cplx xi = std::polar(g.uniform(0.0, 1.0), g.uniform(-kPi, kPi));
    const double r = g.uniform(0.0, 2.0), rel = g.uniform(0.0, 2.0 * kPi);
    const InputSpectra a = input_spectra({xi}, SqueezeParams::relative_to(r, rel, xi));
    const InputSpectra b = input_spectra_relative(std::abs(xi), r, rel);
    CHECK(a.sxx == doctest::Approx(b.sxx).epsilon(1e-12));
    CHECK(a.syy == doctest::Approx(b.syy).epsilon(1e-12));
    CHECK(a.scross == doctest::Approx(b.scross).epsilon(1e-12).scale(1.0));
  });
}

TEST_CASE("susceptibility") {
  const auto lf = Susceptibility::low_frequency(2.0);
  CHECK(1.0 - lf.real_fraction() < 1e-6);
  CHECK(lf.modulus() == doctest::Approx(1.0).epsilon(1e-5));
  const auto res = Susceptibility::resonance(2.0);
  CHECK(std::abs(res.real_fraction()) < 1e-12);
  CHECK(res.modulus() == doctest::Approx(1e6).epsilon(1e-9));
  sqztest::for_all(100, 207, [](Gen& g, int) {
    const double w = g.uniform(0.0, 5.0), gamma = g.log_uniform(1e-6, 1.0);
    const auto p = Susceptibility::at(w, 1.0, gamma);
    const auto m = Susceptibility::at(-w, 1.0, gamma);
    CHECK(m.chi_tilde.real() == doctest::Approx(p.chi_tilde.real()).epsilon(1e-14));
    CHECK(m.chi_tilde.imag() == doctest::Approx(-p.chi_tilde.imag()).epsilon(1e-14));
  });
  CHECK(Susceptibility::at(0.5, 1.0, 1e-3).real_fraction() > 0.0);
  CHECK(Susceptibility::at(1.5, 1.0, 1e-3).real_fraction() < 0.0);
  CHECK_THROWS_AS(Susceptibility::at(1.0, 1.0, 0.0), NumericalFailure);
  CHECK_THROWS_AS(Susceptibility::at(0.5, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("closed-form optimum over u matches a grid and golden-section search") {
  int counted = 0;
  sqztest::for_all(1500, 211, [&](Gen& g, int) {
    const auto in = input_spectra_relative(g.uniform(0.0, 1.0), g.uniform(0.0, 2.0), g.uniform(0.0, 2.0 * kPi));
    const auto chi = random_chi(g);
    const OptimalU opt = s_min_opt_u(in, chi);
    if (opt.u < 1e-3 || opt.u > 1e3) return;
    ++counted;
    const double brute = brute_min_over_u(in, chi);
    CHECK(sqztest::rel_err(opt.value, brute) < 1e-8);
    CHECK(s_min(in, chi, opt.u) == doctest::Approx(opt.value).epsilon(1e-12));
  });
  CHECK(counted >= 1000);
}

TEST_CASE("s_min is convex in log u") {
  sqztest::for_all(200, 213, [](Gen& g, int) {
    const auto in = input_spectra_relative(g.uniform(0.0, 1.0), g.uniform(0.0, 3.0), g.uniform(0.0, 2.0 * kPi));
    const auto chi = random_chi(g);
    const double h = 0.05;
    for (double lu = -6.0; lu <= 6.0; lu += 0.5) {
      const double a = s_min(in, chi, std::exp(lu - h)), b = s_min(in, chi, std::exp(lu)),
                   c = s_min(in, chi, std::exp(lu + h));
      CHECK(a + c - 2.0 * b > 0.0);
    }
  });
  CHECK_THROWS_AS(s_min(InputSpectra{}, Susceptibility::low_frequency(), 0.0), InvalidArgument);
}

TEST_CASE("standard quantum limit at resonance") {
  const auto chi = Susceptibility::resonance();
  sqztest::for_all(1000, 217, [&](Gen& g, int) {
    const auto in = input_spectra_relative(g.uniform(0.0, 1.0), g.uniform(0.0, 3.0), g.uniform(0.0, 2.0 * kPi));
    CHECK(s_min_opt_u(in, chi).value >= 1.0 - 1e-10);
  });
  CHECK(s_min_opt_u(InputSpectra{}, chi).value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("low-frequency sensitivity equals the optimal recoil ratio") {
  const auto chi = Susceptibility::low_frequency();
  sqztest::for_all(1000, 219, [&](Gen& g, int) {
    const double xi = g.uniform(0.0, 1.0), r = g.uniform(0.0, 3.0);
    const double v = s_min_opt_u(input_spectra_relative(xi, r, 1.5 * kPi), chi).value;
    CHECK(std::abs(v - (1.0 - xi * xi * (1.0 - std::exp(-2.0 * r)))) <= 1e-12);
    CHECK(std::abs(v - recoil_ratio_relative(xi * xi, r, 0.0)) <= 1e-12);
  });
}

TEST_CASE("compact phase optimum against a two-dimensional search") {
  int global = 0, local = 0;
  sqztest::for_all(150, 223, [&](Gen& g, int) {
    const cplx xi = std::polar(g.uniform(0.05, 1.0), g.uniform(-kPi, kPi));
    const double r = g.uniform(0.05, 1.5);
    // Half the samples sit near resonance, where |Re chi~| / |chi~| is small.
    const auto chi = g.coin() ? random_chi(g) : Susceptibility::at(g.uniform(0.95, 1.05), 1.0, 0.05);
    const OptimalPhase opt = s_min_opt_u_phase({xi}, r, chi);
    auto over_u = [&](double phi_s) {
      return brute_min_over_u(input_spectra({xi}, SqueezeParams(r, phi_s)), chi);
    };
    const int n = 360;
    int best = 0;
    double best_v = over_u(0.0);
    for (int i = 1; i < n; ++i) {
      const double v = over_u(2.0 * kPi * i / n);
      if (v < best_v) {
        best_v = v;
        best = i;
      }
    }
    const double brute = std::min(best_v, golden_min(over_u, 2.0 * kPi * (best - 1) / n, 2.0 * kPi * (best + 1) / n));
    const double at_phi = s_min_opt_u(input_spectra({xi}, SqueezeParams(r, opt.phi_s)), chi).value;
    CHECK(at_phi == doctest::Approx(opt.value).epsilon(1e-10));
    CHECK(s_min(input_spectra({xi}, SqueezeParams(r, opt.phi_s)), chi, opt.u) == doctest::Approx(opt.value).epsilon(1e-10));
    if (opt.global) {
      ++global;
      CHECK(sqztest::rel_err(opt.value, brute) < 1e-6);
    } else {
      // Outside its validity region the quadrature branch is beaten by an intermediate phase.
      ++local;
      CHECK(brute < opt.value);
    }
    const OptimalPhase exact = s_min_opt_global({xi}, r, chi);
    CHECK(sqztest::rel_err(exact.value, brute) < 1e-6);
    CHECK(exact.value <= opt.value + 1e-12);
    CHECK(exact.relative_phase >= 0.0);
    CHECK(exact.relative_phase < 2.0 * kPi);
    CHECK(s_min(input_spectra({xi}, SqueezeParams(r, exact.phi_s)), chi, exact.u) ==
          doctest::Approx(exact.value).epsilon(1e-10));
  });
  CHECK(global > 20);
  CHECK(local > 5);
}

TEST_CASE("compact optimum limits") {
  const auto lf = Susceptibility::low_frequency();
  const auto res = Susceptibility::resonance();
  sqztest::for_all(200, 227, [&](Gen& g, int) {
    const double xi = g.uniform(0.0, 1.0), r = g.uniform(0.0, 3.0);
    CHECK(s_min_opt_u_phase({cplx(xi)}, r, lf).value ==
          doctest::Approx(1.0 - xi * xi * (1.0 - std::exp(-2.0 * r))).epsilon(1e-9));
    CHECK(s_min_opt_u_phase({cplx(0.0)}, r, lf).value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s_min_opt_u_phase({cplx(xi)}, r, res).value ==
          doctest::Approx(std::cosh(2.0 * r) * xi * xi + 1.0 - xi * xi).epsilon(1e-12));
  });
  CHECK(s_min_opt_u_phase({cplx(0.5)}, 1.0, lf).relative_phase == doctest::Approx(1.5 * kPi));
  CHECK(s_min_opt_u_phase({cplx(0.5)}, 1.0, Susceptibility::at(2.0, 1.0, 1e-3)).relative_phase ==
        doctest::Approx(0.5 * kPi));
}

TEST_CASE("noise spectra reproduce the normalized sensitivity") {
  sqztest::for_all(300, 229, [](Gen& g, int) {
    const MechanicalMode mode = test_mode(g);
    const double phase = g.coin() ? (g.coin() ? 0.0 : kPi) : g.uniform(0.0, 2.0 * kPi);
    const auto in = input_spectra_relative(g.uniform(0.0, 1.0), g.uniform(0.0, 2.0), phase);
    const auto chi = Susceptibility::at(g.uniform(0.0, 3.0) * mode.frequency, mode.frequency,
                                        g.log_uniform(1e-6, 1e-1) * mode.frequency);
    const double corr = correlation_psd(mode, in, chi);
    const double total = imprecision_psd(mode, in) + backaction_psd(mode, in, chi) -
                         mode.zero_point * corr / std::sqrt(4.0 * mode.bare_recoil);
    const double u = measurement_strength(mode);
    CHECK(total / sql_psd(mode, chi) == doctest::Approx(s_min(in, chi, u)).epsilon(1e-10));
    if (phase == 0.0 || phase == kPi) CHECK(std::abs(corr) <= 1e-14 * std::sqrt(backaction_psd(mode, in, chi)));
  });
}

TEST_CASE("back-action and correlation spectra") {
  Gen g(231);
  const MechanicalMode mode = test_mode(g);
  const auto in = input_spectra_relative(0.8, 1.0, 1.2);
  const double w = mode.frequency, gamma = 1e-5 * w;
  const double dc = backaction_psd(mode, in, Susceptibility::at(0.0, w, gamma));
  const double peak = backaction_psd(mode, in, Susceptibility::at(w, w, gamma));
  CHECK(dc / peak == doctest::Approx(1e-10).epsilon(1e-9));
  InputSpectra doubled = in;
  doubled.sxx *= 2.0;
  const auto chi = Susceptibility::at(0.3 * w, w, gamma);
  CHECK(backaction_psd(mode, doubled, chi) == doctest::Approx(2.0 * backaction_psd(mode, in, chi)));
  CHECK(backaction_psd(mode, in, Susceptibility::at(100.0 * w, w, gamma)) <
        1e-7 * backaction_psd(mode, in, Susceptibility::at(0.0, w, gamma)));
  CHECK(std::abs(correlation_psd(mode, in, Susceptibility::at(w, w, gamma))) <
        1e-9 * std::abs(correlation_psd(mode, in, chi)));
  const double below = correlation_psd(mode, in, Susceptibility::at(0.9 * w, w, gamma));
  const double above = correlation_psd(mode, in, Susceptibility::at(1.1 * w, w, gamma));
  CHECK(below * above < 0.0);
  CHECK_THROWS_AS(backaction_psd(mode, in, Susceptibility::at(0.5 * w, w, 0.0)), InvalidArgument);
  MechanicalMode bad = mode;
  bad.bare_recoil = 0.0;
  CHECK_THROWS_AS(imprecision_psd(bad, in), InvalidArgument);
}

TEST_CASE("sensitivity curve and heatmap tables") {
  const auto chi = Susceptibility::low_frequency();
  const std::vector<InputSpectra> spectra{InputSpectra{}, input_spectra_relative(1.0, 1.0, 1.5 * kPi)};
  const Table curve = sensitivity_curve(spectra, {"vacuum", "perfect"}, chi, {0.1, 1.0, 10.0});
  REQUIRE(curve.columns == std::vector<std::string>{"u", "vacuum", "perfect"});
  REQUIRE(curve.rows.size() == 3);
  CHECK(curve.rows[1][1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(curve.rows[2][2] == doctest::Approx(s_min(spectra[1], chi, 10.0)));
  CHECK_THROWS_AS(sensitivity_curve(spectra, {"one"}, chi, {1.0}), InvalidArgument);

  const Table heat = sensitivity_heatmap({1.0, 10.0, 31.5}, {0.0, 0.5, 1.0}, chi);
  REQUIRE(heat.rows.size() == 9);
  for (const auto& row : heat.rows) {
    CHECK(row[2] == doctest::Approx(row[1] * row[1]));
    CHECK(row[3] == doctest::Approx(1.0 - row[2] * (1.0 - 1.0 / row[0])).epsilon(1e-9));
  }
  CHECK_THROWS_AS(sensitivity_heatmap({0.5}, {0.5}, chi), InvalidArgument);
  CHECK_THROWS_AS(sensitivity_heatmap({2.0}, {1.5}, chi), InvalidArgument);
}

TEST_CASE("Wigner covariances") {
  const Covariance2 vac = wigner_covariance_bare(0.0, 0.3);
  CHECK(vac.xx == doctest::Approx(1.0));
  CHECK(vac.yy == doctest::Approx(1.0));
  CHECK(wigner_value(vac, 0.0, 0.0) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-15));
  const Covariance2 c0 = wigner_covariance_bare(0.8, 0.0);
  CHECK(c0.xx == doctest::Approx(std::exp(1.6)));
  CHECK(c0.yy == doctest::Approx(std::exp(-1.6)));
  sqztest::for_all(300, 233, [](Gen& g, int) {
    const Covariance2 bare = wigner_covariance_bare(g.uniform(0.0, 3.0), g.uniform(-10.0, 10.0));
    CHECK(bare.determinant() == doctest::Approx(1.0).epsilon(1e-9));
    const auto in = input_spectra_relative(g.uniform(0.0, 1.0), g.uniform(0.0, 3.0), g.uniform(0.0, 2.0 * kPi));
    const Covariance2 c = wigner_covariance_interacting(in);
    CHECK(c.xy == -in.scross);
    // Direct Gaussian with the explicit inverse.
    const double x = g.uniform(-2.0, 2.0), y = g.uniform(-2.0, 2.0);
    const double det = c.xx * c.yy - c.xy * c.xy;
    const double ixx = c.yy / det, iyy = c.xx / det, ixy = -c.xy / det;
    const double want = std::exp(-0.5 * (ixx * x * x + 2.0 * ixy * x * y + iyy * y * y)) / (2.0 * kPi * std::sqrt(det));
    CHECK(wigner_value(c, x, y) == doctest::Approx(want).epsilon(1e-12));
  });
  CHECK_THROWS_AS(check_positive_definite(Covariance2{1.0, 2.0, 1.0}), NumericalFailure);
  CHECK_THROWS_AS(wigner_covariance_bare(-1.0, 0.0), InvalidArgument);
}

TEST_CASE("Wigner grid integrates to one") {
  sqztest::for_all(10, 237, [](Gen& g, int) {
    const auto in = input_spectra_relative(g.uniform(0.0, 1.0), g.uniform(0.0, 1.5), g.uniform(0.0, 2.0 * kPi));
    const Covariance2 c = wigner_covariance_interacting(in);
    const double tr = c.xx + c.yy, disc = std::sqrt(0.25 * (c.xx - c.yy) * (c.xx - c.yy) + c.xy * c.xy);
    const double smax = std::sqrt(0.5 * tr + disc), smin = std::sqrt(c.determinant() / (smax * smax));
    const double hw = 8.0 * smax;
    const int n = std::max(201, static_cast<int>(std::ceil(2.0 * hw / (0.25 * smin))) + 1);
    const Table t = wigner_grid(c, hw, n);
    REQUIRE(t.rows.size() == static_cast<std::size_t>(n) * n);
    const double h = 2.0 * hw / (n - 1);
    double sum = 0.0;
    for (const auto& row : t.rows) sum += row[2];
    CHECK(sum * h * h == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(t.rows.front()[0] == -hw);
    CHECK(t.rows.back()[1] == doctest::Approx(hw));
  });
  CHECK_THROWS_AS(wigner_grid(Covariance2{}, 1.0, 1), InvalidArgument);
}
