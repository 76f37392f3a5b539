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

// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sqzlev/angular.hpp"
#include "sqzlev/detect.hpp"
#include "sqzlev/error.hpp"
#include "sqzlev/scatter.hpp"
#include "sqzlev/squeeze.hpp"

using namespace sqzlev;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : e_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(e_); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
  bool coin() { return uniform(0.0, 1.0) < 0.5; }

 private:
  std::mt19937_64 e_;
};

AngularDistribution backward_beam(double na, const QuadratureRule& rule, BeamSupport support, double pol = 0.0) {
  GaussianBeam b;
  b.na = na;
  b.polarization_angle = pol;
  b.support = support;
  return make_gaussian_beam(b, rule);
}

double ratio_for(const AngularDistribution& beam, const AngularDistribution& target, const QuadratureRule& rule,
                 double db, double rel) {
  return recoil_ratio_relative(std::norm(compute_overlap(beam, target, rule).xi), db_to_r(db), rel);
}

Outcome c1() {
  const double v = recoil_ratio_relative(1.0, db_to_r(15.0), 0.0);
  return {std::abs(v - 0.03162) <= 1e-4,
          fmt("ratio(|xi|=1, 15 dB, Phi=0) = %.6f, target 0.03162 +/- 1e-4 (suppression %.2f%%)", v, 100 * (1 - v))};
}

Outcome c2() {
  const double v = recoil_ratio_relative(1.0, db_to_r(15.0), kPi);
  return {std::abs(v - 31.62) <= 0.1, fmt("ratio(|xi|=1, 15 dB, Phi=pi) = %.4f, target 31.62 +/- 0.1", v)};
}

struct BeamRatios {
  double xi_sq, lo, hi, full_xi_sq, full_lo, full_hi;
};

BeamRatios motion_beam_ratios() {
  const QuadratureRule rule;
  const auto target = make_motion_distribution(Axis::Z);
  const auto hemi = backward_beam(0.9, rule, BeamSupport::Hemisphere);
  const auto full = backward_beam(0.9, rule, BeamSupport::Full);
  return {std::norm(compute_overlap(hemi, target, rule).xi), ratio_for(hemi, target, rule, 15, 0),
          ratio_for(hemi, target, rule, 15, kPi),         std::norm(compute_overlap(full, target, rule).xi),
          ratio_for(full, target, rule, 15, 0),           ratio_for(full, target, rule, 15, kPi)};
}

Outcome c3(const BeamRatios& b) {
  return {b.lo >= 0.35 && b.lo <= 0.45,
          fmt("z motion, NA 0.9 backward hemisphere beam, 15 dB, Phi=0: |xi|^2 = %.4f, ratio = %.4f, target "
              "[0.35, 0.45]; diagnostic full-sphere support: |xi|^2 = %.4f, ratio = %.4f",
              b.xi_sq, b.lo, b.full_xi_sq, b.full_lo)};
}

Outcome c4(const BeamRatios& b) {
  return {b.hi >= 17 && b.hi <= 23,
          fmt("same beam, Phi=pi: ratio = %.3f, target [17, 23]; diagnostic full-sphere support: ratio = %.3f", b.hi,
              b.full_hi)};
}

Outcome c5() {
  const QuadratureRule rule;
  const auto target = make_libration_distribution(Axis::Y);
  // An x-polarized beam has no overlap with the y libration pattern.
  const auto beam = backward_beam(0.8, rule, BeamSupport::Hemisphere, kPi / 2);
  const double lo = ratio_for(beam, target, rule, 15, 0), hi = ratio_for(beam, target, rule, 15, kPi);
  const double suppression = 1.0 - lo;
  return {suppression >= 0.35 && suppression <= 0.45 && hi >= 11 && hi <= 15,
          fmt("y libration, NA 0.8 y-polarized beam, 15 dB: suppression %.2f%% (target 35-45%%), enhancement %.3f (target 11-15)",
              100 * suppression, hi)};
}

Outcome c6() {
  Rng g(6);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double xi = g.uniform(0, 1), r = g.uniform(0, 3), phase = g.uniform(0, 2 * kPi);
    const double a = recoil_ratio_relative(xi * xi, r, phase);
    const double b = input_spectra_relative(xi, r, phase).sxx;
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  return {worst <= 1e-12, fmt("max |ratio - 2 pi S_XX| over 1000 samples = %.2e, tolerance 1e-12", worst)};
}

Outcome c7() {
  Rng g(7);
  const QuadratureRule rule;
  double worst_irp = 0.0, worst_abs = 0.0;
  for (int i = 0; i < 20; ++i) {
    const bool motion = g.coin();
    const auto target = motion ? make_motion_distribution(static_cast<Axis>(int(g.uniform(0, 3))))
                               : make_libration_distribution(g.coin() ? Axis::Y : Axis::Z);
    GaussianBeam b;
    b.na = g.uniform(0.2, 0.95);
    const double ct = g.uniform(-1, 1), ph = g.uniform(0, 2 * kPi), st = std::sqrt(1 - ct * ct);
    b.axis = Vec3{st * std::cos(ph), st * std::sin(ph), ct};
    b.polarization_angle = g.uniform(0, kPi);
    const auto beam = make_gaussian_beam(b, rule);
    ScatterConfig cfg{target, beam, SqueezeParams(db_to_r(g.uniform(0, 15)), g.uniform(0, 2 * kPi)),
                      std::polar(g.log_uniform(1e6, 1e12), g.uniform(0, 2 * kPi)), g.log_uniform(1e-2, 1e5), rule};
    const Scatterer s(cfg, CrossSectionUnits::Absolute);
    const double numeric = s.total_cross_section_numeric();
    const double expected = 8 * kPi * kPi * kPi * std::norm(cfg.alpha0) * cfg.bare_recoil * s.recoil_ratio() /
                            constants::kSpeedOfLight;
    // The pattern I = dsigma / ((2 pi)^3 |alpha0|^2 Gamma / c) integrates to one.
    worst_irp = std::max(worst_irp, std::abs(numeric / expected - 1.0));
    worst_abs = std::max(worst_abs, std::abs(numeric - expected) / expected);
  }
  return {worst_irp <= 1e-6 && worst_abs <= 1e-6,
          fmt("20 random configurations: max |int I dOmega - 1| = %.2e, max rel. error of int dsigma = %.2e, "
              "tolerance 1e-6",
              worst_irp, worst_abs)};
}

Outcome c8() {
  Rng g(8);
  const auto chi = Susceptibility::resonance();
  double min_sql = 1e300, min_det = 1e300, worst_pure = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double xi = g.uniform(0, 1), r = g.uniform(0, 3), phase = g.uniform(0, 2 * kPi);
    const auto in = input_spectra_relative(xi, r, phase);
    min_sql = std::min(min_sql, s_min_opt_u(in, chi).value);
    min_det = std::min(min_det, in.determinant());
    const auto pure = input_spectra_relative(1.0, r, phase);
    worst_pure = std::max(worst_pure, std::abs(pure.determinant() - 1.0));
  }
  return {min_sql >= 1 - 1e-10 && min_det >= 1 - 1e-10 && worst_pure <= 1e-8,
          fmt("min S_min/S_SQL at resonance = %.12f, min determinant = %.12f, max |det - 1| at |xi|=1 = %.2e", min_sql,
              min_det, worst_pure)};
}

Outcome c9() {
  Rng g(9);
  const auto chi = Susceptibility::low_frequency();
  double worst_closed = 0.0, worst_recoil = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double xi = g.uniform(0, 1), r = g.uniform(0, 3);
    const double v = s_min_opt_u(input_spectra_relative(xi, r, 1.5 * kPi), chi).value;
    worst_closed = std::max(worst_closed, std::abs(v - (1 - xi * xi * (1 - std::exp(-2 * r)))));
    worst_recoil = std::max(worst_recoil, std::abs(v - recoil_ratio_relative(xi * xi, r, 0.0)));
  }
  return {worst_closed <= 1e-12 && worst_recoil <= 1e-12,
          fmt("max deviation from 1-|xi|^2(1-e^-2r) = %.2e, from the Phi=0 recoil ratio = %.2e", worst_closed,
              worst_recoil)};
}

double golden(const std::function<double(double)>& f, double a, double b) {
  const double q = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - q * (b - a), d = a + q * (b - a), fc = f(c), fd = f(d);
  for (int i = 0; i < 200 && b - a > 1e-14 * (1 + std::abs(a)); ++i) {
    if (fc < fd) {
      b = d, d = c, fd = fc, c = b - q * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd, d = a + q * (b - a), fd = f(d);
    }
  }
  return std::min(fc, fd);
}

Outcome c10() {
  Rng g(10);
  double worst = 0.0;
  int counted = 0;
  while (counted < 1000) {
    const auto in = input_spectra_relative(g.uniform(0, 1), g.uniform(0, 2), g.uniform(0, 2 * kPi));
    const double w = g.coin() ? g.log_uniform(1e-3, 0.9) : g.log_uniform(1.1, 10.0);
    const auto chi = Susceptibility::at(w, 1.0, g.log_uniform(1e-6, 1e-1));
    const auto opt = s_min_opt_u(in, chi);
    if (opt.u < 1e-3 || opt.u > 1e3) continue;
    ++counted;
    const int n = 801;
    const double lo = std::log(1e-4), hi = std::log(1e4), step = (hi - lo) / (n - 1);
    auto f = [&](double lu) { return s_min(in, chi, std::exp(lu)); };
    int best = 0;
    double best_v = f(lo);
    for (int i = 1; i < n; ++i)
      if (const double v = f(lo + i * step); v < best_v) best_v = v, best = i;
    const double brute =
        std::min(best_v, golden(f, lo + std::max(0, best - 1) * step, lo + std::min(n - 1, best + 1) * step));
    worst = std::max(worst, std::abs(opt.value - brute) / std::abs(brute));
  }
  return {worst <= 1e-8, fmt("max relative deviation from grid + golden-section search over 1000 instances = %.2e", worst)};
}

Outcome c11() {
  const QuadratureRule rule;
  const AngularDistribution m[3] = {make_motion_distribution(Axis::X), make_motion_distribution(Axis::Y),
                                    make_motion_distribution(Axis::Z)};
  const AngularDistribution l[2] = {make_libration_distribution(Axis::Y), make_libration_distribution(Axis::Z)};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(overlap_hermitian(m[i], m[j], rule) - cplx(i == j)));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(overlap_hermitian(l[i], l[j], rule) - cplx(i == j)));
  // l_mu from the unnormalized pattern integrals relative to the bare dipole 8 pi / 3.
  double worst_l = 0.0;
  const double expected[3] = {0.2, 0.4, 1.4};
  for (int a = 0; a < 3; ++a) {
    const Vec3 e = unit_vector(static_cast<Axis>(a));
    const double shift = a == 2 ? 1.0 : 0.0;
    const double integral = integrate_field(
                                [&](const Vec3& k) {
                                  const double d = dot(k, e) - shift;
                                  return cplx((1 - k.x * k.x) * d * d);
                                },
                                rule)
                                .real();
    worst_l = std::max(worst_l, std::abs(integral / (8 * kPi / 3) - expected[a]));
    worst_l = std::max(worst_l, std::abs(motion_geometry_factor(static_cast<Axis>(a)) - expected[a]));
  }
  return {worst <= 1e-8 && worst_l <= 1e-8,
          fmt("max orthonormality defect = %.2e; max |l_mu - (1/5, 2/5, 7/5)| = %.2e", worst, worst_l)};
}

std::string slurp_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    all += f.filename().string() + "\n" + ss.str();
  }
  return all;
}

Outcome c12(const std::string& cli) {
  if (cli.empty() || !fs::exists(cli)) return {false, "command-line tool not found at '" + cli + "'"};
  const fs::path root = fs::temp_directory_path() / ("sqzlev_acceptance_" + std::to_string(::getpid()));
  const std::map<std::string, std::string> commands = {
      {"recoil", "recoil --db 0:15:5 --phase 0,pi --beam na=0.9 --perfect-overlap"},
      {"irp", "irp --db 13 --beam na=0.9 --grid 37x72"},
      {"sensitivity", "sensitivity --db 15 --phase 3pi/2 --beam na=0.8"},
      {"optimize", "optimize --db 15 --free na=0.2:0.95 --free phase=0:2pi --budget 80"},
      {"wigner", "wigner --db 15"},
  };
  int identical = 0;
  std::string failed;
  for (const auto& [name, args] : commands) {
    std::string outputs[2];
    bool ok = true;
    for (int k = 0; k < 2; ++k) {
      const fs::path out = root / (name + std::to_string(k));
      const std::string cmd = "\"" + cli + "\" --threads 2 --seed 17 --out \"" + out.string() + "\" " + args +
                              " > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) ok = false;
      else outputs[k] = slurp_dir(out);
    }
    if (ok && outputs[0] == outputs[1] && !outputs[0].empty()) ++identical;
    else failed += " " + name;
  }
  fs::remove_all(root);
  return {identical == int(commands.size()),
          fmt("%d of %zu commands byte-identical across repeated runs (seed 17, 2 threads)%s%s", identical,
              commands.size(), failed.empty() ? "" : "; differing:", failed.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";
#ifdef SQZLEV_CLI_PATH
  if (cli.empty()) cli = SQZLEV_CLI_PATH;
#endif
  set_warning_handler([](std::string_view) {});

  std::vector<std::function<Outcome()>> checks;
  checks.push_back(c1);
  checks.push_back(c2);
  const BeamRatios beam = motion_beam_ratios();
  checks.push_back([&] { return c3(beam); });
  checks.push_back([&] { return c4(beam); });
  checks.push_back(c5);
  checks.push_back(c6);
  checks.push_back(c7);
  checks.push_back(c8);
  checks.push_back(c9);
  checks.push_back(c10);
  checks.push_back(c11);
  checks.push_back([&] { return c12(cli); });

  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Outcome o;
    try {
      o = checks[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %2zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", int(checks.size()) - failures, checks.size());
  return failures == 0 ? 0 : 1;
}
