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

#include "sqzlev/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sqzlev/error.hpp"

namespace sqzlev {

using std::numbers::pi;

InputSpectra input_spectra_relative(double xi_modulus, double r, double relative_phase) {
  if (!(xi_modulus >= 0.0) || !std::isfinite(xi_modulus)) throw InvalidArgument("|xi| must be >= 0");
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("squeezing degree r must be >= 0");
  const double s0 = std::sinh(r), c0 = std::cosh(r);
  const double x2 = xi_modulus * xi_modulus;
  const double cp = std::cos(relative_phase), sp = std::sin(relative_phase);
  return {1.0 + 2.0 * x2 * s0 * (s0 - c0 * cp), 1.0 + 2.0 * x2 * s0 * (s0 + c0 * cp),
          -2.0 * x2 * s0 * c0 * sp};
}

InputSpectra input_spectra(const OverlapResult& xi, const SqueezeParams& sq) {
  return input_spectra_relative(xi.modulus(), sq.r, sq.phi - 2.0 * xi.phase());
}

Susceptibility Susceptibility::at(double omega, double mechanical_frequency, double damping) {
  if (!std::isfinite(omega)) throw InvalidArgument("omega must be finite");
  if (!(mechanical_frequency > 0.0) || !std::isfinite(mechanical_frequency))
    throw InvalidArgument("mechanical frequency must be positive");
  if (!(damping >= 0.0) || !std::isfinite(damping)) throw InvalidArgument("damping must be >= 0");
  const double w2 = mechanical_frequency * mechanical_frequency;
  const cplx denom(w2 - omega * omega, -damping * omega);
  if (denom == cplx(0.0, 0.0)) throw NumericalFailure("susceptibility pole at omega = Omega with zero damping");
  return {omega, mechanical_frequency, damping, w2 / denom};
}

Susceptibility Susceptibility::low_frequency(double mechanical_frequency) {
  return at(1e-3 * mechanical_frequency, mechanical_frequency, kDefaultDampingFraction * mechanical_frequency);
}

Susceptibility Susceptibility::resonance(double mechanical_frequency) {
  return at(mechanical_frequency, mechanical_frequency, kDefaultDampingFraction * mechanical_frequency);
}

double s_min(const InputSpectra& in, const Susceptibility& chi, double u) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    std::ostringstream msg;
    msg << "measurement strength u must be positive, got " << u;
    throw InvalidArgument(msg.str());
  }
  const double a = u * chi.modulus();
  return 0.5 * (a * in.sxx + in.syy / a - 2.0 * chi.real_fraction() * in.scross);
}

OptimalU s_min_opt_u(const InputSpectra& in, const Susceptibility& chi) {
  if (!(in.sxx > 0.0) || !(in.syy > 0.0)) throw InvalidArgument("input spectra must be positive");
  return {std::sqrt(in.syy / in.sxx) / chi.modulus(),
          std::sqrt(in.sxx * in.syy) - chi.real_fraction() * in.scross};
}

OptimalPhase s_min_opt_u_phase(const OverlapResult& xi, double r, const Susceptibility& chi) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("squeezing degree r must be >= 0");
  const double x2 = std::norm(xi.xi);
  const double rf = chi.real_fraction();
  const double abs_rf = std::abs(rf);
  OptimalPhase out;
  out.relative_phase = rf >= 0.0 ? 1.5 * pi : 0.5 * pi;
  out.phi_s = wrap_phase(out.relative_phase + 2.0 * xi.phase());
  out.value = 1.0 - x2 + x2 * (0.5 * std::exp(2.0 * r) * (1.0 - abs_rf) + 0.5 * std::exp(-2.0 * r) * (1.0 + abs_rf));
  out.u = s_min_opt_u(input_spectra_relative(std::sqrt(x2), r, out.relative_phase), chi).u;
  const double s0 = std::sinh(r), c0 = std::cosh(r);
  out.global = abs_rf >= 2.0 * x2 * s0 * c0 / (1.0 + 2.0 * x2 * s0 * s0);
  return out;
}

OptimalPhase s_min_opt_global(const OverlapResult& xi, double r, const Susceptibility& chi) {
  OptimalPhase out = s_min_opt_u_phase(xi, r, chi);
  if (out.global) return out;
  const double x2 = std::norm(xi.xi);
  const double s0 = std::sinh(r), c0 = std::cosh(r);
  const double a = 1.0 + 2.0 * x2 * s0 * s0, b = 2.0 * x2 * s0 * c0;
  const double rho = chi.real_fraction();
  const double gap = a * a - b * b;
  const double t = std::clamp(-rho * std::sqrt(gap) / (b * std::sqrt(1.0 - rho * rho)), -1.0, 1.0);
  out.relative_phase = wrap_phase(rho >= 0.0 ? 2.0 * pi + std::asin(t) : std::asin(t));
  out.phi_s = wrap_phase(out.relative_phase + 2.0 * xi.phase());
  out.value = std::sqrt(gap * (1.0 - rho * rho));
  out.u = s_min_opt_u(input_spectra_relative(std::sqrt(x2), r, out.relative_phase), chi).u;
  out.global = true;
  return out;
}

namespace {

void require_damped(const Susceptibility& chi) {
  if (!(chi.damping > 0.0)) throw InvalidArgument("PSD evaluation requires damping gamma > 0");
}

void require_mode(const MechanicalMode& mode) {
  if (!(mode.frequency > 0.0) || !(mode.zero_point > 0.0) || !(mode.bare_recoil > 0.0))
    throw InvalidArgument("mechanical mode needs positive frequency, zero-point amplitude and recoil rate");
}

}  // namespace

double backaction_psd(const MechanicalMode& mode, const InputSpectra& in, const Susceptibility& chi) {
  require_damped(chi);
  require_mode(mode);
  const double resp = std::norm(2.0 * chi.chi_tilde / mode.frequency);
  return mode.zero_point * mode.zero_point * mode.bare_recoil * (in.sxx / (2.0 * pi)) * resp;
}

double correlation_psd(const MechanicalMode& mode, const InputSpectra& in, const Susceptibility& chi) {
  require_damped(chi);
  require_mode(mode);
  const double resp = (2.0 * chi.chi_tilde / mode.frequency).real();
  return mode.zero_point * std::sqrt(mode.bare_recoil) * resp * (2.0 * in.scross / (2.0 * pi));
}

double imprecision_psd(const MechanicalMode& mode, const InputSpectra& in) {
  require_mode(mode);
  return mode.zero_point * mode.zero_point * (in.syy / (2.0 * pi)) / (4.0 * mode.bare_recoil);
}

double sql_psd(const MechanicalMode& mode, const Susceptibility& chi) {
  require_mode(mode);
  return chi.modulus() * mode.zero_point * mode.zero_point / (pi * mode.frequency);
}

double measurement_strength(const MechanicalMode& mode) {
  require_mode(mode);
  return 4.0 * mode.bare_recoil / mode.frequency;
}

Table sensitivity_curve(const std::vector<InputSpectra>& spectra, const std::vector<std::string>& names,
                        const Susceptibility& chi, const std::vector<double>& u_grid) {
  if (spectra.size() != names.size()) throw InvalidArgument("sensitivity curve: one name per spectrum");
  Table table;
  table.columns = {"u"};
  for (const auto& n : names) table.columns.push_back(n);
  for (double u : u_grid) {
    std::vector<double> row{u};
    for (const auto& s : spectra) row.push_back(s_min(s, chi, u));
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table sensitivity_heatmap(const std::vector<double>& e2r_values, const std::vector<double>& xi_values,
                          const Susceptibility& chi) {
  Table table;
  table.columns = {"e2r", "xi", "xi_sq", "s_min_opt"};
  for (double e2r : e2r_values) {
    if (!(e2r >= 1.0) || !std::isfinite(e2r)) throw InvalidArgument("e^{2r} values must be >= 1");
    const double r = 0.5 * std::log(e2r);
    for (double xi : xi_values) {
      if (!(xi >= 0.0 && xi <= 1.0)) throw InvalidArgument("|xi| values must lie in [0, 1]");
      const double v = s_min_opt_u_phase(OverlapResult{cplx(xi, 0.0)}, r, chi).value;
      table.rows.push_back({e2r, xi, xi * xi, v});
    }
  }
  return table;
}

Covariance2 wigner_covariance_interacting(const InputSpectra& in) {
  Covariance2 c{in.sxx, -in.scross, in.syy};
  check_positive_definite(c);
  return c;
}

Covariance2 wigner_covariance_bare(double r, double phi) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("squeezing degree r must be >= 0");
  if (!std::isfinite(phi)) throw InvalidArgument("squeezing phase must be finite");
  const double c = std::cos(0.5 * phi), s = std::sin(0.5 * phi);
  const double ep = std::exp(2.0 * r), em = std::exp(-2.0 * r);
  Covariance2 cov{ep * c * c + em * s * s, -std::sinh(2.0 * r) * std::sin(phi), ep * s * s + em * c * c};
  check_positive_definite(cov);
  return cov;
}

void check_positive_definite(const Covariance2& c) {
  const double det = c.determinant();
  if (!(c.xx > 0.0) || !(c.yy > 0.0) || !(det > 0.0) || !std::isfinite(det)) {
    std::ostringstream msg;
    msg << "covariance matrix is not positive definite (xx=" << c.xx << ", xy=" << c.xy << ", yy=" << c.yy
        << ")";
    throw NumericalFailure(msg.str());
  }
}

double wigner_value(const Covariance2& c, double x, double y) {
  const double det = c.determinant();
  const double q = (c.yy * x * x - 2.0 * c.xy * x * y + c.xx * y * y) / det;
  return std::exp(-0.5 * q) / (2.0 * pi * std::sqrt(det));
}

Table wigner_grid(const Covariance2& c, double half_width, int n) {
  check_positive_definite(c);
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw InvalidArgument("Wigner window must be positive");
  if (n < 2) throw InvalidArgument("Wigner grid needs at least 2 points per side");
  Table table;
  table.columns = {"x", "y", "w"};
  table.rows.reserve(static_cast<std::size_t>(n) * n);
  const double step = 2.0 * half_width / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double x = -half_width + i * step;
    for (int j = 0; j < n; ++j) {
      const double y = -half_width + j * step;
      table.rows.push_back({x, y, wigner_value(c, x, y)});
    }
  }
  return table;
}

}  // namespace sqzlev
