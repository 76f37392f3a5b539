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

#include <vector>

#include "sqzlev/physics.hpp"
#include "sqzlev/squeeze.hpp"
#include "sqzlev/table.hpp"

namespace sqzlev {

/// Input spectra pre-multiplied by 2 pi (vacuum: 1, 1, 0).
struct InputSpectra {
  double sxx = 1.0;
  double syy = 1.0;
  double scross = 0.0;

  double determinant() const { return sxx * syy - scross * scross; }
};

InputSpectra input_spectra(const OverlapResult& xi, const SqueezeParams& sq);
/// Same, parameterized by |xi| and Phi = phi_s - 2 psi.
InputSpectra input_spectra_relative(double xi_modulus, double r, double relative_phase);

/// chi~(omega) = Omega^2 / (Omega^2 - omega^2 - i gamma omega).
struct Susceptibility {
  double omega = 0.0;
  double mechanical_frequency = 1.0;
  double damping = 0.0;
  cplx chi_tilde{1.0, 0.0};

  static Susceptibility at(double omega, double mechanical_frequency, double damping);
  /// omega = 1e-3 Omega, gamma = 1e-6 Omega.
  static Susceptibility low_frequency(double mechanical_frequency = 1.0);
  /// omega = Omega, gamma = 1e-6 Omega.
  static Susceptibility resonance(double mechanical_frequency = 1.0);

  double modulus() const { return std::abs(chi_tilde); }
  /// Re chi~ / |chi~|.
  double real_fraction() const { return chi_tilde.real() / std::abs(chi_tilde); }
};

/// S_min / S_SQL = (1/2)[u |chi~| sxx + syy / (u |chi~|) - 2 (Re chi~ / |chi~|) scross].
double s_min(const InputSpectra& in, const Susceptibility& chi, double u);

struct OptimalU {
  double u = 0.0;
  double value = 0.0;
};

/// u = |chi~|^-1 sqrt(syy / sxx); value sqrt(sxx syy) - (Re chi~ / |chi~|) scross.
OptimalU s_min_opt_u(const InputSpectra& in, const Susceptibility& chi);

struct OptimalPhase {
  double relative_phase = 0.0;  // phi_s - 2 psi
  double phi_s = 0.0;           // absolute, in [0, 2 pi)
  double u = 0.0;
  double value = 0.0;
  /// False when an intermediate phase does better than the quadrature branch,
  /// i.e. |Re chi~| / |chi~| < 2 |xi|^2 s0 c0 / (1 + 2 |xi|^2 s0^2).
  bool global = true;
};

/// Compact two-branch optimum: relative phase 3 pi / 2 when Re chi~ >= 0 and
/// pi / 2 otherwise, value 1 - |xi|^2 + |xi|^2 sum_eta (e^{2 eta r} / 2)(1 - eta |Re chi~| / |chi~|).
OptimalPhase s_min_opt_u_phase(const OverlapResult& xi, double r, const Susceptibility& chi);

/// Exact minimum over u and phase. With A = 1 + 2 |xi|^2 s0^2, B = 2 |xi|^2 s0 c0 and
/// rho = Re chi~ / |chi~|: the compact branch when |rho| A > B, otherwise
/// sin Phi = -rho sqrt(A^2 - B^2) / (B sqrt(1 - rho^2)) with value sqrt((A^2 - B^2)(1 - rho^2)).
OptimalPhase s_min_opt_global(const OverlapResult& xi, double r, const Susceptibility& chi);

/// S_ba = r0^2 Gamma^(0) (sxx / 2 pi) |2 chi~ / Omega|^2. Requires gamma > 0.
double backaction_psd(const MechanicalMode& mode, const InputSpectra& in, const Susceptibility& chi);
/// S_c = r0 sqrt(Gamma^(0)) Re(2 chi~ / Omega) (2 scross / 2 pi). Requires gamma > 0.
double correlation_psd(const MechanicalMode& mode, const InputSpectra& in, const Susceptibility& chi);
/// Shot-noise term r0^2 S_YY / (4 Gamma^(0)) with S_YY = syy / 2 pi.
double imprecision_psd(const MechanicalMode& mode, const InputSpectra& in);
/// S_SQL = |chi~| r0^2 / (pi Omega).
double sql_psd(const MechanicalMode& mode, const Susceptibility& chi);
/// u = 4 Gamma^(0) / Omega.
double measurement_strength(const MechanicalMode& mode);

/// Curve of s_min over u for several spectra. Columns: u, then one per entry of `names`.
Table sensitivity_curve(const std::vector<InputSpectra>& spectra, const std::vector<std::string>& names,
                        const Susceptibility& chi, const std::vector<double>& u_grid);

/// Minimum over u of s_min at relative phase 3 pi / 2 on an (e^{2r}, |xi|) grid,
/// the low-frequency heatmap. Columns: e2r, xi, xi_sq, s_min_opt.
Table sensitivity_heatmap(const std::vector<double>& e2r_values, const std::vector<double>& xi_values,
                          const Susceptibility& chi);

/// Symmetric 2x2 covariance.
struct Covariance2 {
  double xx = 1.0;
  double xy = 0.0;
  double yy = 1.0;

  double determinant() const { return xx * yy - xy * xy; }
};

/// [[sxx, -scross], [-scross, syy]].
Covariance2 wigner_covariance_interacting(const InputSpectra& in);
/// <Q^2> = e^{2r} cos^2(phi/2) + e^{-2r} sin^2(phi/2), <P^2> likewise swapped,
/// <QP + PQ> / 2 = -sinh(2r) sin(phi).
Covariance2 wigner_covariance_bare(double r, double phi);

/// Throws NumericalFailure unless the covariance is positive definite.
void check_positive_definite(const Covariance2& c);

/// exp(-X . C^-1 . X / 2) / (2 pi sqrt(det C)).
double wigner_value(const Covariance2& c, double x, double y);

/// Square grid of n x n points over [-half_width, half_width]^2.
/// Columns: x, y, w; x outer.
Table wigner_grid(const Covariance2& c, double half_width, int n);

}  // namespace sqzlev
