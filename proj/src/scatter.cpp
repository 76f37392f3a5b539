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

#include "sqzlev/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "detail/parallel.hpp"
#include "detail/summation.hpp"
#include "sqzlev/error.hpp"
#include "sqzlev/physics.hpp"

namespace sqzlev {

using std::numbers::pi;

namespace {

CVec3 conj(const CVec3& v) { return {std::conj(v.x), std::conj(v.y), std::conj(v.z)}; }

}  // namespace

Scatterer::Scatterer(ScatterConfig config, CrossSectionUnits units)
    : config_(std::move(config)), units_(units) {
  if (!(config_.bare_recoil >= 0.0) || !std::isfinite(config_.bare_recoil))
    throw InvalidArgument("bare recoil rate must be >= 0");
  if (!std::isfinite(config_.alpha0.real()) || !std::isfinite(config_.alpha0.imag()))
    throw InvalidArgument("alpha0 must be finite");
  xi_ = compute_overlap(config_.beam, config_.target, config_.rule);
  const double s0 = config_.sq.s0(), c0 = config_.sq.c0();
  const double rel = config_.sq.phi - 2.0 * xi_.phase();
  g_ = xi_.xi * s0 * (s0 - c0 * std::polar(1.0, rel));

  const double a = std::abs(config_.alpha0);
  const cplx unit_phase = a > 0.0 ? config_.alpha0 / a : cplx(1.0);
  double magnitude = 1.0;
  if (units_ == CrossSectionUnits::Absolute)
    magnitude = std::sqrt(8.0 * pi * pi * pi * config_.bare_recoil / constants::kSpeedOfLight) * a;
  prefactor_plus_ = -std::conj(unit_phase) * magnitude;
  prefactor_minus_ = -unit_phase * magnitude;
}

double Scatterer::unit_scale() const {
  if (units_ == CrossSectionUnits::Shape) return 1.0;
  return 8.0 * pi * pi * pi * std::norm(config_.alpha0) * config_.bare_recoil / constants::kSpeedOfLight;
}

std::pair<CVec3, CVec3> Scatterer::amplitude_vectors(const Vec3& k) const {
  const CVec3 a_mu = config_.target.field(k);
  const CVec3 a_s_conj = conj(config_.beam.field(k));
  const CVec3 plus = prefactor_plus_ * (a_mu + g_ * a_s_conj);
  const CVec3 minus = (prefactor_minus_ * std::conj(g_)) * a_s_conj;
  return {plus, minus};
}

ScatteringAmplitudes Scatterer::amplitudes(const Direction& dir, Polarization pol) const {
  const auto [plus, minus] = amplitude_vectors(dir.unit_vector());
  const Vec3 e = polarization_vector(dir, pol);
  return {project(plus, e), project(minus, e)};
}

double Scatterer::differential_cross_section(const Vec3& k) const {
  const auto [plus, minus] = amplitude_vectors(k);
  return norm_sq(plus) - norm_sq(minus);
}

double Scatterer::differential_cross_section(const Direction& dir) const {
  return differential_cross_section(dir.unit_vector());
}

double Scatterer::differential_cross_section(const Direction& dir, Polarization pol) const {
  const auto a = amplitudes(dir, pol);
  return std::norm(a.f_plus) - std::norm(a.f_minus);
}

double Scatterer::recoil_ratio() const { return sqzlev::recoil_ratio(xi_, config_.sq); }

double Scatterer::total_cross_section_expected() const { return unit_scale() * recoil_ratio(); }

double Scatterer::total_cross_section_numeric() const {
  const QuadratureRule rule = integration_rule(config_.beam, config_.target, config_.rule);
  const auto nodes = rule.nodes();
  std::vector<double> terms(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    terms[i] = nodes[i].weight * differential_cross_section(nodes[i].direction);
    if (!std::isfinite(terms[i]))
      throw NumericalFailure("non-finite cross section at quadrature node " + std::to_string(i));
  }
  return detail::pairwise_sum<double>(terms);
}

IrpGrid irp_grid(const Scatterer& scatterer, const IrpGridSpec& spec) {
  if (spec.n_theta < 2 || spec.n_phi < 2)
    throw InvalidArgument("IRP grid resolution must be at least 2x2");

  IrpMetadata meta;
  meta.xi = scatterer.overlap();
  meta.recoil_ratio = scatterer.recoil_ratio();
  meta.normalization = scatterer.total_cross_section_numeric();
  meta.normalization_expected = scatterer.total_cross_section_expected();
  if (!(meta.normalization > 0.0) || !std::isfinite(meta.normalization)) {
    std::ostringstream msg;
    msg << "IRP normalization integral is not positive (" << meta.normalization << ")";
    throw NumericalFailure(msg.str());
  }
  meta.normalization_relative_error =
      std::abs(meta.normalization - meta.normalization_expected) / std::abs(meta.normalization_expected);

  const std::size_t nt = static_cast<std::size_t>(spec.n_theta);
  const std::size_t np = static_cast<std::size_t>(spec.n_phi);
  std::vector<std::vector<double>> rows(nt * np);
  const double norm = meta.normalization;
  detail::parallel_for(nt, spec.threads, [&](std::size_t i) {
    const double theta = pi * static_cast<double>(i) / static_cast<double>(nt - 1);
    for (std::size_t j = 0; j < np; ++j) {
      const double phi = 2.0 * pi * static_cast<double>(j) / static_cast<double>(np);
      const Direction dir{theta, phi};
      const Vec3 k = dir.unit_vector();
      const auto [plus, minus] = scatterer.amplitude_vectors(k);
      const double fp = norm_sq(plus), fm = norm_sq(minus);
      const double ds = fp - fm;
      if (!std::isfinite(ds)) {
        std::ostringstream msg;
        msg << "non-finite cross section at theta=" << theta << ", phi=" << phi;
        throw NumericalFailure(msg.str());
      }
      const auto b = polarization_basis(dir);
      const double ds_t = std::norm(project(plus, b.e_theta)) - std::norm(project(minus, b.e_theta));
      const double ds_p = std::norm(project(plus, b.e_phi)) - std::norm(project(minus, b.e_phi));
      rows[i * np + j] = {theta, phi, ds, ds / norm, fp, fm, ds_t, ds_p};
    }
  });

  meta.dsigma_min = rows.front()[2];
  meta.dsigma_max = rows.front()[2];
  // Trapezoid in theta (sin weighting) and periodic rectangle rule in phi.
  std::vector<double> ring(nt, 0.0);
  const double dtheta = pi / static_cast<double>(nt - 1);
  const double dphi = 2.0 * pi / static_cast<double>(np);
  for (std::size_t i = 0; i < nt; ++i) {
    std::vector<double> ring_terms(np);
    for (std::size_t j = 0; j < np; ++j) {
      const auto& row = rows[i * np + j];
      meta.dsigma_min = std::min(meta.dsigma_min, row[2]);
      meta.dsigma_max = std::max(meta.dsigma_max, row[2]);
      ring_terms[j] = row[3];
    }
    const double end_factor = (i == 0 || i == nt - 1) ? 0.5 : 1.0;
    ring[i] = end_factor * std::sin(rows[i * np][0]) * dtheta * dphi * detail::pairwise_sum<double>(ring_terms);
  }
  meta.irp_grid_integral = detail::pairwise_sum<double>(ring);
  meta.has_negative = meta.dsigma_min < 0.0;

  IrpGrid grid;
  grid.table.columns = {"theta", "phi", "dsigma", "irp", "f_plus_sq", "f_minus_sq", "dsigma_theta", "dsigma_phi"};
  grid.table.rows = std::move(rows);
  grid.metadata = meta;
  return grid;
}

}  // namespace sqzlev
