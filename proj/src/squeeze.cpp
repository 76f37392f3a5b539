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

#include "sqzlev/squeeze.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "detail/parallel.hpp"
#include "sqzlev/error.hpp"

namespace sqzlev {

using std::numbers::pi;

double wrap_phase(double phi) {
  if (!std::isfinite(phi)) throw InvalidArgument("phase must be finite");
  double w = std::fmod(phi, 2.0 * pi);
  if (w < 0.0) w += 2.0 * pi;
  if (w >= 2.0 * pi) w = 0.0;
  return w;
}

SqueezeParams::SqueezeParams(double r_, double phi_) : r(r_), phi(wrap_phase(phi_)) {
  if (!(r_ >= 0.0) || !std::isfinite(r_)) throw InvalidArgument("squeezing degree r must be >= 0 and finite");
}

SqueezeParams SqueezeParams::relative_to(double r, double relative_phase, cplx xi) {
  return SqueezeParams(r, relative_phase + 2.0 * std::arg(xi));
}

double SqueezeParams::s0() const { return std::sinh(r); }
double SqueezeParams::c0() const { return std::cosh(r); }

double db_to_r(double db) {
  if (!(db >= 0.0) || !std::isfinite(db)) {
    std::ostringstream msg;
    msg << "squeezing in dB must be >= 0, got " << db;
    throw InvalidArgument(msg.str());
  }
  return db * std::log(10.0) / 20.0;
}

double r_to_db(double r) { return 20.0 * r / std::log(10.0); }

OverlapResult compute_overlap(const AngularDistribution& beam, const AngularDistribution& target,
                              const QuadratureRule& rule) {
  const cplx xi = overlap(beam, target, rule);
  if (std::abs(xi) > 1.0 + 1e-10) {
    std::ostringstream msg;
    msg << "overlap modulus " << std::abs(xi) << " exceeds 1";
    warn(msg.str());
  }
  return {xi};
}

double recoil_ratio_relative(double xi_modulus_sq, double r, double relative_phase) {
  const double h = 0.5 * relative_phase;
  const double s = std::sin(h), c = std::cos(h);
  return 1.0 - xi_modulus_sq * (1.0 - std::exp(2.0 * r) * s * s - std::exp(-2.0 * r) * c * c);
}

double recoil_ratio(const OverlapResult& xi, const SqueezeParams& sq) {
  return recoil_ratio_relative(std::norm(xi.xi), sq.r, sq.phi - 2.0 * xi.phase());
}

double cross_rate(const OverlapResult& xi_a, const OverlapResult& xi_b, double bare_a, double bare_b,
                  const SqueezeParams& sq, bool same_mode) {
  if (!(bare_a >= 0.0) || !(bare_b >= 0.0)) throw InvalidArgument("bare recoil rates must be >= 0");
  const double s0 = sq.s0(), c0 = sq.c0();
  const double bracket = s0 * s0 - s0 * c0 * std::cos(sq.phi - xi_a.phase() - xi_b.phase());
  const double off = 2.0 * std::sqrt(bare_a * bare_b) * xi_a.modulus() * xi_b.modulus() * bracket;
  return (same_mode ? bare_a : 0.0) + off;
}

Table recoil_sweep(const AngularDistribution& target, const std::vector<NamedBeam>& beams,
                   const SweepGrid& grid, const SweepOptions& options) {
  if (grid.db.empty() || grid.relative_phase.empty())
    throw InvalidArgument("sweep grid needs at least one squeezing degree and one phase");
  if (!options.include_perfect && beams.empty())
    throw InvalidArgument("sweep needs the perfect-overlap column or at least one beam");
  for (double db : grid.db) db_to_r(db);
  for (double p : grid.relative_phase)
    if (!std::isfinite(p)) throw InvalidArgument("sweep phase must be finite");

  std::vector<double> xi2(beams.size());
  detail::parallel_for(beams.size(), options.threads, [&](std::size_t b) {
    xi2[b] = std::norm(compute_overlap(beams[b].beam, target, options.rule).xi);
  });

  Table table;
  table.columns = {"r_db", "phase"};
  if (options.include_perfect) table.columns.push_back("ratio_perfect");
  for (const auto& b : beams) table.columns.push_back("ratio_" + b.name);

  for (double db : grid.db) {
    const double r = db_to_r(db);
    for (double phase : grid.relative_phase) {
      std::vector<double> row{db, phase};
      if (options.include_perfect) row.push_back(recoil_ratio_relative(1.0, r, phase));
      for (double x : xi2) row.push_back(recoil_ratio_relative(x, r, phase));
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

Table recoil_sweep(Axis motion_axis, const std::vector<NamedBeam>& beams, const SweepGrid& grid,
                   const SweepOptions& options) {
  return recoil_sweep(make_motion_distribution(motion_axis), beams, grid, options);
}

Table libration_recoil_sweep(Axis libration_axis, const std::vector<NamedBeam>& beams,
                             const SweepGrid& grid, const SweepOptions& options) {
  return recoil_sweep(make_libration_distribution(libration_axis), beams, grid, options);
}

Table reheating_trajectory(const MechanicalMode& mode, double ratio, double n0,
                           const std::vector<double>& times) {
  if (!(ratio >= 0.0) || !std::isfinite(ratio)) throw InvalidArgument("recoil ratio must be >= 0");
  if (!(n0 >= 0.0) || !std::isfinite(n0)) throw InvalidArgument("initial occupation must be >= 0");
  const double rate = ratio * mode.bare_recoil;
  Table table;
  table.columns = {"t", "n"};
  for (double t : times) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("trajectory times must be >= 0");
    table.rows.push_back({t, n0 + rate * t});
  }
  return table;
}

}  // namespace sqzlev
