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

#include "sqzlev/sqzlev.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <fstream>
#include <mutex>
#include <new>
#include <sstream>
#include <string>

#include "sqzlev/angular.hpp"
#include "sqzlev/detect.hpp"
#include "sqzlev/error.hpp"
#include "sqzlev/optimize.hpp"
#include "sqzlev/physics.hpp"
#include "sqzlev/scatter.hpp"
#include "sqzlev/squeeze.hpp"
#include "sqzlev/table.hpp"

struct sqz_rule {
  sqzlev::QuadratureRule rule;
};

struct sqz_distribution {
  sqzlev::AngularDistribution dist;
};

struct sqz_table {
  sqzlev::Table table;
};

struct sqz_problem {
  sqzlev::OptimizationProblem problem;
};

struct sqz_opt_result {
  sqzlev::OptimizationResult result;
};

namespace {

using namespace sqzlev;

thread_local std::string g_last_error;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
sqz_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return SQZ_OK;
  } catch (const InvalidArgument& e) {
    g_last_error = e.what();
    return SQZ_ERR_INVALID_ARGUMENT;
  } catch (const NumericalFailure& e) {
    g_last_error = e.what();
    return SQZ_ERR_NUMERICAL;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return SQZ_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SQZ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
    return SQZ_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "internal error: unknown exception";
    return SQZ_ERR_INTERNAL;
  }
}

template <class T>
void need(T* p, const char* what) {
  if (!p) throw InvalidArgument(std::string("null pointer passed for ") + what);
}

Axis to_axis(sqz_axis a) {
  switch (a) {
    case SQZ_AXIS_X: return Axis::X;
    case SQZ_AXIS_Y: return Axis::Y;
    case SQZ_AXIS_Z: return Axis::Z;
  }
  throw InvalidArgument("invalid axis value");
}

sqz_axis from_axis(Axis a) {
  switch (a) {
    case Axis::X: return SQZ_AXIS_X;
    case Axis::Y: return SQZ_AXIS_Y;
    case Axis::Z: return SQZ_AXIS_Z;
  }
  return SQZ_AXIS_Z;
}

const QuadratureRule& rule_or_default(const sqz_rule* r) {
  static const QuadratureRule kDefault;
  return r ? r->rule : kDefault;
}

MechanicalMode to_mode(const sqz_mode& m) {
  MechanicalMode out;
  out.kind = m.kind == SQZ_MODE_LIBRATION ? ModeKind::Libration : ModeKind::Motion;
  out.axis = to_axis(m.axis);
  out.frequency = m.frequency;
  out.zero_point = m.zero_point;
  out.damping = m.damping;
  out.bare_recoil = m.bare_recoil;
  out.geometry_factor = m.geometry_factor;
  return out;
}

sqz_mode from_mode(const MechanicalMode& m) {
  return {m.kind == ModeKind::Libration ? SQZ_MODE_LIBRATION : SQZ_MODE_MOTION,
          from_axis(m.axis),
          m.frequency,
          m.zero_point,
          m.damping,
          m.bare_recoil,
          m.geometry_factor};
}

Particle to_particle(const sqz_particle& p) { return {p.radius, p.density, p.permittivity}; }
Laser to_laser(const sqz_laser& l) { return {l.power, l.waist, l.wavelength, l.alpha0_phase}; }

InputSpectra to_spectra(const sqz_spectra& s) { return {s.sxx, s.syy, s.scross}; }

Susceptibility to_chi(const sqz_susceptibility& c) {
  return Susceptibility{c.omega, c.mechanical_frequency, c.damping, cplx(c.chi_re, c.chi_im)};
}

char* copy_string(const std::string& s, size_t* length) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  if (length) *length = s.size();
  return out;
}

std::mutex g_warning_mutex;
sqz_warning_fn g_warning_fn = nullptr;
void* g_warning_user = nullptr;

}  // namespace

extern "C" {

const char* sqz_version(void) { return "0.1.0"; }
const char* sqz_last_error(void) { return g_last_error.c_str(); }

void sqz_set_warning_callback(sqz_warning_fn fn, void* user) {
  {
    std::lock_guard lock(g_warning_mutex);
    g_warning_fn = fn;
    g_warning_user = user;
  }
  if (!fn) {
    set_warning_handler([](std::string_view msg) { std::fprintf(stderr, "warning: %.*s\n", int(msg.size()), msg.data()); });
    return;
  }
  set_warning_handler([](std::string_view msg) {
    sqz_warning_fn f;
    void* u;
    {
      std::lock_guard lock(g_warning_mutex);
      f = g_warning_fn;
      u = g_warning_user;
    }
    if (f) {
      const std::string text(msg);
      f(text.c_str(), u);
    }
  });
}

sqz_status sqz_rule_create(int n_theta, int n_phi, sqz_rule** out) {
  return guard([&] {
    need(out, "out");
    *out = new sqz_rule{QuadratureRule(n_theta, n_phi)};
  });
}

void sqz_rule_free(sqz_rule* rule) { delete rule; }
size_t sqz_rule_size(const sqz_rule* rule) { return rule ? rule->rule.size() : 0; }

sqz_beam_spec sqz_beam_spec_default(void) {
  sqz_beam_spec s{};
  s.na = 0.8;
  s.axis[2] = -1.0;
  return s;
}

sqz_status sqz_motion_distribution(sqz_axis axis, double arg_alpha0, sqz_distribution** out) {
  return guard([&] {
    need(out, "out");
    *out = new sqz_distribution{make_motion_distribution(to_axis(axis), arg_alpha0)};
  });
}

sqz_status sqz_libration_distribution(sqz_axis axis, double arg_alpha0, sqz_distribution** out) {
  return guard([&] {
    need(out, "out");
    *out = new sqz_distribution{make_libration_distribution(to_axis(axis), arg_alpha0)};
  });
}

sqz_status sqz_gaussian_beam(const sqz_beam_spec* spec, const sqz_rule* rule, sqz_distribution** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "out");
    GaussianBeam b;
    b.na = spec->na;
    b.axis = {spec->axis[0], spec->axis[1], spec->axis[2]};
    b.polarization_angle = spec->polarization_angle;
    if (spec->has_polarization_vector)
      b.polarization_vector = Vec3{spec->polarization_vector[0], spec->polarization_vector[1],
                                   spec->polarization_vector[2]};
    b.support = spec->full_support ? BeamSupport::Full : BeamSupport::Hemisphere;
    *out = new sqz_distribution{make_gaussian_beam(b, rule_or_default(rule))};
  });
}

sqz_status sqz_superposition(size_t n, const double* coef_re, const double* coef_im,
                             const sqz_distribution* const* terms, const sqz_rule* rule, sqz_distribution** out) {
  return guard([&] {
    need(coef_re, "coef_re");
    need(coef_im, "coef_im");
    need(terms, "terms");
    need(out, "out");
    std::vector<std::pair<cplx, AngularDistribution>> list;
    for (size_t i = 0; i < n; ++i) {
      need(terms[i], "term");
      list.emplace_back(cplx(coef_re[i], coef_im[i]), terms[i]->dist);
    }
    *out = new sqz_distribution{make_superposition(list, rule_or_default(rule))};
  });
}

sqz_status sqz_load_tabulated(const char* path, const sqz_rule* rule, sqz_distribution** out,
                              double* pre_normalization_norm) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    std::ifstream in(path);
    if (!in) throw IoError(std::string("cannot open tabulated distribution '") + path + "'");
    auto loaded = load_tabulated(in, rule_or_default(rule), path);
    if (pre_normalization_norm) *pre_normalization_norm = loaded.pre_normalization_norm;
    *out = new sqz_distribution{std::move(loaded.distribution)};
  });
}

sqz_status sqz_tabulated_csv(const sqz_distribution* dist, const sqz_rule* rule, char** text, size_t* length) {
  return guard([&] {
    need(dist, "dist");
    need(text, "text");
    std::ostringstream out;
    write_tabulated(out, dist->dist, rule_or_default(rule));
    *text = copy_string(out.str(), length);
  });
}

const char* sqz_distribution_label(const sqz_distribution* dist) { return dist ? dist->dist.label().c_str() : ""; }
void sqz_distribution_free(sqz_distribution* dist) { delete dist; }

sqz_status sqz_overlap(const sqz_distribution* a, const sqz_distribution* b, const sqz_rule* rule, int hermitian,
                       double* re, double* im) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(re, "re");
    need(im, "im");
    const cplx v = hermitian ? overlap_hermitian(a->dist, b->dist, rule_or_default(rule))
                             : overlap(a->dist, b->dist, rule_or_default(rule));
    *re = v.real();
    *im = v.imag();
  });
}

sqz_status sqz_norm_squared(const sqz_distribution* a, const sqz_rule* rule, double* out) {
  return guard([&] {
    need(a, "a");
    need(out, "out");
    *out = norm_squared(a->dist, rule_or_default(rule));
  });
}

sqz_constants sqz_physical_constants(void) {
  return {constants::kHbar, constants::kSpeedOfLight, constants::kVacuumPermittivity};
}

sqz_status sqz_particle_properties(const sqz_particle* p, double* volume, double* mass, double* polarizability) {
  return guard([&] {
    need(p, "particle");
    const Particle particle = to_particle(*p);
    particle.validate();
    if (volume) *volume = particle.volume();
    if (mass) *mass = particle.mass();
    if (polarizability) *polarizability = particle.polarizability();
  });
}

sqz_status sqz_alpha0(const sqz_laser* laser, double* modulus_sq, double* omega0, double* k0) {
  return guard([&] {
    need(laser, "laser");
    const Laser l = to_laser(*laser);
    const Alpha0 a = derive_alpha0(l);
    if (modulus_sq) *modulus_sq = a.modulus_sq;
    if (omega0) *omega0 = l.angular_frequency();
    if (k0) *k0 = l.wavenumber();
  });
}

sqz_status sqz_motion_modes(const sqz_particle* p, const sqz_laser* laser, double damping_fraction,
                            sqz_mode out[3]) {
  return guard([&] {
    need(p, "particle");
    need(laser, "laser");
    need(out, "out");
    const auto modes = derive_motion_modes(to_particle(*p), to_laser(*laser), damping_fraction);
    for (int i = 0; i < 3; ++i) out[i] = from_mode(modes[i]);
  });
}

sqz_status sqz_libration_modes(const sqz_rotor* r, const sqz_laser* laser, double damping_fraction,
                               sqz_mode out[2]) {
  return guard([&] {
    need(r, "rotor");
    need(laser, "laser");
    need(out, "out");
    const Rotor rotor{r->alpha_parallel, r->alpha_perp, r->moment_of_inertia, r->permittivity};
    const auto modes = derive_libration_modes(rotor, to_laser(*laser), damping_fraction);
    for (int i = 0; i < 2; ++i) out[i] = from_mode(modes[i]);
  });
}

sqz_status sqz_db_to_r(double db, double* r) {
  return guard([&] {
    need(r, "r");
    *r = db_to_r(db);
  });
}

sqz_status sqz_recoil_ratio(double xi_re, double xi_im, double r, double phi_s, double* out) {
  return guard([&] {
    need(out, "out");
    *out = recoil_ratio(OverlapResult{cplx(xi_re, xi_im)}, SqueezeParams(r, phi_s));
  });
}

sqz_status sqz_recoil_ratio_relative(double xi_modulus_sq, double r, double relative_phase, double* out) {
  return guard([&] {
    need(out, "out");
    if (!(xi_modulus_sq >= 0.0)) throw InvalidArgument("|xi|^2 must be >= 0");
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("squeezing degree r must be >= 0");
    *out = recoil_ratio_relative(xi_modulus_sq, r, relative_phase);
  });
}

sqz_status sqz_cross_rate(double xi_a_re, double xi_a_im, double xi_b_re, double xi_b_im, double bare_a,
                          double bare_b, double r, double phi_s, int same_mode, double* out) {
  return guard([&] {
    need(out, "out");
    *out = cross_rate(OverlapResult{cplx(xi_a_re, xi_a_im)}, OverlapResult{cplx(xi_b_re, xi_b_im)}, bare_a, bare_b,
                      SqueezeParams(r, phi_s), same_mode != 0);
  });
}

sqz_status sqz_recoil_sweep(const sqz_distribution* target, size_t n_beams, const sqz_distribution* const* beams,
                            const char* const* names, const double* db, size_t n_db, const double* relative_phase,
                            size_t n_phase, int include_perfect, const sqz_rule* rule, int threads,
                            sqz_table** out) {
  return guard([&] {
    need(target, "target");
    need(db, "db");
    need(relative_phase, "relative_phase");
    need(out, "out");
    std::vector<NamedBeam> list;
    if (n_beams) {
      need(beams, "beams");
      need(names, "names");
    }
    for (size_t i = 0; i < n_beams; ++i) {
      need(beams[i], "beam");
      need(names[i], "name");
      list.push_back({names[i], beams[i]->dist});
    }
    SweepGrid grid{{db, db + n_db}, {relative_phase, relative_phase + n_phase}};
    SweepOptions opts;
    opts.include_perfect = include_perfect != 0;
    opts.rule = rule_or_default(rule);
    opts.threads = threads;
    *out = new sqz_table{recoil_sweep(target->dist, list, grid, opts)};
  });
}

sqz_status sqz_reheating_trajectory(const sqz_mode* mode, double ratio, double n0, const double* times, size_t n,
                                    sqz_table** out) {
  return guard([&] {
    need(mode, "mode");
    need(out, "out");
    if (n) need(times, "times");
    *out = new sqz_table{reheating_trajectory(to_mode(*mode), ratio, n0, {times, times + n})};
  });
}

sqz_scatter_spec sqz_scatter_spec_default(void) {
  sqz_scatter_spec s{};
  s.alpha0_modulus = 1.0;
  s.bare_recoil = 1.0;
  s.n_theta = 181;
  s.n_phi = 360;
  s.threads = 1;
  return s;
}

sqz_status sqz_irp_grid(const sqz_distribution* target, const sqz_distribution* beam, const sqz_scatter_spec* spec,
                        const sqz_rule* rule, sqz_table** out, sqz_irp_meta* meta) {
  return guard([&] {
    need(target, "target");
    need(beam, "beam");
    need(spec, "spec");
    need(out, "out");
    ScatterConfig cfg{target->dist, beam->dist, SqueezeParams(spec->r, spec->phi_s),
                      std::polar(spec->alpha0_modulus, spec->alpha0_phase), spec->bare_recoil,
                      rule_or_default(rule)};
    const Scatterer scatterer(cfg, spec->absolute_units ? CrossSectionUnits::Absolute : CrossSectionUnits::Shape);
    IrpGridSpec gs{spec->n_theta, spec->n_phi, spec->threads};
    IrpGrid grid = irp_grid(scatterer, gs);
    if (meta) {
      const auto& m = grid.metadata;
      *meta = {m.xi.xi.real(),
               m.xi.xi.imag(),
               scatterer.g().real(),
               scatterer.g().imag(),
               m.recoil_ratio,
               m.normalization,
               m.normalization_expected,
               m.normalization_relative_error,
               m.dsigma_min,
               m.dsigma_max,
               m.irp_grid_integral,
               scatterer.unit_scale(),
               m.has_negative ? 1 : 0};
    }
    *out = new sqz_table{std::move(grid.table)};
  });
}

sqz_status sqz_input_spectra(double xi_modulus, double r, double relative_phase, sqz_spectra* out) {
  return guard([&] {
    need(out, "out");
    const auto s = input_spectra_relative(xi_modulus, r, relative_phase);
    *out = {s.sxx, s.syy, s.scross};
  });
}

sqz_status sqz_susceptibility_at(double omega, double mechanical_frequency, double damping,
                                 sqz_susceptibility* out) {
  return guard([&] {
    need(out, "out");
    const auto c = Susceptibility::at(omega, mechanical_frequency, damping);
    *out = {c.omega, c.mechanical_frequency, c.damping, c.chi_tilde.real(), c.chi_tilde.imag()};
  });
}

sqz_status sqz_s_min(const sqz_spectra* in, const sqz_susceptibility* chi, double u, double* out) {
  return guard([&] {
    need(in, "spectra");
    need(chi, "chi");
    need(out, "out");
    *out = s_min(to_spectra(*in), to_chi(*chi), u);
  });
}

sqz_status sqz_s_min_opt_u(const sqz_spectra* in, const sqz_susceptibility* chi, double* u, double* value) {
  return guard([&] {
    need(in, "spectra");
    need(chi, "chi");
    const auto o = s_min_opt_u(to_spectra(*in), to_chi(*chi));
    if (u) *u = o.u;
    if (value) *value = o.value;
  });
}

sqz_status sqz_s_min_opt_u_phase(double xi_re, double xi_im, double r, const sqz_susceptibility* chi,
                                 double* relative_phase, double* phi_s, double* u, double* value, int* global) {
  return guard([&] {
    need(chi, "chi");
    const auto o = s_min_opt_u_phase(OverlapResult{cplx(xi_re, xi_im)}, r, to_chi(*chi));
    if (relative_phase) *relative_phase = o.relative_phase;
    if (phi_s) *phi_s = o.phi_s;
    if (u) *u = o.u;
    if (value) *value = o.value;
    if (global) *global = o.global ? 1 : 0;
  });
}

sqz_status sqz_s_min_opt_global(double xi_re, double xi_im, double r, const sqz_susceptibility* chi,
                                double* relative_phase, double* phi_s, double* u, double* value) {
  return guard([&] {
    need(chi, "chi");
    const auto o = s_min_opt_global(OverlapResult{cplx(xi_re, xi_im)}, r, to_chi(*chi));
    if (relative_phase) *relative_phase = o.relative_phase;
    if (phi_s) *phi_s = o.phi_s;
    if (u) *u = o.u;
    if (value) *value = o.value;
  });
}

sqz_status sqz_backaction_psd(const sqz_mode* mode, const sqz_spectra* in, const sqz_susceptibility* chi,
                              double* out) {
  return guard([&] {
    need(mode, "mode");
    need(in, "spectra");
    need(chi, "chi");
    need(out, "out");
    *out = backaction_psd(to_mode(*mode), to_spectra(*in), to_chi(*chi));
  });
}

sqz_status sqz_correlation_psd(const sqz_mode* mode, const sqz_spectra* in, const sqz_susceptibility* chi,
                               double* out) {
  return guard([&] {
    need(mode, "mode");
    need(in, "spectra");
    need(chi, "chi");
    need(out, "out");
    *out = correlation_psd(to_mode(*mode), to_spectra(*in), to_chi(*chi));
  });
}

sqz_status sqz_sensitivity_curve(size_t n, const sqz_spectra* spectra, const char* const* names,
                                 const sqz_susceptibility* chi, const double* u, size_t n_u, sqz_table** out) {
  return guard([&] {
    need(chi, "chi");
    need(out, "out");
    if (n) {
      need(spectra, "spectra");
      need(names, "names");
    }
    if (n_u) need(u, "u");
    std::vector<InputSpectra> list;
    std::vector<std::string> labels;
    for (size_t i = 0; i < n; ++i) {
      need(names[i], "name");
      list.push_back(to_spectra(spectra[i]));
      labels.emplace_back(names[i]);
    }
    *out = new sqz_table{sensitivity_curve(list, labels, to_chi(*chi), {u, u + n_u})};
  });
}

sqz_status sqz_sensitivity_heatmap(const double* e2r, size_t n_e2r, const double* xi, size_t n_xi,
                                   const sqz_susceptibility* chi, sqz_table** out) {
  return guard([&] {
    need(chi, "chi");
    need(out, "out");
    if (n_e2r) need(e2r, "e2r");
    if (n_xi) need(xi, "xi");
    *out = new sqz_table{sensitivity_heatmap({e2r, e2r + n_e2r}, {xi, xi + n_xi}, to_chi(*chi))};
  });
}

sqz_status sqz_wigner_covariance_interacting(const sqz_spectra* in, sqz_covariance* out) {
  return guard([&] {
    need(in, "spectra");
    need(out, "out");
    const auto c = wigner_covariance_interacting(to_spectra(*in));
    *out = {c.xx, c.xy, c.yy};
  });
}

sqz_status sqz_wigner_covariance_bare(double r, double phi, sqz_covariance* out) {
  return guard([&] {
    need(out, "out");
    const auto c = wigner_covariance_bare(r, phi);
    *out = {c.xx, c.xy, c.yy};
  });
}

sqz_status sqz_wigner_grid(const sqz_covariance* c, double half_width, int n, sqz_table** out) {
  return guard([&] {
    need(c, "covariance");
    need(out, "out");
    *out = new sqz_table{wigner_grid(Covariance2{c->xx, c->xy, c->yy}, half_width, n)};
  });
}

sqz_problem_options sqz_problem_options_default(void) {
  sqz_problem_options o{};
  o.objective = SQZ_OBJECTIVE_RECOIL_RATIO;
  o.target_kind = SQZ_MODE_MOTION;
  o.target_axis = SQZ_AXIS_Z;
  o.omega_ratio = 1e-3;
  o.damping_ratio = kDefaultDampingFraction;
  o.threads = 1;
  return o;
}

sqz_status sqz_problem_create(const sqz_problem_options* options, const sqz_rule* rule, sqz_problem** out) {
  return guard([&] {
    need(options, "options");
    need(out, "out");
    OptimizationProblem p;
    p.objective = options->objective == SQZ_OBJECTIVE_S_MIN_OPT ? Objective::SMinOpt : Objective::RecoilRatio;
    p.target_kind = options->target_kind == SQZ_MODE_LIBRATION ? ModeKind::Libration : ModeKind::Motion;
    p.target_axis = to_axis(options->target_axis);
    p.r = options->r;
    p.two_beams = options->two_beams != 0;
    p.perfect_overlap = options->perfect_overlap != 0;
    p.support = options->full_support ? BeamSupport::Full : BeamSupport::Hemisphere;
    p.omega_ratio = options->omega_ratio;
    p.damping_ratio = options->damping_ratio;
    p.threads = options->threads;
    p.rule = rule_or_default(rule);
    *out = new sqz_problem{std::move(p)};
  });
}

sqz_status sqz_problem_add_free(sqz_problem* p, const char* name, double lower, double upper) {
  return guard([&] {
    need(p, "problem");
    need(name, "name");
    if (!is_known_parameter(name)) throw InvalidArgument(std::string("unknown optimization parameter '") + name + "'");
    p->problem.free.push_back({name, lower, upper});
  });
}

sqz_status sqz_problem_set_fixed(sqz_problem* p, const char* name, double value) {
  return guard([&] {
    need(p, "problem");
    need(name, "name");
    if (!is_known_parameter(name)) throw InvalidArgument(std::string("unknown optimization parameter '") + name + "'");
    p->problem.fixed[name] = value;
  });
}

void sqz_problem_free(sqz_problem* p) { delete p; }

sqz_status sqz_optimize(const sqz_problem* p, size_t budget, uint64_t seed, sqz_opt_result** out) {
  return guard([&] {
    need(p, "problem");
    need(out, "out");
    *out = new sqz_opt_result{optimize(p->problem, budget, seed)};
  });
}

size_t sqz_opt_result_dimension(const sqz_opt_result* r) { return r ? r->result.names.size() : 0; }

const char* sqz_opt_result_name(const sqz_opt_result* r, size_t i) {
  return (r && i < r->result.names.size()) ? r->result.names[i].c_str() : "";
}

double sqz_opt_result_best(const sqz_opt_result* r, size_t i) {
  return (r && i < r->result.best_point.size()) ? r->result.best_point[i] : 0.0;
}

void sqz_opt_result_summary(const sqz_opt_result* r, double* best_value, double* xi_re, double* xi_im,
                            size_t* evaluations) {
  if (!r) return;
  if (best_value) *best_value = r->result.best_value;
  if (xi_re) *xi_re = r->result.xi.real();
  if (xi_im) *xi_im = r->result.xi.imag();
  if (evaluations) *evaluations = r->result.evaluations;
}

sqz_status sqz_opt_result_trace(const sqz_opt_result* r, sqz_table** out) {
  return guard([&] {
    need(r, "result");
    need(out, "out");
    *out = new sqz_table{r->result.trace_table()};
  });
}

void sqz_opt_result_free(sqz_opt_result* r) { delete r; }

sqz_status sqz_scan_1d(const sqz_problem* p, const char* parameter, double lower, double upper, int n,
                       sqz_table** out, sqz_scan_summary* summary) {
  return guard([&] {
    need(p, "problem");
    need(parameter, "parameter");
    need(out, "out");
    OptimizationProblem problem = p->problem;
    auto report = scan_1d(problem, parameter, lower, upper, n);
    if (summary)
      *summary = {report.argmin,  report.min_value, report.argmax, report.max_value, report.nondecreasing ? 1 : 0,
                  report.nonincreasing ? 1 : 0};
    *out = new sqz_table{std::move(report.table)};
  });
}

size_t sqz_table_rows(const sqz_table* t) { return t ? t->table.rows.size() : 0; }
size_t sqz_table_columns(const sqz_table* t) { return t ? t->table.columns.size() : 0; }

const char* sqz_table_column_name(const sqz_table* t, size_t column) {
  return (t && column < t->table.columns.size()) ? t->table.columns[column].c_str() : "";
}

double sqz_table_value(const sqz_table* t, size_t row, size_t column) {
  if (!t || row >= t->table.rows.size() || column >= t->table.rows[row].size())
    return std::numeric_limits<double>::quiet_NaN();
  return t->table.rows[row][column];
}

sqz_status sqz_table_csv(const sqz_table* t, char** text, size_t* length) {
  return guard([&] {
    need(t, "table");
    need(text, "text");
    std::ostringstream out;
    write_csv(out, t->table);
    *text = copy_string(out.str(), length);
  });
}

void sqz_table_free(sqz_table* t) { delete t; }
void sqz_string_free(char* s) { std::free(s); }

sqz_status sqz_format_number(double value, char* buffer, size_t size) {
  return guard([&] {
    need(buffer, "buffer");
    const std::string s = format_number(value);
    if (s.size() + 1 > size) throw InvalidArgument("format buffer too small");
    std::memcpy(buffer, s.c_str(), s.size() + 1);
  });
}

}  // extern "C"
