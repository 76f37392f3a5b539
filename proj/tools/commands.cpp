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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>

#include "cli.hpp"

namespace sqzcli {

namespace {

constexpr double kPi = std::numbers::pi;

json section(const RunContext& ctx, const std::string& name) {
  if (!ctx.config.contains(name)) return json::object();
  const json& s = ctx.config.at(name);
  if (!s.is_object()) config_error(name, "must be an object");
  return s;
}

double number_or(const json& s, const std::string& key, double fallback, const std::string& where) {
  return s.contains(key) ? json_scalar(s.at(key), where + "." + key) : fallback;
}

bool bool_or(const json& s, const std::string& key, bool fallback, const std::string& where) {
  if (!s.contains(key)) return fallback;
  if (!s.at(key).is_boolean()) config_error(where.empty() ? key : where + "." + key, "expected true or false");
  return s.at(key).get<bool>();
}

int int_or(const json& s, const std::string& key, int fallback, const std::string& where) {
  if (!s.contains(key)) return fallback;
  const json& v = s.at(key);
  if (!v.is_number_integer()) config_error(where + "." + key, "expected an integer");
  const long long n = v.get<long long>();
  if (n < 1 || n > 100000000) config_error(where + "." + key, "must be a positive integer");
  return static_cast<int>(n);
}

std::string string_or(const json& s, const std::string& key, const std::string& fallback, const std::string& where) {
  if (!s.contains(key)) return fallback;
  if (!s.at(key).is_string()) config_error(where + "." + key, "expected a string");
  return s.at(key).get<std::string>();
}

json xi_json(double re, double im) {
  return {{"re", re}, {"im", im}, {"modulus", std::hypot(re, im)}, {"phase", std::atan2(im, re)}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- target ----

struct Target {
  sqz_mode_kind kind = SQZ_MODE_MOTION;
  sqz_axis axis = SQZ_AXIS_Z;
};

sqz_axis parse_axis_name(const std::string& text, const std::string& field) {
  if (text == "x") return SQZ_AXIS_X;
  if (text == "y") return SQZ_AXIS_Y;
  if (text == "z") return SQZ_AXIS_Z;
  config_error(field, "expected x, y or z, got '" + text + "'");
}

const char* axis_name(sqz_axis a) { return a == SQZ_AXIS_X ? "x" : a == SQZ_AXIS_Y ? "y" : "z"; }

Target read_target(const RunContext& ctx) {
  const json s = section(ctx, "target");
  check_keys(s, {"kind", "axis"}, "target");
  Target t;
  const std::string kind = string_or(s, "kind", "motion", "target");
  if (kind == "motion") {
    t.kind = SQZ_MODE_MOTION;
  } else if (kind == "libration") {
    t.kind = SQZ_MODE_LIBRATION;
  } else {
    config_error("target.kind", "expected motion or libration, got '" + kind + "'");
  }
  t.axis = parse_axis_name(string_or(s, "axis", t.kind == SQZ_MODE_MOTION ? "z" : "y", "target"), "target.axis");
  if (t.kind == SQZ_MODE_LIBRATION && t.axis == SQZ_AXIS_X)
    config_error("target.axis", "libration is defined about y or z");
  return t;
}

json target_json(const Target& t) {
  return {{"kind", t.kind == SQZ_MODE_MOTION ? "motion" : "libration"}, {"axis", axis_name(t.axis)}};
}

// ---- physics ----

struct Physics {
  json report = json::object();
  std::optional<sqz_mode> mode;  // target mode when the material is known
  double alpha0_modulus_sq = 0.0;
  double alpha0_phase = 0.0;
};

json mode_json(const sqz_mode& m) {
  static const char* names[] = {"x", "y", "z"};
  return {{"kind", m.kind == SQZ_MODE_MOTION ? "motion" : "libration"},
          {"axis", names[m.axis]},
          {"frequency", m.frequency},
          {"frequency_hz", m.frequency / (2.0 * kPi)},
          {"zero_point", m.zero_point},
          {"damping", m.damping},
          {"bare_recoil", m.bare_recoil},
          {"geometry_factor", m.geometry_factor}};
}

Physics read_physics(const RunContext& ctx, const Target& target) {
  const json& cfg = ctx.config;
  const bool has_particle = cfg.contains("particle");
  const bool has_rotor = cfg.contains("rotor");
  if (has_particle && has_rotor) config_error("rotor", "give either particle or rotor, not both");
  if (has_rotor && target.kind == SQZ_MODE_MOTION) config_error("rotor", "a motion target needs a particle section");
  if (has_particle && target.kind == SQZ_MODE_LIBRATION)
    config_error("particle", "a libration target needs a rotor section");

  Physics ph;
  const json ls = section(ctx, "laser");
  check_keys(ls, {"power", "waist", "wavelength", "alpha0_phase"}, "laser");
  sqz_laser laser{number_or(ls, "power", 0.5, "laser"), number_or(ls, "waist", 0.7e-6, "laser"),
                  number_or(ls, "wavelength", 1064e-9, "laser"), number_or(ls, "alpha0_phase", 0.0, "laser")};
  double omega0 = 0.0, k0 = 0.0;
  check(sqz_alpha0(&laser, &ph.alpha0_modulus_sq, &omega0, &k0), "laser");
  ph.alpha0_phase = laser.alpha0_phase;
  ph.report["laser"] = {{"power", laser.power},
                        {"waist", laser.waist},
                        {"wavelength", laser.wavelength},
                        {"alpha0_phase", laser.alpha0_phase},
                        {"alpha0_modulus_sq", ph.alpha0_modulus_sq},
                        {"omega0", omega0},
                        {"k0", k0}};
  const double damping = cfg.contains("damping_fraction") ? json_scalar(cfg.at("damping_fraction"), "damping_fraction")
                                                          : 1e-6;
  ph.report["damping_fraction"] = damping;
  ph.report["target"] = target_json(target);

  if (target.kind == SQZ_MODE_MOTION) {
    const json ps = section(ctx, "particle");
    check_keys(ps, {"preset", "radius", "density", "permittivity"}, "particle");
    const std::string preset = string_or(ps, "preset", "silica", "particle");
    if (preset != "silica") config_error("particle.preset", "only 'silica' is available");
    sqz_particle p{number_or(ps, "radius", 70e-9, "particle"), number_or(ps, "density", 2200.0, "particle"),
                   number_or(ps, "permittivity", 2.1, "particle")};
    double volume = 0.0, mass = 0.0, alpha = 0.0;
    check(sqz_particle_properties(&p, &volume, &mass, &alpha), "particle");
    sqz_mode modes[3];
    check(sqz_motion_modes(&p, &laser, damping, modes), "particle");
    ph.report["particle"] = {{"preset", preset},         {"radius", p.radius},  {"density", p.density},
                             {"permittivity", p.permittivity}, {"volume", volume}, {"mass", mass},
                             {"polarizability", alpha}};
    ph.report["modes"] = json::array();
    for (const auto& m : modes) ph.report["modes"].push_back(mode_json(m));
    ph.mode = modes[target.axis];
  } else if (cfg.contains("rotor")) {
    const json rs = section(ctx, "rotor");
    check_keys(rs, {"alpha_parallel", "alpha_perp", "moment_of_inertia", "permittivity"}, "rotor");
    for (const char* k : {"alpha_parallel", "alpha_perp", "moment_of_inertia"})
      if (!rs.contains(k)) config_error(std::string("rotor.") + k, "required");
    sqz_rotor r{json_scalar(rs.at("alpha_parallel"), "rotor.alpha_parallel"),
                json_scalar(rs.at("alpha_perp"), "rotor.alpha_perp"),
                json_scalar(rs.at("moment_of_inertia"), "rotor.moment_of_inertia"),
                number_or(rs, "permittivity", 2.1, "rotor")};
    sqz_mode modes[2];
    check(sqz_libration_modes(&r, &laser, damping, modes), "rotor");
    ph.report["rotor"] = {{"alpha_parallel", r.alpha_parallel},
                          {"alpha_perp", r.alpha_perp},
                          {"delta_alpha", r.alpha_parallel - r.alpha_perp},
                          {"moment_of_inertia", r.moment_of_inertia},
                          {"permittivity", r.permittivity}};
    ph.report["modes"] = json::array({mode_json(modes[0]), mode_json(modes[1])});
    ph.mode = modes[target.axis == SQZ_AXIS_Y ? 0 : 1];
  }
  if (ph.mode) ph.report["target_mode"] = mode_json(*ph.mode);
  return ph;
}

DistPtr target_distribution(const Target& t, double alpha0_phase) {
  sqz_distribution* d = nullptr;
  if (t.kind == SQZ_MODE_MOTION) {
    check(sqz_motion_distribution(t.axis, alpha0_phase, &d), "target");
  } else {
    check(sqz_libration_distribution(t.axis, alpha0_phase, &d), "target");
  }
  return DistPtr(d);
}

// ---- beams ----

struct Beam {
  std::string label;
  DistPtr dist;
  json description;
};

void parse_axis_vector(const json& v, double out[3], const std::string& field) {
  if (v.is_array()) {
    if (v.size() != 3) config_error(field, "expected three components");
    for (int i = 0; i < 3; ++i) out[i] = json_scalar(v[static_cast<std::size_t>(i)], field);
    return;
  }
  if (!v.is_string()) config_error(field, "expected an axis name like -z or a 3-vector");
  std::string s = v.get<std::string>();
  double sign = 1.0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    sign = s[0] == '-' ? -1.0 : 1.0;
    s.erase(0, 1);
  }
  out[0] = out[1] = out[2] = 0.0;
  out[parse_axis_name(s, field)] = sign;
}

std::vector<Beam> read_beams(const RunContext& ctx) {
  std::vector<Beam> beams;
  if (!ctx.config.contains("beams")) return beams;
  const json& list = ctx.config.at("beams");
  if (!list.is_array()) config_error("beams", "expected a list of beam objects");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "beams[" + std::to_string(i) + "]";
    const json& b = list[i];
    check_keys(b, {"na", "axis", "polarization", "support", "label", "file"}, where);
    Beam beam;
    sqz_distribution* d = nullptr;
    if (b.contains("file")) {
      for (const char* k : {"na", "axis", "polarization", "support"})
        if (b.contains(k)) config_error(where + "." + k, "not allowed together with file");
      const std::string path = string_or(b, "file", "", where);
      double pre = 0.0;
      check(sqz_load_tabulated(path.c_str(), ctx.rule.get(), &d, &pre), where + ".file");
      beam.label = string_or(b, "label", "file" + std::to_string(i), where);
      beam.description = {{"file", path}, {"pre_normalization_norm", pre}};
    } else {
      sqz_beam_spec spec = sqz_beam_spec_default();
      spec.na = number_or(b, "na", spec.na, where);
      if (b.contains("axis")) parse_axis_vector(b.at("axis"), spec.axis, where + ".axis");
      if (b.contains("polarization")) {
        const json& p = b.at("polarization");
        if (p.is_array()) {
          spec.has_polarization_vector = 1;
          parse_axis_vector(p, spec.polarization_vector, where + ".polarization");
        } else if (p.is_string() && (p == "x" || p == "y")) {
          spec.polarization_angle = p == "x" ? 0.0 : kPi / 2.0;
        } else {
          spec.polarization_angle = json_scalar(p, where + ".polarization");
        }
      }
      const std::string support = string_or(b, "support", "hemisphere", where);
      if (support != "hemisphere" && support != "full")
        config_error(where + ".support", "expected hemisphere or full");
      spec.full_support = support == "full";
      check(sqz_gaussian_beam(&spec, ctx.rule.get(), &d), where);
      beam.label = string_or(b, "label", "na" + format_number(spec.na), where);
      beam.description = {{"na", spec.na},
                           {"axis", {spec.axis[0], spec.axis[1], spec.axis[2]}},
                           {"support", support}};
      if (spec.has_polarization_vector) {
        beam.description["polarization"] = {spec.polarization_vector[0], spec.polarization_vector[1],
                                            spec.polarization_vector[2]};
      } else {
        beam.description["polarization"] = spec.polarization_angle;
      }
    }
    beam.dist.reset(d);
    if (beam.label.empty() || beam.label.find_first_of(",\n\r\"") != std::string::npos)
      config_error(where + ".label", "must be non-empty without commas, quotes or newlines");
    if (!labels.insert(beam.label).second) config_error(where + ".label", "duplicate label '" + beam.label + "'");
    beam.description["label"] = beam.label;
    beams.push_back(std::move(beam));
  }
  return beams;
}

std::pair<double, double> overlap_of(const Beam& beam, const sqz_distribution* target, const RunContext& ctx) {
  double re = 0.0, im = 0.0;
  check(sqz_overlap(beam.dist.get(), target, ctx.rule.get(), 0, &re, &im), "beams." + beam.label);
  return {re, im};
}

// ---- squeezer ----

struct Squeezer {
  std::vector<double> db;
  std::vector<double> phase;
  bool absolute = false;
};

Squeezer read_squeezer(const RunContext& ctx) {
  const json s = section(ctx, "squeezer");
  check_keys(s, {"db", "r", "phase", "phase_mode"}, "squeezer");
  Squeezer sq;
  if (s.contains("db") && s.contains("r")) config_error("squeezer.r", "give either db or r, not both");
  if (s.contains("r")) {
    for (double r : json_values(s.at("r"), "squeezer.r")) {
      if (!(r >= 0.0)) config_error("squeezer.r", "must be >= 0");
      sq.db.push_back(r * 20.0 / std::log(10.0));
    }
  } else {
    sq.db = s.contains("db") ? json_values(s.at("db"), "squeezer.db") : std::vector<double>{15.0};
    for (double d : sq.db)
      if (!(d >= 0.0)) config_error("squeezer.db", "must be >= 0");
  }
  sq.phase = s.contains("phase") ? json_values(s.at("phase"), "squeezer.phase") : std::vector<double>{0.0};
  const std::string mode = string_or(s, "phase_mode", "relative", "squeezer");
  if (mode != "relative" && mode != "absolute")
    config_error("squeezer.phase_mode", "expected relative or absolute");
  sq.absolute = mode == "absolute";
  return sq;
}

double single_r(const RunContext& ctx, const Squeezer& sq) {
  const json s = section(ctx, "squeezer");
  const std::string field = s.contains("r") ? "squeezer.r" : "squeezer.db";
  if (sq.db.size() != 1) config_error(field, "this command takes a single value");
  if (s.contains("r")) return json_values(s.at("r"), field).front();
  double r = 0.0;
  check(sqz_db_to_r(sq.db.front(), &r), field);
  return r;
}

double single_phase(const Squeezer& sq) {
  if (sq.phase.size() != 1) config_error("squeezer.phase", "this command takes a single value");
  return sq.phase.front();
}

json squeezer_json(double r, double phase, bool absolute) {
  return {{"r", r}, {"db", r * 20.0 / std::log(10.0)}, {"phase", phase},
          {"phase_mode", absolute ? "absolute" : "relative"}};
}

std::vector<double> sorted_times(const json& t) {
  std::vector<double> times = json_values(t, "trajectory.t");
  for (double v : times)
    if (!(v >= 0.0)) config_error("trajectory.t", "times must be >= 0");
  return times;
}

}  // namespace

// ---------------------------------------------------------------- recoil

void cmd_recoil(RunContext& ctx) {
  const Target target = read_target(ctx);
  const Physics physics = read_physics(ctx, target);
  const Squeezer sq = read_squeezer(ctx);
  std::vector<Beam> beams = read_beams(ctx);
  const bool perfect = bool_or(ctx.config, "perfect_overlap", beams.empty(), "");
  if (!perfect && beams.empty()) config_error("beams", "no beams given and perfect_overlap is false");
  const DistPtr tdist = target_distribution(target, physics.alpha0_phase);

  json derived = physics.report;
  derived["squeezer"] = {{"db", sq.db}, {"phase", sq.phase}, {"phase_mode", sq.absolute ? "absolute" : "relative"}};
  derived["beams"] = json::array();
  std::vector<std::pair<double, double>> xis;
  for (const auto& b : beams) {
    xis.push_back(overlap_of(b, tdist.get(), ctx));
    json d = b.description;
    d["xi"] = xi_json(xis.back().first, xis.back().second);
    derived["beams"].push_back(d);
  }

  Table table;
  if (!sq.absolute) {
    std::vector<const sqz_distribution*> ptrs;
    std::vector<const char*> names;
    for (const auto& b : beams) {
      ptrs.push_back(b.dist.get());
      names.push_back(b.label.c_str());
    }
    sqz_table* t = nullptr;
    check(sqz_recoil_sweep(tdist.get(), beams.size(), ptrs.data(), names.data(), sq.db.data(), sq.db.size(),
                           sq.phase.data(), sq.phase.size(), perfect ? 1 : 0, ctx.rule.get(), ctx.threads, &t),
          "recoil");
    table = take_table(t);
  } else {
    table.columns = {"r_db", "phase"};
    if (perfect) table.columns.push_back("ratio_perfect");
    for (const auto& b : beams) table.columns.push_back("ratio_" + b.label);
    for (double db : sq.db) {
      double r = 0.0;
      check(sqz_db_to_r(db, &r), "squeezer.db");
      for (double phi : sq.phase) {
        std::vector<double> row{db, phi};
        double v = 0.0;
        if (perfect) {
          check(sqz_recoil_ratio(1.0, 0.0, r, phi, &v), "recoil");
          row.push_back(v);
        }
        for (const auto& [re, im] : xis) {
          check(sqz_recoil_ratio(re, im, r, phi, &v), "recoil");
          row.push_back(v);
        }
        table.rows.push_back(std::move(row));
      }
    }
  }

  std::optional<Table> trajectory;
  if (ctx.config.contains("trajectory")) {
    const json ts = section(ctx, "trajectory");
    check_keys(ts, {"n0", "t"}, "trajectory");
    if (!physics.mode) config_error("trajectory", "needs a particle or rotor section for absolute rates");
    if (table.rows.size() != 1) config_error("trajectory", "needs a single squeezing degree and phase");
    if (!ts.contains("t")) config_error("trajectory.t", "required");
    const double n0 = number_or(ts, "n0", 0.0, "trajectory");
    const std::vector<double> times = sorted_times(ts.at("t"));
    Table traj;
    traj.columns = {"t", "n_bare"};
    for (std::size_t c = 2; c < table.columns.size(); ++c) traj.columns.push_back("n_" + table.columns[c].substr(6));
    traj.rows.assign(times.size(), std::vector<double>(traj.columns.size()));
    for (std::size_t c = 1; c < traj.columns.size(); ++c) {
      const double ratio = c == 1 ? 1.0 : table.rows[0][c];
      sqz_table* t = nullptr;
      check(sqz_reheating_trajectory(&*physics.mode, ratio, n0, times.data(), times.size(), &t), "trajectory");
      const Table one = take_table(t);
      for (std::size_t i = 0; i < times.size(); ++i) {
        traj.rows[i][0] = one.rows[i][0];
        traj.rows[i][c] = one.rows[i][1];
      }
    }
    trajectory = std::move(traj);
  }

  write_atomic(ctx.out_dir, "recoil.csv", table.csv());
  if (trajectory) write_atomic(ctx.out_dir, "trajectory.csv", trajectory->csv());
  write_atomic(ctx.out_dir, "derived.json", dump(derived));
  write_atomic(ctx.out_dir, "config.json", dump(ctx.config));
}

// ---------------------------------------------------------------- irp

void cmd_irp(RunContext& ctx) {
  const Target target = read_target(ctx);
  const Physics physics = read_physics(ctx, target);
  const Squeezer sq = read_squeezer(ctx);
  std::vector<Beam> beams = read_beams(ctx);
  if (bool_or(ctx.config, "perfect_overlap", false, ""))
    config_error("perfect_overlap", "irp needs an explicit beam profile");
  if (beams.size() > 1) config_error("beams", "irp takes a single beam");
  if (beams.empty()) {
    sqz_beam_spec spec = sqz_beam_spec_default();
    sqz_distribution* d = nullptr;
    check(sqz_gaussian_beam(&spec, ctx.rule.get(), &d), "beams");
    beams.push_back(Beam{"na" + format_number(spec.na), DistPtr(d),
                         {{"na", spec.na}, {"axis", {0.0, 0.0, -1.0}}, {"polarization", 0.0}, {"support", "hemisphere"}}});
  }
  const Beam& beam = beams.front();
  const DistPtr tdist = target_distribution(target, physics.alpha0_phase);

  const json s = section(ctx, "irp");
  check_keys(s, {"n_theta", "n_phi", "units"}, "irp");
  sqz_scatter_spec spec = sqz_scatter_spec_default();
  spec.n_theta = int_or(s, "n_theta", spec.n_theta, "irp");
  spec.n_phi = int_or(s, "n_phi", spec.n_phi, "irp");
  spec.threads = ctx.threads;
  const std::string units = string_or(s, "units", "shape", "irp");
  if (units != "shape" && units != "absolute") config_error("irp.units", "expected shape or absolute");
  spec.r = single_r(ctx, sq);
  const double phase = single_phase(sq);
  const auto [xre, xim] = overlap_of(beam, tdist.get(), ctx);
  const double psi = std::atan2(xim, xre);
  spec.phi_s = sq.absolute ? phase : phase + 2.0 * psi;
  spec.alpha0_phase = physics.alpha0_phase;
  if (units == "absolute") {
    if (!physics.mode) config_error("irp.units", "absolute units need a particle or rotor section");
    spec.absolute_units = 1;
    spec.alpha0_modulus = std::sqrt(physics.alpha0_modulus_sq);
    spec.bare_recoil = physics.mode->bare_recoil;
  }

  sqz_table* t = nullptr;
  sqz_irp_meta meta{};
  check(sqz_irp_grid(tdist.get(), beam.dist.get(), &spec, ctx.rule.get(), &t, &meta), "irp");
  const Table table = take_table(t);

  json info = {{"target", target_json(target)},
               {"beam", beam.description},
               {"squeezer", squeezer_json(spec.r, phase, sq.absolute)},
               {"phi_s", spec.phi_s},
               {"relative_phase", spec.phi_s - 2.0 * psi},
               {"units", units},
               {"grid", {{"n_theta", spec.n_theta}, {"n_phi", spec.n_phi}}},
               {"xi", xi_json(meta.xi_re, meta.xi_im)},
               {"g", {{"re", meta.g_re}, {"im", meta.g_im}}},
               {"recoil_ratio", meta.recoil_ratio},
               {"unit_scale", meta.unit_scale},
               {"normalization", meta.normalization},
               {"normalization_expected", meta.normalization_expected},
               {"normalization_relative_error", meta.normalization_relative_error},
               {"dsigma_min", meta.dsigma_min},
               {"dsigma_max", meta.dsigma_max},
               {"has_negative", meta.has_negative != 0},
               {"irp_grid_integral", meta.irp_grid_integral}};

  write_atomic(ctx.out_dir, "irp.csv", table.csv());
  write_atomic(ctx.out_dir, "irp.json", dump(info));
  write_atomic(ctx.out_dir, "derived.json", dump(physics.report));
  write_atomic(ctx.out_dir, "config.json", dump(ctx.config));
}

// ---------------------------------------------------------------- sensitivity

namespace {

struct OverlapSet {
  std::string name;
  double re = 0.0;
  double im = 0.0;
};

std::vector<double> u_grid(const json& s) {
  const json u = s.contains("u") ? s.at("u") : json::object();
  check_keys(u, {"min", "max", "n", "log"}, "sensitivity.u");
  const double lo = number_or(u, "min", 1e-3, "sensitivity.u");
  const double hi = number_or(u, "max", 1e3, "sensitivity.u");
  const int n = int_or(u, "n", 601, "sensitivity.u");
  const bool log = bool_or(u, "log", true, "sensitivity.u");
  if (!(lo > 0.0) || !(hi > lo)) config_error("sensitivity.u", "need 0 < min < max");
  if (n < 2) config_error("sensitivity.u.n", "need at least 2 points");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / (n - 1);
    out[static_cast<std::size_t>(i)] = log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
  }
  out.back() = hi;
  return out;
}

}  // namespace

void cmd_sensitivity(RunContext& ctx) {
  const Target target = read_target(ctx);
  const Physics physics = read_physics(ctx, target);
  const Squeezer sq = read_squeezer(ctx);
  std::vector<Beam> beams = read_beams(ctx);
  const json s = section(ctx, "sensitivity");
  check_keys(s, {"u", "omega_ratio", "damping_ratio", "xi", "heatmap"}, "sensitivity");
  const bool perfect = bool_or(ctx.config, "perfect_overlap", beams.empty() && !s.contains("xi"), "");
  const double r = single_r(ctx, sq);
  const double omega_ratio = number_or(s, "omega_ratio", 1e-3, "sensitivity");
  const double damping_ratio = number_or(s, "damping_ratio", 1e-6, "sensitivity");
  sqz_susceptibility chi{};
  check(sqz_susceptibility_at(omega_ratio, 1.0, damping_ratio, &chi), "sensitivity.omega_ratio");
  const std::vector<double> u = u_grid(s);

  std::vector<OverlapSet> sets{{"vacuum", 0.0, 0.0}};
  if (perfect) sets.push_back({"perfect", 1.0, 0.0});
  const DistPtr tdist = target_distribution(target, physics.alpha0_phase);
  for (const auto& b : beams) {
    const auto [re, im] = overlap_of(b, tdist.get(), ctx);
    sets.push_back({b.label, re, im});
  }
  if (s.contains("xi")) {
    for (double x : json_values(s.at("xi"), "sensitivity.xi")) {
      if (!(x >= 0.0 && x <= 1.0)) config_error("sensitivity.xi", "overlap moduli must lie in [0, 1]");
      sets.push_back({"xi" + format_number(x), x, 0.0});
    }
  }
  std::set<std::string> seen;
  for (const auto& set : sets)
    if (!seen.insert(set.name).second) config_error("beams", "duplicate curve name '" + set.name + "'");

  std::vector<sqz_spectra> spectra;
  std::vector<std::string> names;
  json curves = json::array();
  json optima = json::array();
  for (const auto& set : sets) {
    const double mod = std::hypot(set.re, set.im);
    const double psi = std::atan2(set.im, set.re);
    const bool vacuum = set.name == "vacuum";
    for (double phase : (vacuum ? std::vector<double>{0.0} : sq.phase)) {
      const double rel = sq.absolute ? phase - 2.0 * psi : phase;
      sqz_spectra sp{};
      check(sqz_input_spectra(mod, vacuum ? 0.0 : r, rel, &sp), "sensitivity");
      std::string name = set.name;
      if (!vacuum && sq.phase.size() > 1) name += "_phase" + format_number(phase);
      double uo = 0.0, vo = 0.0;
      check(sqz_s_min_opt_u(&sp, &chi, &uo, &vo), "sensitivity");
      json c = {{"name", name},       {"xi", xi_json(set.re, set.im)}, {"relative_phase", rel},
                {"sxx", sp.sxx},      {"syy", sp.syy},                 {"scross", sp.scross},
                {"optimal_u", uo},    {"s_min_opt", vo}};
      if (physics.mode) {
        sqz_susceptibility mchi{};
        check(sqz_susceptibility_at(omega_ratio * physics.mode->frequency, physics.mode->frequency,
                                    physics.mode->damping, &mchi),
              "sensitivity");
        double ba = 0.0, corr = 0.0;
        check(sqz_backaction_psd(&*physics.mode, &sp, &mchi, &ba), "sensitivity");
        check(sqz_correlation_psd(&*physics.mode, &sp, &mchi, &corr), "sensitivity");
        c["absolute"] = {{"omega", mchi.omega},
                         {"measurement_strength", 4.0 * physics.mode->bare_recoil / physics.mode->frequency},
                         {"backaction_psd", ba},
                         {"correlation_psd", corr}};
      }
      curves.push_back(c);
      spectra.push_back(sp);
      names.push_back(name);
    }
    if (!vacuum) {
      double rel = 0.0, phi_s = 0.0, uo = 0.0, vo = 0.0;
      int global = 0;
      check(sqz_s_min_opt_u_phase(set.re, set.im, r, &chi, &rel, &phi_s, &uo, &vo, &global), "sensitivity");
      optima.push_back({{"name", set.name},
                        {"relative_phase", rel},
                        {"phi_s", phi_s},
                        {"optimal_u", uo},
                        {"s_min_opt", vo},
                        {"global", global != 0}});
      check(sqz_s_min_opt_global(set.re, set.im, r, &chi, &rel, &phi_s, &uo, &vo), "sensitivity");
      optima.back()["exact"] = {{"relative_phase", rel}, {"phi_s", phi_s}, {"optimal_u", uo}, {"s_min_opt", vo}};
    }
  }

  std::vector<const char*> cnames;
  for (const auto& n : names) cnames.push_back(n.c_str());
  sqz_table* t = nullptr;
  check(sqz_sensitivity_curve(spectra.size(), spectra.data(), cnames.data(), &chi, u.data(), u.size(), &t),
        "sensitivity");
  const Table curve = take_table(t);

  const json hm = s.contains("heatmap") ? s.at("heatmap") : json::object();
  check_keys(hm, {"e2r", "xi"}, "sensitivity.heatmap");
  const std::vector<double> e2r = json_values(hm.contains("e2r") ? hm.at("e2r") : json("1:40:0.5"),
                                              "sensitivity.heatmap.e2r");
  const std::vector<double> xi = json_values(hm.contains("xi") ? hm.at("xi") : json("0:1:0.02"),
                                             "sensitivity.heatmap.xi");
  check(sqz_sensitivity_heatmap(e2r.data(), e2r.size(), xi.data(), xi.size(), &chi, &t), "sensitivity.heatmap");
  const Table heat = take_table(t);

  const json info = {{"target", target_json(target)},
                     {"squeezer", {{"r", r}, {"db", sq.db.front()}, {"phase", sq.phase},
                                   {"phase_mode", sq.absolute ? "absolute" : "relative"}}},
                     {"susceptibility",
                      {{"omega_ratio", omega_ratio},
                       {"damping_ratio", damping_ratio},
                       {"chi_re", chi.chi_re},
                       {"chi_im", chi.chi_im},
                       {"chi_modulus", std::hypot(chi.chi_re, chi.chi_im)}}},
                     {"curves", curves},
                     {"optimal_phase", optima}};

  write_atomic(ctx.out_dir, "sensitivity.csv", curve.csv());
  write_atomic(ctx.out_dir, "heatmap.csv", heat.csv());
  write_atomic(ctx.out_dir, "sensitivity.json", dump(info));
  write_atomic(ctx.out_dir, "config.json", dump(ctx.config));
}

// ---------------------------------------------------------------- optimize

void cmd_optimize(RunContext& ctx) {
  const Target target = read_target(ctx);
  const Squeezer sq = read_squeezer(ctx);
  const json s = section(ctx, "optimize");
  check_keys(s, {"objective", "budget", "free", "fixed", "two_beams", "perfect_overlap", "support", "omega_ratio",
                 "damping_ratio", "scan"},
             "optimize");

  sqz_problem_options opts = sqz_problem_options_default();
  const std::string objective = string_or(s, "objective", "recoil_ratio", "optimize");
  if (objective == "recoil_ratio") {
    opts.objective = SQZ_OBJECTIVE_RECOIL_RATIO;
  } else if (objective == "s_min_opt") {
    opts.objective = SQZ_OBJECTIVE_S_MIN_OPT;
  } else {
    config_error("optimize.objective", "expected recoil_ratio or s_min_opt");
  }
  opts.target_kind = target.kind;
  opts.target_axis = target.axis;
  opts.r = single_r(ctx, sq);
  opts.two_beams = bool_or(s, "two_beams", false, "optimize");
  opts.perfect_overlap = bool_or(s, "perfect_overlap", false, "optimize");
  const std::string support = string_or(s, "support", "hemisphere", "optimize");
  if (support != "hemisphere" && support != "full") config_error("optimize.support", "expected hemisphere or full");
  opts.full_support = support == "full";
  opts.omega_ratio = number_or(s, "omega_ratio", opts.omega_ratio, "optimize");
  opts.damping_ratio = number_or(s, "damping_ratio", opts.damping_ratio, "optimize");
  opts.threads = ctx.threads;

  sqz_problem* raw = nullptr;
  check(sqz_problem_create(&opts, ctx.rule.get(), &raw), "optimize");
  const ProblemPtr problem(raw);

  const json free = s.contains("free") ? s.at("free") : json{{"phase", json::array({0.0, "2pi"})}};
  if (!free.is_object()) config_error("optimize.free", "expected an object of name: [lower, upper]");
  for (const auto& [name, bounds] : free.items()) {
    const std::string field = "optimize.free." + name;
    if (!bounds.is_array() || bounds.size() != 2) config_error(field, "expected [lower, upper]");
    check(sqz_problem_add_free(problem.get(), name.c_str(), json_scalar(bounds[0], field),
                               json_scalar(bounds[1], field)),
          field);
  }
  if (s.contains("fixed")) {
    const json& fixed = s.at("fixed");
    if (!fixed.is_object()) config_error("optimize.fixed", "expected an object of name: value");
    for (const auto& [name, value] : fixed.items())
      check(sqz_problem_set_fixed(problem.get(), name.c_str(), json_scalar(value, "optimize.fixed." + name)),
            "optimize.fixed." + name);
  }

  long long budget = 200;
  if (s.contains("budget")) {
    if (!s.at("budget").is_number_integer() || s.at("budget").get<long long>() < 1)
      config_error("optimize.budget", "must be a positive integer");
    budget = s.at("budget").get<long long>();
  }

  sqz_opt_result* rres = nullptr;
  check(sqz_optimize(problem.get(), static_cast<std::size_t>(budget), ctx.seed, &rres), "optimize");
  const ResultPtr result(rres);
  double best = 0.0, xre = 0.0, xim = 0.0;
  std::size_t evals = 0;
  sqz_opt_result_summary(result.get(), &best, &xre, &xim, &evals);
  json point = json::object();
  for (std::size_t i = 0; i < sqz_opt_result_dimension(result.get()); ++i)
    point[sqz_opt_result_name(result.get(), i)] = sqz_opt_result_best(result.get(), i);
  sqz_table* t = nullptr;
  check(sqz_opt_result_trace(result.get(), &t), "optimize");
  const Table trace = take_table(t);
  json trace_json = json::array();
  for (const auto& row : trace.rows) {
    json e = json::object();
    for (std::size_t c = 0; c < trace.columns.size(); ++c) e[trace.columns[c]] = row[c];
    trace_json.push_back(e);
  }

  json info = {{"objective", objective},
               {"target", target_json(target)},
               {"r", opts.r},
               {"budget", budget},
               {"seed", ctx.seed},
               {"best_point", point},
               {"best_value", best},
               {"xi", xi_json(xre, xim)},
               {"evaluations", evals},
               {"trace", trace_json}};

  std::optional<Table> scan;
  if (s.contains("scan")) {
    const json& sc = s.at("scan");
    check_keys(sc, {"parameter", "lower", "upper", "n"}, "optimize.scan");
    if (!sc.contains("parameter") || !sc.contains("lower") || !sc.contains("upper"))
      config_error("optimize.scan", "needs parameter, lower and upper");
    const std::string param = string_or(sc, "parameter", "", "optimize.scan");
    sqz_scan_summary summary{};
    check(sqz_scan_1d(problem.get(), param.c_str(), json_scalar(sc.at("lower"), "optimize.scan.lower"),
                      json_scalar(sc.at("upper"), "optimize.scan.upper"), int_or(sc, "n", 101, "optimize.scan"), &t,
                      &summary),
          "optimize.scan");
    scan = take_table(t);
    info["scan"] = {{"parameter", param},
                    {"argmin", summary.argmin},
                    {"min_value", summary.min_value},
                    {"argmax", summary.argmax},
                    {"max_value", summary.max_value},
                    {"nondecreasing", summary.nondecreasing != 0},
                    {"nonincreasing", summary.nonincreasing != 0}};
  }

  write_atomic(ctx.out_dir, "optimize.json", dump(info));
  write_atomic(ctx.out_dir, "trace.csv", trace.csv());
  if (scan) write_atomic(ctx.out_dir, "scan.csv", scan->csv());
  write_atomic(ctx.out_dir, "config.json", dump(ctx.config));
}

// ---------------------------------------------------------------- wigner

void cmd_wigner(RunContext& ctx) {
  const Squeezer sq = read_squeezer(ctx);
  const json s = section(ctx, "wigner");
  check_keys(s, {"source", "xi", "half_width", "n"}, "wigner");
  const std::string source = string_or(s, "source", "interacting", "wigner");
  const double r = single_r(ctx, sq);
  const double phase = single_phase(sq);
  sqz_covariance cov{};
  json info = {{"source", source}, {"squeezer", squeezer_json(r, phase, sq.absolute)}};
  if (source == "bare") {
    if (s.contains("xi")) config_error("wigner.xi", "not used for the bare source");
    check(sqz_wigner_covariance_bare(r, phase, &cov), "wigner");
  } else if (source == "interacting") {
    double re = 1.0, im = 0.0;
    if (s.contains("xi")) {
      re = json_scalar(s.at("xi"), "wigner.xi");
      if (!(re >= 0.0 && re <= 1.0)) config_error("wigner.xi", "must lie in [0, 1]");
    } else if (ctx.config.contains("beams")) {
      const Target target = read_target(ctx);
      const Physics physics = read_physics(ctx, target);
      std::vector<Beam> beams = read_beams(ctx);
      if (beams.size() != 1) config_error("beams", "wigner takes a single beam");
      const DistPtr tdist = target_distribution(target, physics.alpha0_phase);
      std::tie(re, im) = overlap_of(beams.front(), tdist.get(), ctx);
      info["beam"] = beams.front().description;
      info["target"] = target_json(target);
    }
    const double rel = sq.absolute ? phase - 2.0 * std::atan2(im, re) : phase;
    sqz_spectra sp{};
    check(sqz_input_spectra(std::hypot(re, im), r, rel, &sp), "wigner");
    check(sqz_wigner_covariance_interacting(&sp, &cov), "wigner");
    info["xi"] = xi_json(re, im);
    info["relative_phase"] = rel;
  } else {
    config_error("wigner.source", "expected interacting or bare");
  }
  // Default window spans 8 sigma of the wide axis with steps no coarser than sigma of the narrow one.
  const double mean = 0.5 * (cov.xx + cov.yy);
  const double spread = std::hypot(0.5 * (cov.xx - cov.yy), cov.xy);
  const double sigma_max = std::sqrt(mean + spread);
  const double sigma_min = std::sqrt(std::max(mean - spread, 1e-300));
  const double half_width =
      s.contains("half_width") ? json_scalar(s.at("half_width"), "wigner.half_width") : 8.0 * sigma_max;
  if (!(half_width > 0.0)) config_error("wigner.half_width", "must be positive");
  const int auto_n = static_cast<int>(std::min(4001.0, std::max(201.0, std::ceil(2.0 * half_width / sigma_min) + 1)));
  const int n = int_or(s, "n", auto_n, "wigner");
  if (n < 2) config_error("wigner.n", "need at least 2 points");

  sqz_table* t = nullptr;
  check(sqz_wigner_grid(&cov, half_width, n, &t), "wigner");
  const Table grid = take_table(t);
  const double step = 2.0 * half_width / (n - 1);
  double integral = 0.0;
  for (const auto& row : grid.rows) integral += row[2];
  integral *= step * step;

  info["covariance"] = {{"xx", cov.xx}, {"xy", cov.xy}, {"yy", cov.yy}};
  info["determinant"] = cov.xx * cov.yy - cov.xy * cov.xy;
  info["half_width"] = half_width;
  info["n"] = n;
  info["grid_integral"] = integral;

  write_atomic(ctx.out_dir, "wigner.csv", grid.csv());
  write_atomic(ctx.out_dir, "wigner.json", dump(info));
  write_atomic(ctx.out_dir, "config.json", dump(ctx.config));
}

}  // namespace sqzcli
