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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli.hpp"

namespace {

using sqzcli::json;

struct Shared {
  std::optional<std::string> db, r, phase, axis;
  bool absolute_phase = false;
  bool libration = false;
  bool perfect_overlap = false;
  std::vector<std::string> beams;
};

struct Flags {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::string> quad;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;

  Shared shared;
  std::optional<std::string> grid, units;                          // irp
  std::optional<std::string> xi, omega_ratio;                      // sensitivity
  std::optional<long long> budget;                                 // optimize
  std::vector<std::string> free, fix;
  std::optional<std::string> objective;
  bool two_beams = false;
  std::optional<std::string> source, half_width;                  // wigner
  std::optional<int> points;
};

void add_shared(CLI::App* sub, Shared& s) {
  sub->add_option("--db", s.db, "squeezing degree in dB: value, list a,b,c or range start:stop:step");
  sub->add_option("--r", s.r, "squeezing degree r (instead of --db)");
  sub->add_option("--phase", s.phase, "squeezing phase; pi literals such as 3pi/2 are exact");
  sub->add_flag("--absolute-phase", s.absolute_phase, "treat --phase as phi_s rather than phi_s - 2 arg(xi)");
  sub->add_option("--axis", s.axis, "target axis x, y or z");
  sub->add_flag("--libration", s.libration, "target a libration mode instead of motion");
  sub->add_option("--beam", s.beams, "beam spec na=..,axis=..,pol=..,support=..,label=.. or file=PATH")
      ->allow_extra_args(false);
  sub->add_flag("--perfect-overlap", s.perfect_overlap, "include the |xi| = 1 reference");
}

json& object_at(json& cfg, const std::string& key) {
  if (!cfg.contains(key)) cfg[key] = json::object();
  if (!cfg[key].is_object()) sqzcli::config_error(key, "must be an object");
  return cfg[key];
}

void apply_shared(json& cfg, const Shared& s) {
  if (s.db || s.r || s.phase || s.absolute_phase) {
    json& sq = object_at(cfg, "squeezer");
    if (s.db && s.r) sqzcli::config_error("--r", "give either --db or --r");
    if (s.db) {
      sq.erase("r");
      sq["db"] = *s.db;
    }
    if (s.r) {
      sq.erase("db");
      sq["r"] = *s.r;
    }
    if (s.phase) sq["phase"] = *s.phase;
    if (s.absolute_phase) sq["phase_mode"] = "absolute";
  }
  if (s.axis || s.libration) {
    json& t = object_at(cfg, "target");
    if (s.libration) t["kind"] = "libration";
    if (s.axis) t["axis"] = *s.axis;
  }
  if (!s.beams.empty()) {
    json list = json::array();
    for (const auto& b : s.beams) list.push_back(sqzcli::parse_beam_flag(b));
    cfg["beams"] = list;
  }
  if (s.perfect_overlap) cfg["perfect_overlap"] = true;
}

void apply_command(json& cfg, const std::string& command, const Flags& f) {
  if (command == "irp") {
    if (f.grid) {
      const auto [nt, np] = sqzcli::parse_grid(*f.grid, "--grid");
      json& s = object_at(cfg, "irp");
      s["n_theta"] = nt;
      s["n_phi"] = np;
    }
    if (f.units) object_at(cfg, "irp")["units"] = *f.units;
  } else if (command == "sensitivity") {
    if (f.xi) object_at(cfg, "sensitivity")["xi"] = *f.xi;
    if (f.omega_ratio) object_at(cfg, "sensitivity")["omega_ratio"] = *f.omega_ratio;
  } else if (command == "optimize") {
    if (f.budget) object_at(cfg, "optimize")["budget"] = *f.budget;
    if (f.objective) object_at(cfg, "optimize")["objective"] = *f.objective;
    if (f.two_beams) object_at(cfg, "optimize")["two_beams"] = true;
    if (!f.free.empty()) {
      json free = json::object();
      for (const auto& a : f.free) {
        auto [name, value] = sqzcli::parse_assignment(a, "--free");
        if (!value.is_array()) sqzcli::config_error("--free", "expected name=lower:upper, got '" + a + "'");
        free[name] = value;
      }
      object_at(cfg, "optimize")["free"] = free;
    }
    if (!f.fix.empty()) {
      json& opt = object_at(cfg, "optimize");
      json& fixed = object_at(opt, "fixed");
      for (const auto& a : f.fix) {
        auto [name, value] = sqzcli::parse_assignment(a, "--fix");
        if (value.is_array()) sqzcli::config_error("--fix", "expected name=value, got '" + a + "'");
        fixed[name] = value;
      }
    }
  } else if (command == "wigner") {
    if (f.source) object_at(cfg, "wigner")["source"] = *f.source;
    if (f.half_width) object_at(cfg, "wigner")["half_width"] = *f.half_width;
    if (f.points) object_at(cfg, "wigner")["n"] = *f.points;
  }
}

int run(const std::string& command, const Flags& f) {
  json cfg = sqzcli::load_config(f.config_path, command);
  if (f.quad) {
    sqzcli::parse_grid(*f.quad, "--quad");
    cfg["quadrature"] = *f.quad;
  }
  if (f.threads) cfg["threads"] = *f.threads;
  if (f.seed) cfg["seed"] = *f.seed;
  apply_shared(cfg, f.shared);
  apply_command(cfg, command, f);
  if (!cfg.contains("quadrature")) cfg["quadrature"] = "64x128";
  if (!cfg.contains("threads")) cfg["threads"] = 1;
  if (!cfg.contains("seed")) cfg["seed"] = 0;

  sqzcli::RunContext ctx = sqzcli::make_context(cfg, f.out_dir);
  if (command == "recoil") sqzcli::cmd_recoil(ctx);
  if (command == "irp") sqzcli::cmd_irp(ctx);
  if (command == "sensitivity") sqzcli::cmd_sensitivity(ctx);
  if (command == "optimize") sqzcli::cmd_optimize(ctx);
  if (command == "wigner") sqzcli::cmd_wigner(ctx);
  return sqzcli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recoil heating, scattering and detection with squeezed light for levitated particles"};
  app.set_version_flag("--version", std::string(sqz_version()));
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  app.add_option("--config", f.config_path, "JSON config; relative paths also tried under $SQZLEV_CONFIG_DIR");
  app.add_option("--out", f.out_dir, "output directory (created if missing)");
  app.add_option("--quad", f.quad, "angular quadrature NTHETAxNPHI (default 64x128)");
  app.add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", f.seed, "optimizer seed");

  CLI::App* recoil = app.add_subcommand("recoil", "recoil heating ratio sweeps");
  CLI::App* irp = app.add_subcommand("irp", "differential cross section and radiation pattern grid");
  CLI::App* sens = app.add_subcommand("sensitivity", "minimum detectable signal curves and heatmap");
  CLI::App* opt = app.add_subcommand("optimize", "beam and phase optimization");
  CLI::App* wig = app.add_subcommand("wigner", "Wigner function of the input light");
  for (CLI::App* sub : {recoil, irp, sens, opt, wig}) add_shared(sub, f.shared);

  irp->add_option("--grid", f.grid, "output grid NTHETAxNPHI (default 181x360)");
  irp->add_option("--units", f.units, "shape or absolute");
  sens->add_option("--xi", f.xi, "extra overlap moduli: list or range");
  sens->add_option("--omega-ratio", f.omega_ratio, "signal frequency over mechanical frequency");
  opt->add_option("--budget", f.budget, "objective evaluations");
  opt->add_option("--free", f.free, "free parameter name=lower:upper (repeatable)")->allow_extra_args(false);
  opt->add_option("--fix", f.fix, "fixed parameter name=value (repeatable)")->allow_extra_args(false);
  opt->add_option("--objective", f.objective, "recoil_ratio or s_min_opt");
  opt->add_flag("--two-beams", f.two_beams, "superpose a second beam");
  wig->add_option("--source", f.source, "interacting or bare");
  wig->add_option("--half-width", f.half_width, "grid half width");
  wig->add_option("--points", f.points, "points per side");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sqzcli::kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, f);
  } catch (const sqzcli::CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code();
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return sqzcli::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sqzcli::kExitNumerical;
  }
}
