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

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"

namespace sqzcli {

namespace fs = std::filesystem;

void config_error(const std::string& field, const std::string& message) {
  throw CliError(kExitConfig, field.empty() ? message : field + ": " + message);
}

void check(sqz_status status, const std::string& context) {
  if (status == SQZ_OK) return;
  std::string msg = sqz_last_error();
  if (!context.empty()) msg = context + ": " + msg;
  switch (status) {
    case SQZ_ERR_INVALID_ARGUMENT:
    case SQZ_ERR_IO:
      throw CliError(kExitConfig, msg);
    default:
      throw CliError(kExitNumerical, msg);
  }
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_plain(const std::string& text, double& out) {
  std::string t = text;
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

double parse_scalar(const std::string& raw, const std::string& field) {
  const std::string text = trim(raw);
  double v = 0.0;
  if (parse_plain(text, v)) return v;
  const auto pos = text.find("pi");
  if (pos == std::string::npos || text.find("pi", pos + 2) != std::string::npos)
    config_error(field, "'" + raw + "' is not a number or pi literal");
  std::string coef = text.substr(0, pos);
  std::string tail = text.substr(pos + 2);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double c = 1.0;
  if (coef == "-") {
    c = -1.0;
  } else if (coef == "+" || coef.empty()) {
    c = 1.0;
  } else if (!parse_plain(coef, c)) {
    config_error(field, "bad coefficient in pi literal '" + raw + "'");
  }
  double d = 1.0;
  if (!tail.empty()) {
    if (tail[0] != '/' || !parse_plain(tail.substr(1), d) || d == 0.0)
      config_error(field, "bad denominator in pi literal '" + raw + "'");
  }
  return c * std::numbers::pi / d;
}

double json_scalar(const json& value, const std::string& field) {
  if (value.is_number()) {
    const double v = value.get<double>();
    if (!std::isfinite(v)) config_error(field, "value must be finite");
    return v;
  }
  if (value.is_string()) return parse_scalar(value.get<std::string>(), field);
  config_error(field, "expected a number or a numeric string");
}

std::vector<double> json_values(const json& value, const std::string& field) {
  std::vector<double> out;
  if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i)
      out.push_back(json_scalar(value[i], field + "[" + std::to_string(i) + "]"));
  } else if (value.is_number()) {
    out.push_back(json_scalar(value, field));
  } else if (value.is_string()) {
    const std::string text = trim(value.get<std::string>());
    if (text.find(':') != std::string::npos) {
      const auto parts = split(text, ':');
      if (parts.size() != 3) config_error(field, "range must be start:stop:step");
      const double start = parse_scalar(parts[0], field);
      const double stop = parse_scalar(parts[1], field);
      const double step = parse_scalar(parts[2], field);
      if (!(step > 0.0)) config_error(field, "range step must be positive");
      if (stop < start) config_error(field, "range stop must not be below start");
      const double span = (stop - start) / step;
      if (span > 1e7) config_error(field, "range has too many points");
      const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
      for (std::size_t i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
    } else {
      for (const auto& p : split(text, ',')) out.push_back(parse_scalar(p, field));
    }
  } else {
    config_error(field, "expected a number, list, or range string");
  }
  if (out.empty()) config_error(field, "no values given");
  return out;
}

std::pair<int, int> parse_grid(const std::string& text, const std::string& field) {
  const auto x = text.find('x');
  if (x == std::string::npos) config_error(field, "expected NxM, got '" + text + "'");
  int a = 0, b = 0;
  const std::string s1 = text.substr(0, x), s2 = text.substr(x + 1);
  auto r1 = std::from_chars(s1.data(), s1.data() + s1.size(), a);
  auto r2 = std::from_chars(s2.data(), s2.data() + s2.size(), b);
  if (r1.ec != std::errc() || r1.ptr != s1.data() + s1.size() || r2.ec != std::errc() ||
      r2.ptr != s2.data() + s2.size() || a <= 0 || b <= 0)
    config_error(field, "expected positive integers NxM, got '" + text + "'");
  return {a, b};
}

json parse_beam_flag(const std::string& text) {
  json beam = json::object();
  for (const auto& item : split(text, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) config_error("--beam", "expected key=value, got '" + item + "'");
    std::string key = trim(item.substr(0, eq));
    const std::string val = trim(item.substr(eq + 1));
    if (key == "pol") key = "polarization";
    if (key == "na") {
      beam["na"] = parse_scalar(val, "--beam na");
    } else if (key == "axis" || key == "polarization" || key == "support" || key == "label" || key == "file") {
      beam[key] = val;
    } else {
      config_error("--beam", "unknown key '" + key + "'");
    }
  }
  return beam;
}

std::pair<std::string, json> parse_assignment(const std::string& text, const std::string& field) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) config_error(field, "expected name=value, got '" + text + "'");
  const std::string name = trim(text.substr(0, eq));
  const std::string val = trim(text.substr(eq + 1));
  const auto parts = split(val, ':');
  if (parts.size() == 2) return {name, json::array({parts[0], parts[1]})};
  if (parts.size() == 1) return {name, val};
  config_error(field, "expected name=value or name=lower:upper, got '" + text + "'");
}

json load_config(const std::string& explicit_path, const std::string& command) {
  const char* env = std::getenv("SQZLEV_CONFIG_DIR");
  fs::path path;
  if (!explicit_path.empty()) {
    path = explicit_path;
    if (!fs::exists(path) && env && *env && path.is_relative() && fs::exists(fs::path(env) / path))
      path = fs::path(env) / path;
    if (!fs::exists(path)) config_error("--config", "file '" + explicit_path + "' not found");
  } else if (env && *env && fs::exists(fs::path(env) / (command + ".json"))) {
    path = fs::path(env) / (command + ".json");
  } else {
    return json::object();
  }
  std::ifstream in(path);
  if (!in) config_error("--config", "cannot read '" + path.string() + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    config_error("--config", std::string("invalid JSON in '") + path.string() + "': " + e.what());
  }
  if (!cfg.is_object()) config_error("--config", "top level must be an object");
  return cfg;
}

void check_keys(const json& section, const std::vector<std::string>& allowed, const std::string& where) {
  if (!section.is_object()) config_error(where, "must be an object");
  for (const auto& [key, value] : section.items()) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == key;
    if (!ok) config_error(where.empty() ? key : where + "." + key, "unknown field");
  }
}

void write_atomic(const std::string& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) config_error("--out", "cannot create directory '" + dir + "': " + ec.message());
  const fs::path target = fs::path(dir) / name;
  const fs::path tmp = fs::path(dir) / ("." + name + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) config_error("--out", "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) config_error("--out", "write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    config_error("--out", "cannot move output into place at '" + target.string() + "': " + ec.message());
  }
}

std::string format_number(double value) {
  char buf[64];
  check(sqz_format_number(value, buf, sizeof buf));
  return buf;
}

std::string Table::csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

Table take_table(sqz_table* t) {
  Table out;
  const std::size_t nc = sqz_table_columns(t), nr = sqz_table_rows(t);
  for (std::size_t c = 0; c < nc; ++c) out.columns.emplace_back(sqz_table_column_name(t, c));
  out.rows.resize(nr, std::vector<double>(nc));
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) out.rows[r][c] = sqz_table_value(t, r, c);
  sqz_table_free(t);
  return out;
}

RunContext make_context(json config, const std::string& out_dir) {
  check_keys(config,
             {"quadrature", "threads", "seed", "damping_fraction", "particle", "rotor", "laser", "squeezer",
              "target", "beams", "perfect_overlap", "irp", "sensitivity", "optimize", "wigner", "trajectory"},
             "");
  RunContext ctx;
  int nt = 64, np = 128;
  if (config.contains("quadrature")) {
    if (!config["quadrature"].is_string()) config_error("quadrature", "expected \"NTHETAxNPHI\"");
    std::tie(nt, np) = parse_grid(config["quadrature"].get<std::string>(), "quadrature");
  }
  sqz_rule* rule = nullptr;
  check(sqz_rule_create(nt, np, &rule), "quadrature");
  ctx.rule.reset(rule);
  if (config.contains("threads")) {
    if (!config["threads"].is_number_integer() || config["threads"].get<long long>() < 1)
      config_error("threads", "must be a positive integer");
    ctx.threads = config["threads"].get<int>();
  }
  if (config.contains("seed")) {
    if (!config["seed"].is_number_unsigned() && !(config["seed"].is_number_integer() && config["seed"].get<long long>() >= 0))
      config_error("seed", "must be a non-negative integer");
    ctx.seed = config["seed"].get<std::uint64_t>();
  }
  ctx.out_dir = out_dir.empty() ? "." : out_dir;
  ctx.config = std::move(config);
  return ctx;
}

}  // namespace sqzcli
