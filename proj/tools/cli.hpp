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

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqzlev/sqzlev.h"

namespace sqzcli {

using json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Carries the process exit code (2 or 3).
class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

[[noreturn]] void config_error(const std::string& field, const std::string& message);

/// Maps a C API status onto CliError.
void check(sqz_status status, const std::string& context = {});

/// Parses a real number or a pi literal such as "pi", "-pi/2", "3pi/2", "0.25pi", "2*pi".
double parse_scalar(const std::string& text, const std::string& field);

/// Number or string scalar from JSON.
double json_scalar(const json& value, const std::string& field);

/// Values from a number, an array, a comma list "a,b,c" or a range
/// "start:stop:step" (inclusive; elements computed as start + i step).
std::vector<double> json_values(const json& value, const std::string& field);

/// `--quad`-style "NxM".
std::pair<int, int> parse_grid(const std::string& text, const std::string& field);

/// "na=0.9,axis=-z,pol=0,support=full,label=name" or "file=path".
json parse_beam_flag(const std::string& text);

/// "name=lo:hi" and "name=value".
std::pair<std::string, json> parse_assignment(const std::string& text, const std::string& field);

/// Config path resolution: an explicit path is tried as given, then relative
/// to $SQZLEV_CONFIG_DIR; without one, $SQZLEV_CONFIG_DIR/<command>.json is
/// used when present. Returns an empty object when nothing applies.
json load_config(const std::string& explicit_path, const std::string& command);

/// Rejects keys outside `allowed` in object `section` (named `where`).
void check_keys(const json& section, const std::vector<std::string>& allowed, const std::string& where);

/// temp file + rename in the destination directory.
void write_atomic(const std::string& dir, const std::string& name, const std::string& content);

std::string format_number(double value);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string csv() const;
};

/// Copies and frees a C table.
Table take_table(sqz_table* t);

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using RulePtr = std::unique_ptr<sqz_rule, Deleter<sqz_rule, sqz_rule_free>>;
using DistPtr = std::unique_ptr<sqz_distribution, Deleter<sqz_distribution, sqz_distribution_free>>;
using ProblemPtr = std::unique_ptr<sqz_problem, Deleter<sqz_problem, sqz_problem_free>>;
using ResultPtr = std::unique_ptr<sqz_opt_result, Deleter<sqz_opt_result, sqz_opt_result_free>>;

/// Global settings after merging file and flags.
struct RunContext {
  json config;  // merged configuration, echoed as config.json
  std::string out_dir;
  RulePtr rule;
  int threads = 1;
  std::uint64_t seed = 0;
};

RunContext make_context(json config, const std::string& out_dir);

void cmd_recoil(RunContext& ctx);
void cmd_irp(RunContext& ctx);
void cmd_sensitivity(RunContext& ctx);
void cmd_optimize(RunContext& ctx);
void cmd_wigner(RunContext& ctx);

}  // namespace sqzcli
