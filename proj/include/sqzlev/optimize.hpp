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
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sqzlev/angular.hpp"
#include "sqzlev/physics.hpp"
#include "sqzlev/table.hpp"

namespace sqzlev {

enum class Objective { RecoilRatio, SMinOpt };

/// Parameter names understood by the beam family:
///   na, axis_theta, axis_phi, polarization        first Gaussian beam
///   na2, axis2_theta, axis2_phi, polarization2    second beam (two_beams)
///   mix, mix_phase      A = cos(mix) A_1 + sin(mix) e^{i mix_phase} A_2
///   phase               absolute squeezing phase phi_s
///   relative_phase      phi_s - 2 psi, used when phase is neither free nor fixed
///   r                   squeezing degree
/// Unset values take the defaults of `parameter_default`.
struct FreeParameter {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
};

struct OptimizationProblem {
  Objective objective = Objective::RecoilRatio;
  ModeKind target_kind = ModeKind::Motion;
  Axis target_axis = Axis::Z;
  double r = 0.0;
  std::vector<FreeParameter> free;
  std::map<std::string, double> fixed;
  bool two_beams = false;
  /// Replaces the beam family by |xi| = 1 with psi = 0.
  bool perfect_overlap = false;
  BeamSupport support = BeamSupport::Hemisphere;
  /// Susceptibility for the s_min objective, in units of the mechanical frequency.
  double omega_ratio = 1e-3;
  double damping_ratio = kDefaultDampingFraction;
  QuadratureRule rule;
  int threads = 1;

  void validate() const;
};

bool is_known_parameter(const std::string& name);
/// Defaults: na 0.8, axis along -z, polarization 0, second beam along +z,
/// mix 0, phases 0, relative_phase 0 (recoil) or 3 pi / 2 (s_min), r from the problem.
double parameter_default(const OptimizationProblem& problem, const std::string& name);

struct TraceEntry {
  std::size_t evaluation = 0;
  std::string stage;  // "scan" or "simplex"
  std::vector<double> point;
  double value = 0.0;
  double best = 0.0;
};

struct Evaluation {
  double value = 0.0;
  cplx xi;
};

struct OptimizationResult {
  std::vector<std::string> names;
  std::vector<double> best_point;
  double best_value = 0.0;
  cplx xi;
  std::size_t evaluations = 0;
  std::vector<TraceEntry> trace;

  /// Columns: evaluation, stage (0 scan, 1 simplex), value, best, then one per parameter.
  Table trace_table() const;
};

/// Objective evaluator with an overlap cache keyed on the beam geometry
/// (quantized at 1e-12). Safe for concurrent use.
class ObjectiveFunction {
 public:
  explicit ObjectiveFunction(OptimizationProblem problem);
  ~ObjectiveFunction();
  ObjectiveFunction(const ObjectiveFunction&) = delete;
  ObjectiveFunction& operator=(const ObjectiveFunction&) = delete;

  const OptimizationProblem& problem() const;
  /// `point` holds values of problem().free in order.
  Evaluation operator()(const std::vector<double>& point) const;
  /// Evaluation with explicit name -> value overrides on top of fixed/defaults.
  Evaluation evaluate(const std::map<std::string, double>& values) const;
  std::size_t cache_size() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// Latin-hypercube scan followed by bounded Nelder-Mead. Deterministic for a
/// fixed (problem, budget, seed), independent of the thread count.
OptimizationResult optimize(const OptimizationProblem& problem, std::size_t budget, std::uint64_t seed);

struct ScanReport {
  Table table;  // columns: <parameter>, value, xi_abs
  double argmin = 0.0;
  double min_value = 0.0;
  double argmax = 0.0;
  double max_value = 0.0;
  bool nondecreasing = false;
  bool nonincreasing = false;
};

/// Uniform grid of n >= 2 points over [lower, upper] for one parameter, other
/// parameters at their fixed or default values.
ScanReport scan_1d(const OptimizationProblem& problem, const std::string& parameter, double lower,
                   double upper, int n);

}  // namespace sqzlev
