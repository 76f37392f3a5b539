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

#include "sqzlev/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "detail/parallel.hpp"
#include "sqzlev/detect.hpp"
#include "sqzlev/error.hpp"
#include "sqzlev/squeeze.hpp"

namespace sqzlev {

using std::numbers::pi;

namespace {

constexpr std::array<const char*, 12> kParameterNames = {
    "na",  "axis_theta", "axis_phi", "polarization", "na2",   "axis2_theta",
    "axis2_phi", "polarization2", "mix", "mix_phase", "phase", "relative_phase"};

constexpr std::array<const char*, 4> kFirstBeam = {"na", "axis_theta", "axis_phi", "polarization"};
constexpr std::array<const char*, 6> kSecondBeam = {"na2", "axis2_theta", "axis2_phi",
                                                    "polarization2", "mix", "mix_phase"};

std::string describe_point(const std::map<std::string, double>& values) {
  std::ostringstream out;
  out << "(";
  bool first = true;
  for (const auto& [k, v] : values) {
    out << (first ? "" : ", ") << k << "=" << v;
    first = false;
  }
  out << ")";
  return out.str();
}

Vec3 spherical(double theta, double phi) { return Direction{theta, phi}.unit_vector(); }

}  // namespace

bool is_known_parameter(const std::string& name) {
  if (name == "r") return true;
  return std::find(kParameterNames.begin(), kParameterNames.end(), name) != kParameterNames.end();
}

double parameter_default(const OptimizationProblem& problem, const std::string& name) {
  if (name == "na" || name == "na2") return 0.8;
  if (name == "axis_theta") return pi;
  if (name == "axis2_theta") return 0.0;
  if (name == "axis_phi" || name == "axis2_phi" || name == "polarization" || name == "polarization2" ||
      name == "mix" || name == "mix_phase" || name == "phase")
    return 0.0;
  if (name == "relative_phase") return problem.objective == Objective::RecoilRatio ? 0.0 : 1.5 * pi;
  if (name == "r") return problem.r;
  throw InvalidArgument("unknown optimization parameter '" + name + "'");
}

void OptimizationProblem::validate() const {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("optimize.r must be >= 0");
  if (target_kind == ModeKind::Libration && target_axis == Axis::X)
    throw InvalidArgument("optimize.target: libration axis must be y or z");
  if (free.empty()) throw InvalidArgument("optimize needs at least one free parameter");
  for (std::size_t i = 0; i < free.size(); ++i) {
    const auto& p = free[i];
    if (!is_known_parameter(p.name)) throw InvalidArgument("unknown optimization parameter '" + p.name + "'");
    if (!std::isfinite(p.lower) || !std::isfinite(p.upper) || !(p.lower < p.upper))
      throw InvalidArgument("optimization bounds for '" + p.name + "' must be finite with lower < upper");
    if (fixed.count(p.name)) throw InvalidArgument("parameter '" + p.name + "' is both free and fixed");
    for (std::size_t j = 0; j < i; ++j)
      if (free[j].name == p.name) throw InvalidArgument("parameter '" + p.name + "' listed twice");
  }
  for (const auto& [name, v] : fixed) {
    if (!is_known_parameter(name)) throw InvalidArgument("unknown optimization parameter '" + name + "'");
    if (!std::isfinite(v)) throw InvalidArgument("fixed value for '" + name + "' must be finite");
  }
  if (!(omega_ratio >= 0.0) || !(damping_ratio > 0.0))
    throw InvalidArgument("optimize: omega_ratio must be >= 0 and damping_ratio > 0");
  if (threads < 1) throw InvalidArgument("optimize: threads must be >= 1");
}

struct ObjectiveFunction::State {
  OptimizationProblem problem;
  AngularDistribution target;
  Susceptibility chi;
  mutable std::mutex mutex;
  mutable std::map<std::vector<long long>, cplx> cache;
};

ObjectiveFunction::ObjectiveFunction(OptimizationProblem problem) {
  problem.validate();
  const AngularDistribution target = problem.target_kind == ModeKind::Motion
                                         ? make_motion_distribution(problem.target_axis)
                                         : make_libration_distribution(problem.target_axis);
  const Susceptibility chi = Susceptibility::at(problem.omega_ratio, 1.0, problem.damping_ratio);
  state_ = std::unique_ptr<State>(new State{std::move(problem), target, chi, {}, {}});
}

ObjectiveFunction::~ObjectiveFunction() = default;

const OptimizationProblem& ObjectiveFunction::problem() const { return state_->problem; }

std::size_t ObjectiveFunction::cache_size() const {
  std::lock_guard lock(state_->mutex);
  return state_->cache.size();
}

Evaluation ObjectiveFunction::operator()(const std::vector<double>& point) const {
  const auto& free = state_->problem.free;
  if (point.size() != free.size()) throw InvalidArgument("optimization point has the wrong dimension");
  std::map<std::string, double> values;
  for (std::size_t i = 0; i < free.size(); ++i) values[free[i].name] = point[i];
  return evaluate(values);
}

Evaluation ObjectiveFunction::evaluate(const std::map<std::string, double>& overrides) const {
  const OptimizationProblem& problem = state_->problem;
  std::map<std::string, double> values = problem.fixed;
  for (const auto& [k, v] : overrides) values[k] = v;
  auto get = [&](const std::string& name) {
    auto it = values.find(name);
    return it != values.end() ? it->second : parameter_default(problem, name);
  };

  try {
    cplx xi(1.0, 0.0);
    if (!problem.perfect_overlap) {
      std::vector<long long> key;
      auto push = [&](const char* name) { key.push_back(std::llround(get(name) * 1e12)); };
      for (const char* n : kFirstBeam) push(n);
      if (problem.two_beams)
        for (const char* n : kSecondBeam) push(n);

      bool hit = false;
      {
        std::lock_guard lock(state_->mutex);
        auto it = state_->cache.find(key);
        if (it != state_->cache.end()) {
          xi = it->second;
          hit = true;
        }
      }
      if (!hit) {
        GaussianBeam b1;
        b1.na = get("na");
        b1.axis = spherical(get("axis_theta"), get("axis_phi"));
        b1.polarization_angle = get("polarization");
        b1.support = problem.support;
        AngularDistribution beam = make_gaussian_beam(b1, problem.rule);
        if (problem.two_beams) {
          GaussianBeam b2;
          b2.na = get("na2");
          b2.axis = spherical(get("axis2_theta"), get("axis2_phi"));
          b2.polarization_angle = get("polarization2");
          b2.support = problem.support;
          const double mix = get("mix");
          beam = make_superposition({{cplx(std::cos(mix)), beam},
                                     {std::sin(mix) * std::polar(1.0, get("mix_phase")),
                                      make_gaussian_beam(b2, problem.rule)}},
                                    problem.rule);
        }
        xi = overlap(beam, state_->target, problem.rule);
        std::lock_guard lock(state_->mutex);
        state_->cache.emplace(std::move(key), xi);
      }
    }

    const double r = get("r");
    if (!(r >= 0.0)) throw InvalidArgument("squeezing degree r must be >= 0");
    const double rel = values.count("phase") ? get("phase") - 2.0 * std::arg(xi) : get("relative_phase");
    double value;
    if (problem.objective == Objective::RecoilRatio) {
      value = recoil_ratio_relative(std::norm(xi), r, rel);
    } else {
      value = s_min_opt_u(input_spectra_relative(std::abs(xi), r, rel), state_->chi).value;
    }
    if (!std::isfinite(value)) throw NumericalFailure("objective is not finite");
    return {value, xi};
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string(e.what()) + " at " + describe_point(values));
  } catch (const NumericalFailure& e) {
    throw NumericalFailure(std::string(e.what()) + " at " + describe_point(values));
  }
}

Table OptimizationResult::trace_table() const {
  Table t;
  t.columns = {"evaluation", "stage", "value", "best"};
  for (const auto& n : names) t.columns.push_back(n);
  for (const auto& e : trace) {
    std::vector<double> row{double(e.evaluation), e.stage == "scan" ? 0.0 : 1.0, e.value, e.best};
    row.insert(row.end(), e.point.begin(), e.point.end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

class Recorder {
 public:
  Recorder(const ObjectiveFunction& f, const std::vector<FreeParameter>& free, std::size_t budget)
      : f_(f), free_(free), budget_(budget) {}

  std::vector<double> to_point(const std::vector<double>& unit) const {
    std::vector<double> x(unit.size());
    for (std::size_t i = 0; i < unit.size(); ++i)
      x[i] = free_[i].lower + std::clamp(unit[i], 0.0, 1.0) * (free_[i].upper - free_[i].lower);
    return x;
  }

  void record(const std::string& stage, std::vector<double> point, double value) {
    if (trace.empty() || value < best_value) {
      best_value = value;
      best_point = point;
    }
    trace.push_back({trace.size() + 1, stage, std::move(point), value, best_value});
  }

  double evaluate(const std::vector<double>& unit) {
    auto x = to_point(unit);
    const double v = f_(x).value;
    record("simplex", std::move(x), v);
    return v;
  }

  bool exhausted() const { return trace.size() >= budget_; }

  std::vector<TraceEntry> trace;
  std::vector<double> best_point;
  double best_value = 0.0;

 private:
  const ObjectiveFunction& f_;
  const std::vector<FreeParameter>& free_;
  std::size_t budget_;
};

std::vector<double> to_unit(const std::vector<double>& x, const std::vector<FreeParameter>& free) {
  std::vector<double> u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) u[i] = (x[i] - free[i].lower) / (free[i].upper - free[i].lower);
  return u;
}

void nelder_mead(Recorder& rec, std::vector<double> start) {
  const std::size_t d = start.size();
  std::vector<std::vector<double>> simplex(d + 1, start);
  std::vector<double> f(d + 1);
  for (std::size_t i = 0; i < d; ++i) {
    simplex[i + 1][i] += start[i] + 0.1 <= 1.0 ? 0.1 : -0.1;
  }
  f[0] = rec.best_value;
  for (std::size_t i = 1; i <= d; ++i) {
    if (rec.exhausted()) return;
    f[i] = rec.evaluate(simplex[i]);
  }

  auto clamp_unit = [](std::vector<double> u) {
    for (double& v : u) v = std::clamp(v, 0.0, 1.0);
    return u;
  };

  while (!rec.exhausted()) {
    std::vector<std::size_t> order(d + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[d - 1];

    double size = 0.0;
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t k = 0; k < d; ++k) size = std::max(size, std::abs(simplex[i][k] - simplex[best][k]));
    if (size < 1e-10) break;

    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k] / static_cast<double>(d);

    auto along = [&](double t) {
      std::vector<double> p(d);
      for (std::size_t k = 0; k < d; ++k) p[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
      return clamp_unit(p);
    };

    const auto reflected = along(-1.0);
    const double fr = rec.evaluate(reflected);
    if (fr < f[best]) {
      if (rec.exhausted()) break;
      const auto expanded = along(-2.0);
      const double fe = rec.evaluate(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        f[worst] = fe;
      } else {
        simplex[worst] = reflected;
        f[worst] = fr;
      }
      continue;
    }
    if (fr < f[second]) {
      simplex[worst] = reflected;
      f[worst] = fr;
      continue;
    }
    if (rec.exhausted()) break;
    const bool outside = fr < f[worst];
    const auto contracted = along(outside ? -0.5 : 0.5);
    const double fc = rec.evaluate(contracted);
    if (fc < (outside ? fr : f[worst])) {
      simplex[worst] = contracted;
      f[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == best) continue;
      if (rec.exhausted()) return;
      for (std::size_t k = 0; k < d; ++k) simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
      f[i] = rec.evaluate(simplex[i]);
    }
  }
}

}  // namespace

OptimizationResult optimize(const OptimizationProblem& problem, std::size_t budget, std::uint64_t seed) {
  const ObjectiveFunction objective(problem);
  const auto& free = objective.problem().free;
  const std::size_t d = free.size();
  if (budget < 10 * d) {
    std::ostringstream msg;
    msg << "optimization budget " << budget << " is below 10 x dimension (" << 10 * d << ")";
    throw InvalidArgument(msg.str());
  }

  // Latin hypercube: one jittered sample per stratum in every dimension.
  const std::size_t n_scan = std::max<std::size_t>(10 * d, budget / 2);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  std::vector<std::vector<double>> unit(n_scan, std::vector<double>(d));
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<std::size_t> perm(n_scan);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n_scan - 1; i > 0; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i);
      std::swap(perm[i], perm[pick(rng)]);
    }
    for (std::size_t i = 0; i < n_scan; ++i)
      unit[i][k] = (static_cast<double>(perm[i]) + jitter(rng)) / static_cast<double>(n_scan);
  }

  Recorder rec(objective, free, budget);
  std::vector<std::vector<double>> points(n_scan);
  std::vector<double> values(n_scan);
  for (std::size_t i = 0; i < n_scan; ++i) points[i] = rec.to_point(unit[i]);
  detail::parallel_for(n_scan, problem.threads, [&](std::size_t i) { values[i] = objective(points[i]).value; });
  for (std::size_t i = 0; i < n_scan; ++i) rec.record("scan", points[i], values[i]);

  if (!rec.exhausted()) nelder_mead(rec, to_unit(rec.best_point, free));

  OptimizationResult result;
  for (const auto& p : free) result.names.push_back(p.name);
  result.best_point = rec.best_point;
  result.best_value = rec.best_value;
  result.xi = objective(rec.best_point).xi;
  result.evaluations = rec.trace.size();
  result.trace = std::move(rec.trace);
  return result;
}

ScanReport scan_1d(const OptimizationProblem& problem, const std::string& parameter, double lower,
                   double upper, int n) {
  if (n < 2) throw InvalidArgument("scan needs n >= 2 points");
  if (!is_known_parameter(parameter)) throw InvalidArgument("unknown scan parameter '" + parameter + "'");
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper))
    throw InvalidArgument("scan range must be finite with lower < upper");
  OptimizationProblem p = problem;
  p.fixed.erase(parameter);
  p.free = {{parameter, lower, upper}};
  const ObjectiveFunction objective(p);

  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<Evaluation> ev(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    xs[i] = lower + (upper - lower) * static_cast<double>(i) / static_cast<double>(n - 1);
  detail::parallel_for(xs.size(), problem.threads, [&](std::size_t i) { ev[i] = objective({xs[i]}); });

  ScanReport report;
  report.table.columns = {parameter, "value", "xi_abs"};
  report.nondecreasing = report.nonincreasing = true;
  report.argmin = report.argmax = xs[0];
  report.min_value = report.max_value = ev[0].value;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    report.table.rows.push_back({xs[i], ev[i].value, std::abs(ev[i].xi)});
    if (ev[i].value < report.min_value) {
      report.min_value = ev[i].value;
      report.argmin = xs[i];
    }
    if (ev[i].value > report.max_value) {
      report.max_value = ev[i].value;
      report.argmax = xs[i];
    }
    if (i > 0) {
      if (ev[i].value < ev[i - 1].value) report.nondecreasing = false;
      if (ev[i].value > ev[i - 1].value) report.nonincreasing = false;
    }
  }
  return report;
}

}  // namespace sqzlev
