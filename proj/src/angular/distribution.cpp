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

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "../detail/summation.hpp"
#include "sqzlev/angular.hpp"
#include "sqzlev/error.hpp"

namespace sqzlev {

struct AngularDistribution::Impl {
  std::string label;
  Field field;
  std::vector<Vec3> cut_axes;
  std::map<std::string, double> parameters;
  double construction_norm = 1.0;
  std::shared_ptr<const QuadratureRule> native_rule;
};

AngularDistribution::AngularDistribution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

AngularDistribution AngularDistribution::from_field(std::string label, Field field,
                                                    std::optional<Vec3> cut_axis,
                                                    std::map<std::string, double> parameters) {
  if (!field) throw InvalidArgument("distribution field must be callable");
  if (cut_axis) {
    const double len = norm(*cut_axis);
    if (!(len > 0.0)) throw InvalidArgument("cut axis must be a nonzero vector");
    cut_axis = (1.0 / len) * *cut_axis;
  }
  auto impl = std::make_shared<Impl>();
  impl->label = std::move(label);
  impl->field = std::move(field);
  if (cut_axis) impl->cut_axes.push_back(*cut_axis);
  impl->parameters = std::move(parameters);
  return AngularDistribution(std::move(impl));
}

CVec3 AngularDistribution::field(const Vec3& direction) const { return impl_->field(direction); }

cplx AngularDistribution::amplitude(const Direction& dir, Polarization pol) const {
  return project(impl_->field(dir.unit_vector()), polarization_vector(dir, pol));
}

const std::string& AngularDistribution::label() const { return impl_->label; }
const std::map<std::string, double>& AngularDistribution::parameters() const { return impl_->parameters; }
std::optional<Vec3> AngularDistribution::cut_axis() const {
  if (impl_->cut_axes.empty()) return std::nullopt;
  return impl_->cut_axes.front();
}
const std::vector<Vec3>& AngularDistribution::cut_axes() const { return impl_->cut_axes; }
const QuadratureRule* AngularDistribution::native_rule() const { return impl_->native_rule.get(); }
double AngularDistribution::construction_norm() const { return impl_->construction_norm; }

AngularDistribution AngularDistribution::scaled(cplx factor) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->field = [inner = impl_->field, factor](const Vec3& k) { return factor * inner(k); };
  return AngularDistribution(std::move(impl));
}

AngularDistribution AngularDistribution::conjugated() const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->field = [inner = impl_->field](const Vec3& k) {
    const CVec3 v = inner(k);
    return CVec3{std::conj(v.x), std::conj(v.y), std::conj(v.z)};
  };
  return AngularDistribution(std::move(impl));
}

AngularDistribution AngularDistribution::normalized(const QuadratureRule& rule) const {
  const double n2 = norm_squared(*this, rule);
  if (!std::isfinite(n2) || !(n2 > 0.0))
    throw NumericalFailure("distribution '" + label() + "' has non-positive norm " + std::to_string(n2));
  auto impl = std::make_shared<Impl>(*impl_);
  const double scale = 1.0 / std::sqrt(n2);
  impl->field = [inner = impl_->field, scale](const Vec3& k) { return cplx(scale) * inner(k); };
  impl->construction_norm = n2;
  return AngularDistribution(std::move(impl));
}

AngularDistribution make_tabulated(std::string label, const QuadratureRule& rule, std::vector<CVec3> values,
                                   double construction_norm) {
  auto native = std::make_shared<const QuadratureRule>(rule);
  auto table = std::make_shared<const std::vector<CVec3>>(std::move(values));
  auto impl = std::make_shared<AngularDistribution::Impl>();
  impl->label = std::move(label);
  impl->field = [native, table](const Vec3& k) { return (*table)[native->nearest_node(k)]; };
  impl->parameters = {{"n_theta", double(rule.n_theta())}, {"n_phi", double(rule.n_phi())}};
  impl->construction_norm = construction_norm;
  impl->native_rule = std::move(native);
  return AngularDistribution(std::move(impl));
}

double motion_geometry_factor(Axis axis) {
  switch (axis) {
    case Axis::X: return 1.0 / 5.0;
    case Axis::Y: return 2.0 / 5.0;
    case Axis::Z: return 7.0 / 5.0;
  }
  return 0.0;
}

AngularDistribution make_motion_distribution(Axis axis, double arg_alpha0) {
  if (!std::isfinite(arg_alpha0)) throw InvalidArgument("arg(alpha0) must be finite");
  const double l = motion_geometry_factor(axis);
  const cplx prefactor =
      cplx(0.0, 1.0) * std::polar(1.0, arg_alpha0) * std::sqrt(3.0 / (8.0 * std::numbers::pi * l));
  const Vec3 e_mu = unit_vector(axis);
  auto field = [prefactor, e_mu](const Vec3& k) {
    const double recoil = dot(k - kEz, e_mu);
    return (prefactor * recoil) * transverse(kEx, k);
  };
  return AngularDistribution::from_field(std::string("motion_") + axis_name(axis), field, std::nullopt,
                                         {{"arg_alpha0", arg_alpha0}, {"l_mu", l}});
}

AngularDistribution make_libration_distribution(Axis axis, double arg_alpha0) {
  if (axis == Axis::X) throw InvalidArgument("libration axis must be y or z");
  if (!std::isfinite(arg_alpha0)) throw InvalidArgument("arg(alpha0) must be finite");
  const cplx prefactor = -std::polar(1.0, arg_alpha0) * std::sqrt(3.0 / (8.0 * std::numbers::pi));
  const Vec3 e_mu = unit_vector(axis);
  auto field = [prefactor, e_mu](const Vec3& k) { return prefactor * transverse(e_mu, k); };
  return AngularDistribution::from_field(std::string("libration_") + axis_name(axis), field,
                                         std::nullopt, {{"arg_alpha0", arg_alpha0}});
}

Vec3 beam_polarization(const GaussianBeam& beam) {
  const double len = norm(beam.axis);
  if (!(len > 0.0) || !std::isfinite(len)) throw InvalidArgument("beam axis must be a nonzero finite vector");
  const Vec3 n = (1.0 / len) * beam.axis;
  if (beam.polarization_vector) {
    const Vec3 p = transverse(*beam.polarization_vector, n);
    if (norm(p) < 1e-12) throw InvalidArgument("beam polarization vector is parallel to the beam axis");
    return normalized(p);
  }
  Vec3 ref = transverse(kEx, n);
  if (norm(ref) < 1e-8) ref = transverse(kEy, n);
  ref = normalized(ref);
  Vec3 second = transverse(transverse(kEy, n), ref);
  second = norm(second) < 1e-8 ? cross(n, ref) : normalized(second);
  return std::cos(beam.polarization_angle) * ref + std::sin(beam.polarization_angle) * second;
}

AngularDistribution make_gaussian_beam(const GaussianBeam& beam, const QuadratureRule& rule) {
  if (!(beam.na > 0.0 && beam.na <= 1.0))
    throw InvalidArgument("beam numerical aperture must lie in (0, 1], got " + std::to_string(beam.na));
  const Vec3 p = beam_polarization(beam);
  const Vec3 n = normalized(beam.axis);
  const double inv_na2 = 1.0 / (beam.na * beam.na);
  const bool hemisphere = beam.support == BeamSupport::Hemisphere;
  auto field = [p, n, inv_na2, hemisphere](const Vec3& k) {
    const double c = dot(k, n);
    if (hemisphere && !(c > 0.0)) return CVec3{};
    const double envelope = std::exp(-(1.0 - c * c) * inv_na2);
    return cplx(-envelope) * transverse(p, k);
  };
  std::ostringstream label;
  label << "gaussian_na" << beam.na;
  std::map<std::string, double> params{{"na", beam.na},
                                       {"axis_x", n.x},
                                       {"axis_y", n.y},
                                       {"axis_z", n.z},
                                       {"pol_x", p.x},
                                       {"pol_y", p.y},
                                       {"pol_z", p.z},
                                       {"full_support", hemisphere ? 0.0 : 1.0}};
  auto raw = AngularDistribution::from_field(label.str(), field,
                                             hemisphere ? std::optional<Vec3>(n) : std::nullopt,
                                             std::move(params));
  return raw.normalized(hemisphere ? rule.aligned_to(n) : rule);
}

AngularDistribution make_superposition(const std::vector<std::pair<cplx, AngularDistribution>>& terms,
                                       const QuadratureRule& rule) {
  if (terms.empty()) throw InvalidArgument("superposition needs at least one term");
  std::vector<Vec3> cuts;
  std::string label = "superposition";
  for (const auto& [coef, dist] : terms) {
    if (dist.native_rule()) throw InvalidArgument("superposition of tabulated distributions is not supported");
    if (!std::isfinite(coef.real()) || !std::isfinite(coef.imag()))
      throw InvalidArgument("superposition coefficient must be finite");
    cuts.insert(cuts.end(), dist.cut_axes().begin(), dist.cut_axes().end());
    label += "+" + dist.label();
  }
  auto field = [terms](const Vec3& k) {
    CVec3 acc{};
    for (const auto& [coef, dist] : terms) acc = acc + coef * dist.field(k);
    return acc;
  };
  auto raw = AngularDistribution::from_field(label, field, std::nullopt, {{"terms", double(terms.size())}});
  auto impl = std::make_shared<AngularDistribution::Impl>(*raw.impl_);
  impl->cut_axes = std::move(cuts);
  return AngularDistribution(std::move(impl)).normalized(rule);
}

QuadratureRule integration_rule(const AngularDistribution& a, const AngularDistribution& b,
                                const QuadratureRule& base) {
  if (a.native_rule()) return *a.native_rule();
  if (b.native_rule()) return *b.native_rule();
  std::vector<Vec3> cuts = a.cut_axes();
  cuts.insert(cuts.end(), b.cut_axes().begin(), b.cut_axes().end());
  if (cuts.empty()) return base;
  return QuadratureRule::for_cuts(base.n_theta(), base.n_phi(), cuts);
}

QuadratureRule integration_rule(const AngularDistribution& a, const QuadratureRule& base) {
  if (a.native_rule()) return *a.native_rule();
  if (a.cut_axes().empty()) return base;
  return QuadratureRule::for_cuts(base.n_theta(), base.n_phi(), a.cut_axes());
}

namespace {

struct OverlapSums {
  cplx product;
  double norm_a;
  double norm_b;
};

template <class Combine>
OverlapSums overlap_sums(const AngularDistribution& a, const AngularDistribution& b,
                         const QuadratureRule& rule, Combine combine) {
  const auto nodes = rule.nodes();
  std::vector<cplx> prod(nodes.size());
  std::vector<double> na(nodes.size()), nb(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const CVec3 va = a.field(nodes[i].direction);
    const CVec3 vb = b.field(nodes[i].direction);
    const double w = nodes[i].weight;
    prod[i] = w * combine(va, vb);
    na[i] = w * norm_sq(va);
    nb[i] = w * norm_sq(vb);
    if (!std::isfinite(prod[i].real()) || !std::isfinite(prod[i].imag()))
      throw NumericalFailure("non-finite overlap integrand at quadrature node " + std::to_string(i));
  }
  return {detail::pairwise_sum<cplx>(prod), detail::pairwise_sum<double>(na),
          detail::pairwise_sum<double>(nb)};
}

void check_normalized(const AngularDistribution& d, double n2) {
  if (std::abs(n2 - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "distribution '" << d.label() << "' is not normalized (squared norm " << n2 << ")";
    warn(msg.str());
  }
}

}  // namespace

cplx overlap(const AngularDistribution& a, const AngularDistribution& b, const QuadratureRule& rule) {
  const auto r = integration_rule(a, b, rule);
  const auto s = overlap_sums(a, b, r, [](const CVec3& x, const CVec3& y) { return bilinear(x, y); });
  check_normalized(a, s.norm_a);
  check_normalized(b, s.norm_b);
  return s.product;
}

cplx overlap_hermitian(const AngularDistribution& a, const AngularDistribution& b,
                       const QuadratureRule& rule) {
  const auto r = integration_rule(a, b, rule);
  const auto s = overlap_sums(a, b, r, [](const CVec3& x, const CVec3& y) { return hermitian(x, y); });
  check_normalized(a, s.norm_a);
  check_normalized(b, s.norm_b);
  return s.product;
}

double norm_squared(const AngularDistribution& a, const QuadratureRule& rule) {
  const auto r = integration_rule(a, rule);
  const auto nodes = r.nodes();
  std::vector<double> terms(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) terms[i] = nodes[i].weight * norm_sq(a.field(nodes[i].direction));
  return detail::pairwise_sum<double>(terms);
}

cplx integrate_sphere(const SphereIntegrand& f, const QuadratureRule& rule) {
  const auto nodes = rule.nodes();
  std::vector<cplx> terms(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Direction dir = Direction::from_vector(nodes[i].direction);
    const cplx value = f(dir, Polarization::Theta) + f(dir, Polarization::Phi);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      std::ostringstream msg;
      msg << "non-finite integrand at quadrature node " << i << " (theta=" << dir.theta
          << ", phi=" << dir.phi << ")";
      throw NumericalFailure(msg.str());
    }
    terms[i] = nodes[i].weight * value;
  }
  return detail::pairwise_sum<cplx>(terms);
}

cplx integrate_field(const std::function<cplx(const Vec3&)>& f, const QuadratureRule& rule) {
  const auto nodes = rule.nodes();
  std::vector<cplx> terms(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const cplx value = f(nodes[i].direction);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      const Direction dir = Direction::from_vector(nodes[i].direction);
      std::ostringstream msg;
      msg << "non-finite integrand at quadrature node " << i << " (theta=" << dir.theta
          << ", phi=" << dir.phi << ")";
      throw NumericalFailure(msg.str());
    }
    terms[i] = nodes[i].weight * value;
  }
  return detail::pairwise_sum<cplx>(terms);
}

}  // namespace sqzlev
