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

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqzlev/vec3.hpp"

namespace sqzlev {

enum class Axis { X, Y, Z };

Vec3 unit_vector(Axis axis);
char axis_name(Axis axis);
Axis parse_axis(char c);

enum class Polarization { Theta, Phi };

/// Propagation direction in spherical angles: theta in [0, pi], phi in [0, 2 pi).
struct Direction {
  double theta = 0.0;
  double phi = 0.0;

  Vec3 unit_vector() const;
  static Direction from_vector(Vec3 v);
};

/// The two real transverse unit vectors at a direction.
struct PolarizationBasis {
  Vec3 e_theta;
  Vec3 e_phi;
};

PolarizationBasis polarization_basis(const Direction& dir);
Vec3 polarization_vector(const Direction& dir, Polarization pol);

/// Product rule on the unit sphere: Gauss-Legendre in cos(theta') split at the
/// equator (n_theta / 2 nodes per hemisphere) times a uniform trapezoid in phi'.
/// Primed angles are measured in a frame whose pole is `pole`, which lets
/// distributions with a hemisphere cut around an arbitrary axis be integrated
/// without any node straddling the cut.
class QuadratureRule {
 public:
  struct Node {
    Vec3 direction;
    double weight;
  };

  static constexpr int kDefaultTheta = 64;
  static constexpr int kDefaultPhi = 128;

  QuadratureRule() : QuadratureRule(kDefaultTheta, kDefaultPhi, kEz) {}
  explicit QuadratureRule(int n_theta, int n_phi = kDefaultPhi, Vec3 pole = kEz);

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  Vec3 pole() const { return pole_; }
  std::span<const Node> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  /// Frame-local cos(theta') values, ascending; node i*n_phi + j sits at
  /// cos_theta()[i] and phi' = 2 pi j / n_phi.
  std::span<const double> cos_theta() const { return cos_theta_; }

  QuadratureRule aligned_to(Vec3 pole) const { return QuadratureRule(n_theta_, n_phi_, pole); }
  QuadratureRule refined() const { return QuadratureRule(2 * n_theta_, 2 * n_phi_, pole_); }

  /// Rule whose nodes avoid the planes orthogonal to each of `cut_axes`.
  /// One plane: the tensor rule aligned to it. Two distinct planes: pole along
  /// their intersection line and Gauss-Legendre arcs in phi' between the cut
  /// meridians (not a tensor grid). More than two: aligned to the first, with
  /// a warning.
  static QuadratureRule for_cuts(int n_theta, int n_phi, const std::vector<Vec3>& cut_axes);

  /// False for the meridian-cut rules of `for_cuts`.
  bool is_tensor() const { return tensor_; }

  /// Index of the node closest to `dir` on this rule's tensor grid. Throws
  /// InvalidArgument for non-tensor rules.
  std::size_t nearest_node(Vec3 dir) const;

 private:
  QuadratureRule(int n_theta, int n_phi, Vec3 pole, std::vector<double> cut_angles);

  bool tensor_ = true;
  int n_theta_;
  int n_phi_;
  Vec3 pole_;
  Vec3 frame_u_;
  Vec3 frame_v_;
  std::vector<double> cos_theta_;
  std::vector<Node> nodes_;
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// Square-integrable amplitude over (direction, polarization). Internally a
/// transverse complex field v(e_k) with A(e_k, eps) = eps . v(e_k). Immutable.
class AngularDistribution {
 public:
  using Field = std::function<CVec3(const Vec3&)>;

  /// `cut_axis`: when set, the field may be discontinuous across the plane
  /// orthogonal to it and integrations align their rule with that axis.
  static AngularDistribution from_field(std::string label, Field field,
                                        std::optional<Vec3> cut_axis = std::nullopt,
                                        std::map<std::string, double> parameters = {});

  CVec3 field(const Vec3& direction) const;
  cplx amplitude(const Direction& dir, Polarization pol) const;

  const std::string& label() const;
  const std::map<std::string, double>& parameters() const;
  /// First cut axis, if any.
  std::optional<Vec3> cut_axis() const;
  /// All cut axes; superpositions collect those of their terms.
  const std::vector<Vec3>& cut_axes() const;

  /// Rule the distribution is tabulated on, if any. Integrations involving a
  /// tabulated distribution use exactly this rule.
  const QuadratureRule* native_rule() const;

  /// Squared norm before construction-time normalization (1 when the
  /// closed form is normalized analytically).
  double construction_norm() const;

  AngularDistribution scaled(cplx factor) const;
  AngularDistribution conjugated() const;
  /// Returns the distribution divided by its numerical norm on `rule`.
  AngularDistribution normalized(const QuadratureRule& rule) const;

  struct Impl;

 private:
  explicit AngularDistribution(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;

  friend AngularDistribution make_superposition(const std::vector<std::pair<cplx, AngularDistribution>>&,
                                                const QuadratureRule&);
  friend AngularDistribution make_tabulated(std::string, const QuadratureRule&, std::vector<CVec3>,
                                            double);
};

/// Scattering distribution of centre-of-mass motion along `axis` for a laser
/// propagating along +z, polarized along x.
AngularDistribution make_motion_distribution(Axis axis, double arg_alpha0 = 0.0);

/// Geometry factor l_mu = (1, 2, 7) . e_mu / 5.
double motion_geometry_factor(Axis axis);

/// Dipole pattern for libration about `axis` (y or z).
AngularDistribution make_libration_distribution(Axis axis, double arg_alpha0 = 0.0);

enum class BeamSupport { Hemisphere, Full };

struct GaussianBeam {
  double na = 0.8;
  Vec3 axis = -1.0 * kEz;
  /// Angle of the linear polarization in the transverse plane, measured from
  /// the projection of e_x (e_y when the axis is along x) towards e_y.
  double polarization_angle = 0.0;
  /// Overrides polarization_angle when set; projected onto the transverse plane.
  std::optional<Vec3> polarization_vector;
  BeamSupport support = BeamSupport::Hemisphere;
};

/// Polarization unit vector of `beam` (transverse to its axis).
Vec3 beam_polarization(const GaussianBeam& beam);

/// Focused Gaussian beam: envelope exp(-(sin v / NA)^2), v the angle from the
/// axis, supported on the hemisphere centred on the axis unless
/// support == Full. Normalized numerically on `rule` (re-aligned to the axis).
AngularDistribution make_gaussian_beam(const GaussianBeam& beam,
                                       const QuadratureRule& rule = QuadratureRule());

/// Normalized linear combination sum_i c_i A_i.
AngularDistribution make_superposition(
    const std::vector<std::pair<cplx, AngularDistribution>>& terms,
    const QuadratureRule& rule = QuadratureRule());

/// Rule used when integrating products of `a` and `b`: a tabulated operand's
/// native rule, otherwise `QuadratureRule::for_cuts` over the cut axes of both
/// at the resolution of `base` (`base` itself when there are none).
QuadratureRule integration_rule(const AngularDistribution& a, const AngularDistribution& b,
                                const QuadratureRule& base);
QuadratureRule integration_rule(const AngularDistribution& a, const QuadratureRule& base);

/// xi = int dOmega sum_pol a * b (no conjugation). Warns when either operand
/// is not normalized.
cplx overlap(const AngularDistribution& a, const AngularDistribution& b,
             const QuadratureRule& rule = QuadratureRule());

/// int dOmega sum_pol a * conj(b).
cplx overlap_hermitian(const AngularDistribution& a, const AngularDistribution& b,
                       const QuadratureRule& rule = QuadratureRule());

double norm_squared(const AngularDistribution& a, const QuadratureRule& rule = QuadratureRule());

using SphereIntegrand = std::function<cplx(const Direction&, Polarization)>;

/// Quadrature of int dOmega sum_pol f. Throws NumericalFailure naming the node
/// when f is not finite there.
cplx integrate_sphere(const SphereIntegrand& f, const QuadratureRule& rule);

/// Quadrature of a function of the unit propagation vector.
cplx integrate_field(const std::function<cplx(const Vec3&)>& f, const QuadratureRule& rule);

struct TabulatedLoad {
  AngularDistribution distribution;
  double pre_normalization_norm;
};

/// Reads rows (theta, phi, Re A_theta, Im A_theta, Re A_phi, Im A_phi) with a
/// header line, one per node of `rule` in any order, and renormalizes.
TabulatedLoad load_tabulated(std::istream& in, const QuadratureRule& rule,
                             std::string label = "tabulated");
TabulatedLoad load_tabulated_file(const std::string& path, const QuadratureRule& rule);

/// Writes `dist` evaluated on every node of `rule` in the loader's format.
void write_tabulated(std::ostream& out, const AngularDistribution& dist, const QuadratureRule& rule);

}  // namespace sqzlev
