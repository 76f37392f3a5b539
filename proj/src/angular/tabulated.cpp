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
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "../detail/summation.hpp"
#include "sqzlev/angular.hpp"
#include "sqzlev/error.hpp"
#include "sqzlev/table.hpp"

namespace sqzlev {

AngularDistribution make_tabulated(std::string label, const QuadratureRule& rule, std::vector<CVec3> values,
                                   double construction_norm);

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

TabulatedLoad load_tabulated(std::istream& in, const QuadratureRule& rule, std::string label) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("tabulated distribution: empty input");
  if (split_csv_line(line).size() != 6)
    throw InvalidArgument("tabulated distribution: header must have 6 columns "
                          "(theta,phi,re_a_theta,im_a_theta,re_a_phi,im_a_phi)");

  std::vector<CVec3> values(rule.size());
  std::vector<bool> seen(rule.size(), false);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6)
      throw InvalidArgument("tabulated distribution: row " + std::to_string(row) + " has " +
                            std::to_string(f.size()) + " fields, expected 6");
    double v[6];
    for (int i = 0; i < 6; ++i) {
      try {
        v[i] = parse_number(f[i]);
      } catch (const InvalidArgument&) {
        throw InvalidArgument("tabulated distribution: row " + std::to_string(row) + " field " +
                              std::to_string(i + 1) + " is not a number");
      }
    }
    const Direction dir{v[0], v[1]};
    const Vec3 k = dir.unit_vector();
    const std::size_t node = rule.nearest_node(k);
    const double miss = norm(k - rule.nodes()[node].direction);
    if (miss > 1e-8)
      throw InvalidArgument("tabulated distribution: row " + std::to_string(row) +
                            " does not lie on a node of the quadrature grid");
    if (seen[node])
      throw InvalidArgument("tabulated distribution: row " + std::to_string(row) + " repeats a node");
    seen[node] = true;
    const auto basis = polarization_basis(dir);
    values[node] = cplx(v[2], v[3]) * basis.e_theta + cplx(v[4], v[5]) * basis.e_phi;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw InvalidArgument("tabulated distribution: missing node " + std::to_string(i) + " of " +
                            std::to_string(seen.size()));

  const auto nodes = rule.nodes();
  std::vector<double> terms(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) terms[i] = nodes[i].weight * norm_sq(values[i]);
  const double n2 = detail::pairwise_sum<double>(terms);
  if (!std::isfinite(n2) || !(n2 > 0.0))
    throw NumericalFailure("tabulated distribution has non-positive norm");
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& v : values) v = cplx(scale) * v;
  return {make_tabulated(std::move(label), rule, std::move(values), n2), n2};
}

TabulatedLoad load_tabulated_file(const std::string& path, const QuadratureRule& rule) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open tabulated distribution '" + path + "'");
  return load_tabulated(in, rule, path);
}

void write_tabulated(std::ostream& out, const AngularDistribution& dist, const QuadratureRule& rule) {
  out << "theta,phi,re_a_theta,im_a_theta,re_a_phi,im_a_phi\n";
  for (const auto& node : rule.nodes()) {
    const Direction dir = Direction::from_vector(node.direction);
    const auto basis = polarization_basis(dir);
    const CVec3 v = dist.field(node.direction);
    const cplx at = project(v, basis.e_theta);
    const cplx ap = project(v, basis.e_phi);
    out << format_number(dir.theta) << ',' << format_number(dir.phi) << ',' << format_number(at.real())
        << ',' << format_number(at.imag()) << ',' << format_number(ap.real()) << ','
        << format_number(ap.imag()) << '\n';
  }
}

}  // namespace sqzlev
