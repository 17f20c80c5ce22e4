// Copyright 2026 The infreg Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INFREG_GEOM_VERTICES_HPP_
#define INFREG_GEOM_VERTICES_HPP_

#include <optional>
#include <vector>

#include "infreg/core.hpp"
#include "infreg/geom/cone.hpp"
#include "infreg/geom/polyhedron.hpp"

namespace infreg::geom {

/// Vertices of a bounded nonempty polyhedron, via the double description of
/// its homogenisation {(x, t) : A x - b t <= 0, t >= 0}. Returns nullopt if
/// P is unbounded or empty.
inline std::optional<std::vector<Vec>> polytope_vertices(const Polyhedron& P) {
  const int d = P.dim();
  if (P.num_rows() == 0 || P.is_empty()) return std::nullopt;
  Mat H(P.num_rows() + 1, d + 1);
  H.setZero();
  H.topLeftCorner(P.num_rows(), d) = P.normals();
  H.block(0, d, P.num_rows(), 1) = -P.offsets();
  H(P.num_rows(), d) = -1.0;
  const Generators g = detail::double_description(H);
  if (!g.lineality.empty()) return std::nullopt;
  std::vector<Vec> out;
  for (const auto& r : g.rays) {
    if (r(d) <= 1e-12 * r.norm()) return std::nullopt;  // recession ray
    out.push_back(r.head(d) / r(d));
  }
  return out;
}

/// P is (numerically) a single point: every coordinate has zero width.
inline std::optional<Vec> single_point(const Polyhedron& P, double tol = kFeasTol) {
  auto p = feasible_point(P);
  if (!p) return std::nullopt;
  for (int i = 0; i < P.dim(); ++i) {
    for (double s : {1.0, -1.0}) {
      Mat row = Mat::Zero(1, P.dim());
      row(0, i) = -s;
      Vec rhs(1);
      rhs(0) = -s * (*p)(i) - tol;
      if (!P.with_rows(row, rhs).is_empty()) return std::nullopt;
    }
  }
  return p;
}

}  // namespace infreg::geom

#endif  // INFREG_GEOM_VERTICES_HPP_
