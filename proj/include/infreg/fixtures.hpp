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

// Small polyhedral maps used by the test suites, the acceptance runner and
// the bundled scenario files.

#ifndef INFREG_FIXTURES_HPP_
#define INFREG_FIXTURES_HPP_

#include <cmath>
#include <vector>

#include "infreg/svmap.hpp"

namespace infreg::fixtures {

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

/// F(x1, x2) = {c * x2}.
inline SetValuedMap scaled_coordinate(double c) {
  auto p = geom::Polyhedron::from_rows(3, {}, {{vec({0.0, -c, 1.0}), 0.0}});
  return SetValuedMap(2, 1, std::vector<geom::Polyhedron>{p});
}

/// F(x1, x2) = {phi(x2)} with phi(t) = t (t <= 0), 3t (0 <= t <= 1),
/// 3 + (t - 1) / 2 (t >= 1).
inline SetValuedMap three_piece() {
  std::vector<geom::Polyhedron> pieces;
  pieces.push_back(geom::Polyhedron::from_rows(3, {{vec({0, 1, 0}), 0.0}},
                                               {{vec({0, -1, 1}), 0.0}}));
  pieces.push_back(geom::Polyhedron::from_rows(
      3, {{vec({0, -1, 0}), 0.0}, {vec({0, 1, 0}), 1.0}}, {{vec({0, -3, 1}), 0.0}}));
  pieces.push_back(geom::Polyhedron::from_rows(3, {{vec({0, -1, 0}), -1.0}},
                                               {{vec({0, -0.5, 1}), 2.5}}));
  return SetValuedMap(2, 1, std::move(pieces));
}

/// gph F = {(x, 0) : x >= 1} in R x R.
inline SetValuedMap horizontal_ray() {
  auto p = geom::Polyhedron::from_rows(2, {{vec({-1, 0}), -1.0}}, {{vec({0, 1}), 0.0}});
  return SetValuedMap(1, 1, std::vector<geom::Polyhedron>{p});
}

/// Piecewise-linear decreasing staircase through (2^j, 2^-j), j = 0..9,
/// reaching 0 at x = 1024 and continuing as the ray y = 0.
inline SetValuedMap staircase() {
  std::vector<geom::Polyhedron> pieces;
  for (int j = 0; j < 10; ++j) {
    const double x0 = std::ldexp(1.0, j), x1 = std::ldexp(1.0, j + 1);
    const double y0 = std::ldexp(1.0, -j), y1 = j < 9 ? std::ldexp(1.0, -j - 1) : 0.0;
    const double slope = (y1 - y0) / (x1 - x0);
    // y - slope * x = y0 - slope * x0 on [x0, x1].
    pieces.push_back(geom::Polyhedron::from_rows(
        2, {{vec({-1, 0}), -x0}, {vec({1, 0}), x1}}, {{vec({-slope, 1}), y0 - slope * x0}}));
  }
  pieces.push_back(
      geom::Polyhedron::from_rows(2, {{vec({-1, 0}), -1024.0}}, {{vec({0, 1}), 0.0}}));
  return SetValuedMap(1, 1, std::move(pieces));
}

}  // namespace infreg::fixtures

#endif  // INFREG_FIXTURES_HPP_
