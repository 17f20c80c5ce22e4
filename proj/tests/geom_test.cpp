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

#include <random>

#include "gtest/gtest.h"
#include "infreg/geom/polyhedron.hpp"
#include "infreg/geom/region.hpp"

namespace infreg::geom {
namespace {

Vec V(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Polyhedron UnitBox2() { return Polyhedron::box(V({-1, -1}), V({1, 1})); }

// Brute-force nearest feasible grid point; independent of the QP path.
Vec GridNearest(const Polyhedron& P, const Vec& z, double lo, double hi, double step) {
  Vec best;
  double best_d = kInf;
  for (double x = lo; x <= hi + 1e-12; x += step) {
    for (double y = lo; y <= hi + 1e-12; y += step) {
      const Vec p = V({x, y});
      if (!P.contains(p, 1e-12)) continue;
      const double d = (p - z).norm();
      if (d < best_d) {
        best_d = d;
        best = p;
      }
    }
  }
  return best;
}

TEST(ProjectTest, InteriorPointIsFixed) {
  const Vec p = project(V({0.5, 0.5}), UnitBox2());
  EXPECT_NEAR((p - V({0.5, 0.5})).norm(), 0.0, 1e-15);
}

TEST(ProjectTest, FaceProjection) {
  const Vec p = project(V({2, 0}), UnitBox2());
  EXPECT_NEAR((p - V({1, 0})).norm(), 0.0, 1e-15);
}

TEST(ProjectTest, HalfplaneMatchesGridOracle) {
  const Polyhedron P(Mat{{1.0, 1.0}}, V({0.0}));
  const Vec oracle = GridNearest(P, V({1, 1}), -2, 2, 0.01);
  EXPECT_NEAR((oracle - V({0, 0})).norm(), 0.0, 1e-9);
  const Vec p = project(V({1, 1}), P);
  EXPECT_NEAR((p - V({0, 0})).norm(), 0.0, 1e-14);
}

TEST(ProjectTest, EmptyPolyhedronThrows) {
  const Polyhedron P = Polyhedron::from_rows(1, {{V({1}), 0.0}, {V({-1}), -1.0}});
  EXPECT_TRUE(P.is_empty());
  EXPECT_THROW(project(V({0}), P), EmptyPolyhedron);
  EXPECT_EQ(distance(V({0}), P), kInf);
}

TEST(ProjectTest, ZeroNormalRejected) {
  EXPECT_THROW(Polyhedron(Mat{{0.0, 0.0}}, V({1.0})), InvalidArgument);
}

TEST(ProjectTest, EqualityRowsHandled) {
  // Line y = x written as two opposite inequalities, plus x >= 1.
  const Polyhedron P = Polyhedron::from_rows(2, {{V({-1, 0}), -1.0}}, {{V({-1, 1}), 0.0}});
  const Vec p = project(V({-3, 5}), P);
  EXPECT_NEAR((p - V({1, 1})).norm(), 0.0, 1e-12);
  const Vec q = project(V({4, 2}), P);
  EXPECT_NEAR((q - V({3, 3})).norm(), 0.0, 1e-12);
}

TEST(ProjectTest, KktCharacterisationOnRandomPolytopes) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + trial % 4;
    const int rows = dim + 1 + trial % 6;
    Mat A(rows, dim);
    Vec b(rows);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < dim; ++j) A(i, j) = g(rng);
      b(i) = u(rng);  // 0 is strictly feasible
    }
    const Polyhedron P(A, b);
    Vec z(dim);
    for (int j = 0; j < dim; ++j) z(j) = 3.0 * g(rng);
    const Vec p = project(z, P);
    EXPECT_LE(P.max_violation(p), 1e-10);
    // <z - p, w - p> <= 0 for feasible w.
    for (int s = 0; s < 30; ++s) {
      Vec w(dim);
      for (int j = 0; j < dim; ++j) w(j) = g(rng);
      auto wp = P.try_project(w);
      ASSERT_TRUE(wp);
      EXPECT_LE((z - p).dot(wp->point - p), 1e-9);
    }
  }
}

TEST(DistUnionTest, Examples) {
  EXPECT_EQ(dist_union(V({0, 0}), UnionRegion(2, {UnitBox2()})), 0.0);
  const UnionRegion R(2, {UnitBox2(), Polyhedron::box(V({5, -1}), V({6, 1}))});
  EXPECT_NEAR(dist_union(V({3, 0}), R), 2.0, 1e-14);
  const Polyhedron empty = Polyhedron::from_rows(2, {{V({1, 0}), 0.0}, {V({-1, 0}), -1.0}});
  EXPECT_EQ(dist_union(V({0.3, -7}), UnionRegion(2, {empty, empty})), kInf);
  EXPECT_THROW(dist_union(V({0}), R), DimensionMismatch);
}

TEST(DistUnionTest, ZeroIffMember) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const UnionRegion R(2, {UnitBox2(), Polyhedron(Mat{{1.0, -1.0}}, V({-2.5}))});
  for (int i = 0; i < 2000; ++i) {
    const Vec z = V({u(rng), u(rng)});
    const double d = dist_union(z, R);
    EXPECT_EQ(d <= 1e-9, R.contains(z, 1e-9)) << z.transpose();
  }
}

TEST(FixCoordinatesTest, SubstitutesFixedBlock) {
  // {(x, y) : y >= x, y <= 2}; fix x = 1 -> y in [1, 2].
  const Polyhedron P = Polyhedron::from_rows(2, {{V({1, -1}), 0.0}, {V({0, 1}), 2.0}});
  auto s = fix_coordinates(P, 0, V({1.0}));
  ASSERT_TRUE(s);
  EXPECT_TRUE(s->contains(V({1.5})));
  EXPECT_FALSE(s->contains(V({0.5})));
  // A row with no free part that is violated.
  const Polyhedron Q = Polyhedron::from_rows(2, {{V({-1, 0}), -1.0}});
  EXPECT_FALSE(fix_coordinates(Q, 0, V({0.0})).has_value());
}

TEST(MinNormInSliceTest, Examples) {
  // {(x*, w) : x* = 2 y*, w = -y*} = span{(2, -1)}, written as (1, 2).z = 0.
  const PolyCone line = PolyCone::from_halfspaces(2, Mat{{1.0, 2.0}, {-1.0, -2.0}});
  auto a = min_norm_in_slice(line, 1, V({1.0}));
  ASSERT_TRUE(a);
  EXPECT_NEAR((*a)(0), 2.0, 1e-12);

  // x*-component forced to 0.
  const PolyCone axis = PolyCone::from_generators(2, {}, {V({0, 1})});
  auto b = min_norm_in_slice(axis, 1, V({1.0}));
  ASSERT_TRUE(b);
  EXPECT_NEAR((*b)(0), 0.0, 1e-15);

  // Only y* = 0 admissible -> infeasible slice.
  const PolyCone flat = PolyCone::from_generators(2, {}, {V({1, 0})});
  EXPECT_FALSE(min_norm_in_slice(flat, 1, V({1.0})).has_value());

  EXPECT_THROW(min_norm_in_slice(line, 1, V({2.0})), InvalidArgument);
}

}  // namespace
}  // namespace infreg::geom
