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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "infreg/geom/cone.hpp"
#include "infreg/geom/region.hpp"
#include "infreg/geom/unit_slice.hpp"

namespace infreg::geom {
namespace {

Vec V(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

bool HasRay(const PolyCone& c, const Vec& r) {
  for (const auto& g : c.rays()) {
    if ((g.normalized() - r.normalized()).norm() < 1e-9) return true;
  }
  return false;
}

TEST(PolarTest, NonnegativeOrthant) {
  const PolyCone q = PolyCone::from_generators(2, {V({1, 0}), V({0, 1})});
  const PolyCone p = q.polar();
  EXPECT_EQ(p.rays().size(), 2u);
  EXPECT_TRUE(HasRay(p, V({-1, 0})));
  EXPECT_TRUE(HasRay(p, V({0, -1})));
}

TEST(PolarTest, ZeroConeGivesWholeSpace) {
  EXPECT_TRUE(PolyCone::zero(3).polar().is_whole());
  EXPECT_TRUE(PolyCone::whole(3).polar().is_zero());
}

// Polar of a planar wedge, checked against direct angle sampling.
TEST(PolarTest, WedgeAgainstAngleSampling) {
  const std::vector<Vec> gens = {V({1, 0}), V({1, 1})};
  double lo = kInf, hi = -kInf;
  const int steps = 3600 * 8;
  for (int k = 0; k < steps; ++k) {
    const double th = 2.0 * std::numbers::pi * k / steps;
    const Vec w = V({std::cos(th), std::sin(th)});
    bool in = true;
    for (const auto& g : gens) in = in && w.dot(g) <= 1e-12;
    if (in) {
      lo = std::min(lo, th);
      hi = std::max(hi, th);
    }
  }
  // Sampled polar arc is [3pi/4, 3pi/2] (sampled at step pi/14400).
  EXPECT_NEAR(lo, 3 * std::numbers::pi / 4, 1e-3);
  EXPECT_NEAR(hi, 3 * std::numbers::pi / 2, 1e-3);

  const PolyCone p = PolyCone::from_generators(2, gens).polar();
  ASSERT_EQ(p.rays().size(), 2u);
  EXPECT_TRUE(HasRay(p, V({0, -1})));
  EXPECT_TRUE(HasRay(p, V({-1, 1})));
}

TEST(PolarTest, LinealityIsHandled) {
  // Half-plane {y >= 0}: polar is the ray -e2.
  const PolyCone h = PolyCone::from_generators(2, {V({0, 1})}, {V({1, 0})});
  const PolyCone p = h.polar();
  EXPECT_TRUE(p.lineality().empty());
  ASSERT_EQ(p.rays().size(), 1u);
  EXPECT_TRUE(HasRay(p, V({0, -1})));
}

PolyCone RandomCone(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, dim + 3);
  std::vector<Vec> gens;
  const int k = count(rng);
  for (int i = 0; i < k; ++i) {
    Vec v(dim);
    for (int j = 0; j < dim; ++j) v(j) = g(rng);
    gens.push_back(v);
  }
  std::vector<Vec> lin;
  if (rng() % 4 == 0) {
    Vec v(dim);
    for (int j = 0; j < dim; ++j) v(j) = g(rng);
    lin.push_back(v);
  }
  return PolyCone::from_generators(dim, gens, lin);
}

TEST(PolarProperty, DoubleDualIsIdentity) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 150; ++t) {
    const int dim = 2 + t % 3;
    const PolyCone c = RandomCone(rng, dim);
    EXPECT_TRUE(c.polar().polar().approx_equal(c, 1e-8));
  }
}

TEST(PolarProperty, PairingIsNonpositiveAndScaleInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const int dim = 2 + t % 3;
    const PolyCone c = RandomCone(rng, dim);
    const PolyCone p = c.polar();
    for (const auto& a : c.generator_list()) {
      for (const auto& b : p.generator_list()) EXPECT_LE(a.dot(b), 1e-9);
    }
    // Random conic combination stays in the cone under any positive scale.
    Vec z = Vec::Zero(dim);
    for (const auto& a : c.generator_list()) z += u(rng) * a;
    for (double s : {1e-6, 1.0, 1e6}) EXPECT_TRUE(c.contains(s * z, 1e-8));
  }
}

TEST(ConeTest, ContainsAndAngularDistance) {
  const PolyCone q = PolyCone::from_generators(2, {V({1, 0}), V({0, 1})});
  EXPECT_TRUE(q.contains(V({2, 3})));
  EXPECT_FALSE(q.contains(V({-1, 3})));
  EXPECT_NEAR(q.angular_distance(V({-1, 1})), std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(q.angular_distance(V({-1, -1})), 1.0, 1e-12);
}

TEST(ConeUnionTest, ReduceAndCompare) {
  const PolyCone big = PolyCone::from_generators(2, {V({1, 0}), V({0, 1})});
  const PolyCone small = PolyCone::from_generators(2, {V({1, 1})});
  ConeUnion a(2, {big, small});
  EXPECT_EQ(a.reduced().size(), 1u);
  EXPECT_TRUE(a.approx_equal(ConeUnion(2, {big})));
  EXPECT_FALSE(ConeUnion(2, {small}).approx_equal(ConeUnion(2, {big})));
  EXPECT_FALSE(ConeUnion(2).approx_equal(ConeUnion(2, {PolyCone::zero(2)})));
}

TEST(UnitSliceTest, LineGraphNormal) {
  // Normals to the graph of y = c * x2 in R^2 x R: span{(0, -c, 1)}.
  for (double c : {1.0, 2.0, 0.5}) {
    const PolyCone k = PolyCone::from_generators(3, {}, {V({0, -c, 1})});
    auto r = min_first_norm_on_unit_second(k, 2);
    ASSERT_TRUE(r);
    EXPECT_NEAR(r->value, c, 1e-12);
  }
}

TEST(UnitSliceTest, NoUnitSecondBlock) {
  const PolyCone k = PolyCone::from_generators(3, {V({1, 0, 0})}, {V({0, 1, 0})});
  EXPECT_FALSE(min_first_norm_on_unit_second(k, 2).has_value());
}

// With a single output coordinate the unit sphere is {+1, -1}, so the
// value is the smaller of two min-norm slice problems.
TEST(UnitSliceProperty, MatchesTwoSliceOracleForScalarOutput) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 120; ++t) {
    const int n = 1 + t % 3;
    const PolyCone k = RandomCone(rng, n + 1);
    if (k.rays().size() > 12) continue;
    double oracle = kInf;
    for (double s : {1.0, -1.0}) {
      auto x = min_norm_in_slice(k, n, V({s}));
      if (x) oracle = std::min(oracle, x->norm());
    }
    auto r = min_first_norm_on_unit_second(k, n);
    if (oracle == kInf) {
      EXPECT_FALSE(r.has_value());
    } else {
      ASSERT_TRUE(r);
      EXPECT_NEAR(r->value, oracle, 1e-8 * std::max(1.0, oracle));
    }
  }
}

}  // namespace
}  // namespace infreg::geom
