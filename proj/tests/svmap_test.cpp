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
#include "infreg/fixtures.hpp"
#include "infreg/svmap.hpp"

namespace infreg {
namespace {

using fixtures::vec;
using geom::Polyhedron;

SetValuedMap Identity1() {
  return SetValuedMap(1, 1, {Polyhedron::from_rows(2, {}, {{vec({1, -1}), 0.0}})});
}

TEST(ImageSliceTest, Examples) {
  const auto id = image_slice(Identity1(), vec({3}));
  ASSERT_EQ(id.size(), 1u);
  EXPECT_TRUE(id.contains(vec({3})));
  EXPECT_FALSE(id.contains(vec({3.1})));

  EXPECT_TRUE(image_slice(fixtures::horizontal_ray(), vec({0})).is_empty());

  // {y >= x} u {y <= -x} at x = 1.
  const SetValuedMap two(1, 1, {Polyhedron::from_rows(2, {{vec({1, -1}), 0.0}}),
                                Polyhedron::from_rows(2, {{vec({1, 1}), 0.0}})});
  const auto s = image_slice(two, vec({1}));
  for (double y : {1.0, 5.0, -1.0, -7.0}) EXPECT_TRUE(s.contains(vec({y}))) << y;
  for (double y : {0.0, 0.99, -0.99}) EXPECT_FALSE(s.contains(vec({y}))) << y;
}

TEST(PreimageSliceTest, Examples) {
  EXPECT_TRUE(preimage_slice(Identity1(), vec({3})).contains(vec({3})));
  const auto ray = fixtures::horizontal_ray();
  const auto s = preimage_slice(ray, vec({0}));
  EXPECT_TRUE(s.contains(vec({1})));
  EXPECT_TRUE(s.contains(vec({1e6})));
  EXPECT_FALSE(s.contains(vec({0.5})));
  EXPECT_TRUE(preimage_slice(ray, vec({0.1})).is_empty());
}

TEST(DistToImageTest, Examples) {
  EXPECT_EQ(dist_to_image(Identity1(), vec({1}), vec({1})), 0.0);
  EXPECT_NEAR(dist_to_image(Identity1(), vec({1}), vec({3})), 2.0, 1e-15);
  EXPECT_EQ(dist_to_image(fixtures::horizontal_ray(), vec({0}), vec({0})), kInf);
}

TEST(JelonekTest, Examples) {
  const auto a = jelonek_contains(fixtures::horizontal_ray(), vec({0}));
  ASSERT_TRUE(a.contains);
  EXPECT_NEAR((a.direction - vec({1})).norm(), 0.0, 1e-12);

  EXPECT_FALSE(jelonek_contains(Identity1(), vec({0})).contains);

  const SetValuedMap both(1, 1, {Polyhedron::from_rows(2, {}, {{vec({1, -1}), 0.0}}),
                                 Polyhedron::from_rows(2, {{vec({1, 0}), -1.0}},
                                                       {{vec({0, 1}), 0.0}})});
  const auto c = jelonek_contains(both, vec({0}));
  ASSERT_TRUE(c.contains);
  EXPECT_EQ(c.piece, 1);
  EXPECT_NEAR((c.direction - vec({-1})).norm(), 0.0, 1e-12);

  EXPECT_FALSE(jelonek_contains(fixtures::horizontal_ray(), vec({0.5})).contains);
  EXPECT_TRUE(jelonek_contains(fixtures::scaled_coordinate(1.0), vec({7})).contains);
}

TEST(JelonekProperty, MonotoneUnderAddingPieces) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 60; ++t) {
    std::vector<Polyhedron> pieces;
    bool was = false;
    for (int k = 0; k < 4; ++k) {
      Mat A(2, 2);
      Vec b(2);
      for (int i = 0; i < 2; ++i) {
        A(i, 0) = g(rng);
        A(i, 1) = g(rng);
        b(i) = g(rng);
      }
      pieces.emplace_back(A, b);
      const bool now = jelonek_contains(SetValuedMap(1, 1, pieces), vec({0})).contains;
      EXPECT_TRUE(!was || now);
      was = now;
    }
  }
}

TEST(SliceProperty, ConsistentMembership) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const SetValuedMap F = fixtures::three_piece();
  for (int i = 0; i < 500; ++i) {
    const Vec x = vec({u(rng), u(rng)});
    // Half the points on the graph, half random.
    Vec y = vec({u(rng)});
    if (i % 2 == 0) {
      const auto img = image_slice(F, x);
      ASSERT_FALSE(img.is_empty());
      y = img.nearest(y)->first;
    }
    const bool in = F.contains(x, y);
    EXPECT_EQ(in, image_slice(F, x).contains(y));
    EXPECT_EQ(in, preimage_slice(F, y).contains(x));
    EXPECT_EQ(in, dist_to_image(F, x, y) <= 1e-9);
  }
}

TEST(SumMapTest, ZeroPerturbationIsObservationallyEqual) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const SetValuedMap F = fixtures::three_piece();
  const SumMap G(F, SampledMap::zero(2, 1));
  for (int i = 0; i < 1000; ++i) {
    const Vec x = vec({u(rng), u(rng)});
    const Vec y = vec({u(rng)});
    EXPECT_EQ(G.dist_to_image(x, y), dist_to_image(F, x, y));
  }
}

TEST(SumMapTest, ConstantShift) {
  const SumMap G(Identity1(), SampledMap::constant(1, vec({2.5})));
  EXPECT_EQ(G.dist_to_image(vec({0}), vec({2.5})), 0.0);
  EXPECT_TRUE(G.image_slice(vec({1})).contains(vec({3.5})));
}

TEST(SetValuedMapTest, ScaleOutputAndInverse) {
  const auto F = fixtures::scaled_coordinate(1.0).scale_output(2.0);
  EXPECT_TRUE(F.contains(vec({0, 1.5}), vec({3})));
  const auto inv = fixtures::horizontal_ray().inverse();
  EXPECT_TRUE(inv.contains(vec({0}), vec({4})));
  EXPECT_FALSE(inv.contains(vec({0}), vec({0})));
  EXPECT_THROW(SetValuedMap(0, 1, geom::UnionRegion(1)), InvalidArgument);
}

}  // namespace
}  // namespace infreg
