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
#include <random>

#include "gtest/gtest.h"
#include "infreg/fixtures.hpp"
#include "infreg/lgsolve.hpp"
#include "infreg/perturb.hpp"

namespace infreg {
namespace {

using fixtures::vec;

// One bump on F(x1, x2) = {x2} centred at (20, 0): lip = t p |x*| = 0.28.
PerturbationSpec SingleBump() {
  PerturbationSpec s;
  s.n = 2;
  s.m = 1;
  s.K = 1;
  s.rgplus = 0.28;
  s.ybar = vec({0});
  Bump b;
  b.center = vec({20, 0});
  b.partner = vec({0});
  b.xstar = vec({0, 1});
  b.ystar = vec({1});
  b.direction = vec({1});
  b.scale = bump_scale(1, s.rgplus, 1.0);
  b.exponent = bump_exponent(1);
  b.radius = 0.25;
  s.bumps.push_back(b);
  validate_perturbation(s);
  return s;
}

SolverParams Params() {
  SolverParams p;
  p.kappa = 1.05;
  p.lambda = 0.30;
  p.epsilon = 0.05;
  p.max_iters = 500;
  return p;
}

// Root of z2 + f(z1, z2) = y by bisection; z2 -> z2 + f is increasing when
// the bump's slope stays below 1.
double BisectFixedPoint(const PerturbationSpec& s, double z1, double y) {
  auto g = [&](double z2) { return z2 + eval_perturbation(s, vec({z1, z2}))(0) - y; };
  double lo = y - 10.0, hi = y + 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(LgSolveTest, ZeroPerturbationIsOneProjection) {
  const auto F = fixtures::scaled_coordinate(1.0);
  const auto f = SampledMap::zero(2, 1);
  const Vec x0 = vec({30, 0.4});
  const auto tr = lg_solve(F, f, vec({0.1}), x0, Params());
  ASSERT_TRUE(tr.converged());
  ASSERT_EQ(tr.iterates.size(), 2u);
  EXPECT_LE((tr.iterates[1] - vec({30, 0.1})).norm(), 4 * kEps * 30);
  const auto cert = certify_bound(tr, F, f, vec({0.1}), x0, 1.05, 0.0);
  EXPECT_TRUE(cert.pass);
  EXPECT_NEAR(cert.distance_moved, 0.3, 1e-15);
  EXPECT_NEAR(cert.residual_at_start, 0.3, 1e-15);
  EXPECT_NEAR(cert.bound, 1.05 * 0.3 + 1e-9, 1e-15);
}

TEST(LgSolveTest, SolutionStartGivesEmptyTrace) {
  const auto F = fixtures::scaled_coordinate(1.0);
  const auto tr = lg_solve(F, SampledMap::zero(2, 1), vec({0.5}), vec({12, 0.5}), Params());
  EXPECT_TRUE(tr.converged());
  EXPECT_EQ(tr.iterates.size(), 1u);
  EXPECT_TRUE(tr.residuals.empty());
}

TEST(LgSolveTest, BumpFixtureMatchesBisection) {
  const auto F = fixtures::scaled_coordinate(1.0);
  const auto spec = SingleBump();
  const auto f = as_sampled_map(spec);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x0 = vec({20 + 0.3 * u(rng), 0.3 * u(rng)});
    const Vec y = vec({0.05 * u(rng)});
    const auto tr = lg_solve(F, f, y, x0, Params());
    ASSERT_TRUE(tr.converged());
    for (double r : tr.ratios) EXPECT_LE(r, 0.4175);
    for (std::size_t k = 0; k < tr.residuals.size(); ++k) {
      EXPECT_LE(tr.residuals[k], std::pow(tr.contraction_bound(), k) * tr.residuals[0] * (1 + 1e-12));
    }
    EXPECT_LE(tr.terminal_residual, 1e-9);
    EXPECT_DOUBLE_EQ(tr.terminal(0), x0(0));
    EXPECT_NEAR(tr.terminal(1), BisectFixedPoint(spec, x0(0), y(0)), 1e-10);
    EXPECT_TRUE(certify_bound(tr, F, f, y, x0, 1.05, 0.30).pass);
  }
}

TEST(LgSolveTest, CauchyConsistency) {
  const auto F = fixtures::scaled_coordinate(1.0);
  const auto f = as_sampled_map(SingleBump());
  const Vec x0 = vec({20.05, 0.2});
  const auto tr = lg_solve(F, f, vec({0.01}), x0, Params());
  ASSERT_TRUE(tr.converged());
  const double q = tr.contraction_bound();
  const double first = (tr.iterates[1] - tr.iterates[0]).norm();
  for (std::size_t m = 0; m < tr.iterates.size(); ++m) {
    for (std::size_t n = m; n < tr.iterates.size(); ++n) {
      EXPECT_LE((tr.iterates[n] - tr.iterates[m]).norm(), std::pow(q, m) / (1 - q) * first + 1e-15);
    }
  }
}

TEST(LgSolveTest, Failures) {
  SampledMap steep;
  steep.n = 2;
  steep.m = 1;
  steep.eval = [](const Vec& x) { return vec({2.0 * x(1)}); };
  EXPECT_THROW(lg_solve(fixtures::scaled_coordinate(1.0), steep, vec({1}), vec({15, 0}), Params()),
               ContractionViolated);
  EXPECT_THROW(lg_solve(fixtures::horizontal_ray(), SampledMap::zero(1, 1), vec({1}), vec({15}), Params()),
               EmptyPreimage);
  SolverParams bad = Params();
  bad.epsilon = 0.9;
  EXPECT_THROW(lg_solve(fixtures::scaled_coordinate(1.0), SampledMap::zero(2, 1), vec({0}), vec({15, 0}), bad),
               InvalidArgument);
}

TEST(LgSolveTest, DamagedTraceFailsCertificate) {
  const auto F = fixtures::scaled_coordinate(1.0);
  const auto f = SampledMap::zero(2, 1);
  const Vec x0 = vec({30, 0.4});
  auto tr = lg_solve(F, f, vec({0.1}), x0, Params());
  tr.terminal = vec({300, 0.1});
  EXPECT_FALSE(certify_bound(tr, F, f, vec({0.1}), x0, 1.05, 0.0).pass);
}

TEST(LgSolveTest, ZeroPerturbationReproducesRegEstimate) {
  InfinityWindow w;
  w.schedule = InfinityWindow::doubling_schedule(10.0, 11);
  RegSamplerConfig cfg;
  cfg.budget = 1000;
  const auto F = fixtures::three_piece();
  const auto plain = estimate_reg_at_infinity(F, vec({0}), w, cfg);
  const auto summed = estimate_reg_perturbed(SumMap(F, SampledMap::zero(2, 1)), vec({0}), w, cfg);
  EXPECT_NEAR(summed.value, plain.value, 1e-12);
}

}  // namespace
}  // namespace infreg
