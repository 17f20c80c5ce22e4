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

#include "gtest/gtest.h"
#include "infreg/fixtures.hpp"
#include "infreg/radius.hpp"

namespace infreg {
namespace {

using fixtures::vec;

InfinityWindow DefaultWindow() {
  InfinityWindow w;
  w.schedule = InfinityWindow::doubling_schedule(10.0, 11);
  return w;
}

RegSamplerConfig Budget() {
  RegSamplerConfig c;
  c.budget = 2000;
  return c;
}

RadiusReport FullReport(const SetValuedMap& F, RadiusMode mode) {
  const auto w = DefaultWindow();
  const auto crit = criterion_check(F, vec({0}), w, Budget());
  const auto spec = build_perturbation(F, vec({0}), 8, 1, w.R);
  const auto pert = verify_perturbation(spec, F, vec({0}), w);
  return radius_report(F, vec({0}), crit, pert, mode, w);
}

TEST(RadiusReportTest, CoordinateMapAttainsRadius) {
  const auto rep = FullReport(fixtures::scaled_coordinate(1.0), RadiusMode::kPlain);
  EXPECT_TRUE(rep.pass) << rep.detail;
  EXPECT_TRUE(rep.evidence);
  EXPECT_NEAR(rep.lip, 1.0, 0.05);
  EXPECT_LE(rep.relative_gap, 0.05);
}

TEST(RadiusReportTest, ScaledAndPiecewiseFixtures) {
  for (const auto& F : {fixtures::scaled_coordinate(2.0), fixtures::three_piece()}) {
    const auto rep = FullReport(F, RadiusMode::kPlain);
    EXPECT_TRUE(rep.pass) << rep.detail << " gap " << rep.relative_gap;
  }
}

TEST(RadiusReportTest, DegenerateBranch) {
  const auto rep = FullReport(fixtures::horizontal_ray(), RadiusMode::kPlain);
  EXPECT_TRUE(rep.degenerate);
  EXPECT_TRUE(rep.pass);
}

TEST(RadiusReportTest, StrongModeNeedsStrongBase) {
  const auto rep = FullReport(fixtures::scaled_coordinate(1.0), RadiusMode::kStrong);
  ASSERT_TRUE(rep.strong_base.has_value());
  EXPECT_FALSE(rep.strong_base->decision);
  EXPECT_FALSE(rep.strong_perturbed);
  EXPECT_EQ(rep.strong_perturbed_diagnostic, "RegularityDestroyed");
  EXPECT_FALSE(rep.pass);
}

TEST(RadiusReportTest, MissingEvidenceFails) {
  const auto w = DefaultWindow();
  const auto F = fixtures::scaled_coordinate(1.0);
  const auto crit = criterion_check(F, vec({0}), w, Budget());
  PerturbationReport pert;
  pert.lip = 1.0;
  pert.pass = false;
  EXPECT_FALSE(radius_report(F, vec({0}), crit, pert, RadiusMode::kPlain, w).pass);
}

}  // namespace
}  // namespace infreg
