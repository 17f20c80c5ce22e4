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

// Consolidated radius report: compares the Lipschitz modulus of the
// constructed destabiliser with 1/reg.

#ifndef INFREG_RADIUS_HPP_
#define INFREG_RADIUS_HPP_

#include <cmath>
#include <optional>
#include <string>

#include "infreg/core.hpp"
#include "infreg/perturb.hpp"
#include "infreg/regmod.hpp"
#include "infreg/svmap.hpp"

namespace infreg {

enum class RadiusMode { kPlain, kStrong };

inline const char* to_string(RadiusMode m) { return m == RadiusMode::kPlain ? "plain" : "strong"; }

struct RadiusReport {
  RadiusMode mode = RadiusMode::kPlain;
  double rg_plus = kInf;
  double reg = kInf;
  double inv_reg = 0.0;
  double lip = kInf;          // sampled lip f(infinity) of the destabiliser
  double relative_gap = kInf; // |lip - 1/reg| * reg
  double tolerance = 0.05;
  bool chain_holds = false;   // lip >= 1/reg - tol / reg
  bool evidence = false;      // perturbation checks passed
  bool degenerate = false;    // rg+ = 0 with reg = +inf
  std::optional<StrongReport> strong_base;
  bool strong_perturbed = true;  // strong regularity of F + f (strong mode)
  std::string strong_perturbed_diagnostic;
  bool pass = false;
  std::string detail;
};

/// PASS when the destabiliser's modulus is within tol of 1/reg (relative)
/// and the perturbation verification passed. Strong mode also asks for a
/// YES from the strong check of F and a NO for F + f.
inline RadiusReport radius_report(const SetValuedMap& F, const Vec& ybar, const CriterionReport& crit,
                                  const PerturbationReport& pert, RadiusMode mode,
                                  const InfinityWindow& w, double tol = 0.05,
                                  const StrongConfig& strong_cfg = {}) {
  RadiusReport rep;
  rep.mode = mode;
  rep.tolerance = tol;
  rep.rg_plus = crit.rg_plus;
  rep.reg = crit.reg;
  rep.inv_reg = crit.inv_reg;
  rep.lip = pert.lip;
  rep.evidence = pert.pass;
  rep.degenerate = crit.degenerate;

  if (rep.degenerate) {
    rep.relative_gap = 0.0;
    rep.chain_holds = true;
    rep.pass = true;
    rep.detail = "radius 0: F is not regular at infinity";
  } else if (!std::isfinite(rep.reg) || rep.reg <= 0.0) {
    rep.detail = "reg estimate unavailable";
  } else {
    rep.relative_gap = std::abs(rep.lip - rep.inv_reg) * rep.reg;
    rep.chain_holds = rep.lip >= rep.inv_reg * (1.0 - tol);
    rep.pass = rep.relative_gap <= tol && rep.chain_holds && rep.evidence;
    if (!rep.evidence) rep.detail = "destabilisation evidence missing";
  }
  if (mode == RadiusMode::kPlain) return rep;

  rep.strong_base = strong_regularity_check(F, ybar, w, strong_cfg);
  // F + f loses metric regularity near the bump centres, so it cannot be
  // strongly regular there.
  const auto* destab = pert.find("destabilization");
  const auto* blowup = pert.find("reg_blowup");
  if (destab && destab->pass && blowup && blowup->pass) {
    rep.strong_perturbed = false;
    rep.strong_perturbed_diagnostic = "RegularityDestroyed";
  } else {
    rep.strong_perturbed_diagnostic = "NoDestabilisationEvidence";
  }
  if (!rep.strong_base->decision) {
    rep.pass = false;
    rep.detail = "strong check of F: " + rep.strong_base->diagnostic;
  } else if (rep.strong_perturbed) {
    rep.pass = false;
    rep.detail = "F + f not shown to lose strong regularity";
  }
  return rep;
}

}  // namespace infreg

#endif  // INFREG_RADIUS_HPP_
