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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "infreg/fixtures.hpp"
#include "infreg/lgsolve.hpp"
#include "infreg/normals.hpp"
#include "infreg/perturb.hpp"
#include "infreg/radius.hpp"
#include "infreg/regmod.hpp"

namespace infreg {
namespace {

using fixtures::vec;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Named {
  std::string name;
  SetValuedMap F;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

InfinityWindow Window() {
  InfinityWindow w;
  w.R = 10.0;
  w.r = 0.5;
  w.gamma = 1.0;
  w.schedule = InfinityWindow::doubling_schedule(10.0, 11);
  return w;
}

RegSamplerConfig Sampler() {
  RegSamplerConfig c;
  c.budget = 10000;
  return c;
}

const Vec kYbar = vec({0});

Outcome CriterionEquality() {
  Outcome o{true, ""};
  for (const auto& [name, F] : std::vector<Named>{{"x2", fixtures::scaled_coordinate(1.0)},
                                                  {"2x2", fixtures::scaled_coordinate(2.0)},
                                                  {"three-piece", fixtures::three_piece()}}) {
    const auto t0 = Clock::now();
    const auto rep = criterion_check(F, kYbar, Window(), Sampler(), 0.05);
    const double dt = seconds_since(t0);
    const bool ok = rep.pass && !rep.degenerate && rep.est.candidates == 10000 && dt < 10.0;
    o.pass = o.pass && ok;
    o.detail += name + ": rg+=" + fmt("%.6g", rep.rg_plus) + " 1/reg=" + fmt("%.6g", rep.inv_reg) +
                " gap=" + fmt("%.2e", rep.gap) + " n=" + std::to_string(rep.est.candidates) + "/" + std::to_string(rep.est.samples) + " t=" +
                fmt("%.2fs", dt) + "; ";
  }
  return o;
}

Outcome DegenerateBranch() {
  const auto F = fixtures::horizontal_ray();
  const auto rg = rg_plus(F, kYbar);
  const auto est = estimate_reg_at_infinity(F, kYbar, Window(), Sampler());
  const double witness = est.witness.denominator > 0 ? est.witness.ratio : kInf;
  return {rg.value <= 1e-9 && est.failure,
          "rg+=" + fmt("%.3g", rg.value) + " failure=" + (est.failure ? "yes" : "no") +
              " witness ratio=" + fmt("%.3g", witness)};
}

Outcome OuterLimit() {
  Outcome o{true, ""};
  SampledLimitConfig cfg;
  cfg.tol = kSampledAngleTol;
  cfg.throw_if_unstable = false;
  for (const auto& [name, F] : std::vector<Named>{{"x2", fixtures::scaled_coordinate(1.0)},
                                                  {"2x2", fixtures::scaled_coordinate(2.0)},
                                                  {"three-piece", fixtures::three_piece()},
                                                  {"ray", fixtures::horizontal_ray()},
                                                  {"staircase", fixtures::staircase()}}) {
    const auto exact = normal_cone_at_infinity(F, kYbar);
    double worst = 0.0;
    bool ok = true;
    for (double s : {1.0, -1.0}) {
      const auto lim = sampled_coderivative_limit(F, kYbar, vec({s}), Window(), cfg);
      const double h = lim.cone.ray_hausdorff(exact);
      worst = std::max(worst, h);
      ok = ok && lim.stabilized && h <= kSampledAngleTol && lim.cone.approx_equal(exact, kSampledAngleTol);
    }
    o.pass = o.pass && ok;
    o.detail += name + " " + fmt("%.1e", worst) + "; ";
  }
  return o;
}

Outcome PerturbationGuarantees() {
  Outcome o{true, ""};
  for (const auto& [name, F] : std::vector<Named>{{"x2", fixtures::scaled_coordinate(1.0)},
                                                  {"three-piece", fixtures::three_piece()}}) {
    const auto spec = build_perturbation(F, kYbar, 8, 1, Window().R);
    const auto rep = verify_perturbation(spec, F, kYbar, Window());
    bool ok = rep.invariants_ok;
    for (const char* c : {"lipschitz", "decay", "destabilization", "zero_outside", "rank_one"}) {
      ok = ok && rep.find(c) && rep.find(c)->pass;
    }
    double eq_err = 0.0, bound_slack = kInf;
    for (const auto& c : rep.centers) {
      eq_err = std::max(eq_err, std::abs(c.covector_norm - c.expected_norm));
      bound_slack = std::min(bound_slack, c.bound_norm - c.covector_norm);
    }
    ok = ok && eq_err <= 1e-9 && bound_slack >= -1e-9 && rep.centers[7].envelope < 1e-3;
    o.pass = o.pass && ok;
    o.detail += name + ": lip=" + fmt("%.9f", rep.lip) + " rg+=" + fmt("%.6g", spec.rgplus) +
                " env8=" + fmt("%.2e", rep.centers[7].envelope) + " |c8|=" +
                fmt("%.12f", rep.centers[7].covector_norm) + " (1-t<y*,v>)|x*|=" +
                fmt("%.12f", rep.centers[7].expected_norm) + " (1-t(1-1/k))|x*|=" +
                fmt("%.12f", rep.centers[7].bound_norm) + " eq.err=" + fmt("%.1e", eq_err) +
                " bound.slack=" + fmt("%.3g", bound_slack) + "; ";
  }
  return o;
}

Outcome RadiusChain() {
  const auto F = fixtures::scaled_coordinate(1.0);
  const auto crit = criterion_check(F, kYbar, Window(), Sampler());
  const auto pert = verify_perturbation(build_perturbation(F, kYbar, 8, 1, Window().R), F, kYbar, Window());
  const auto rep = radius_report(F, kYbar, crit, pert, RadiusMode::kPlain, Window(), 0.05);
  return {rep.pass, "lip=" + fmt("%.9f", rep.lip) + " 1/reg=" + fmt("%.9f", rep.inv_reg) +
                        " rel.gap=" + fmt("%.2e", rep.relative_gap) + (rep.evidence ? " evidence" : " no-evidence")};
}

Outcome SolverContraction() {
  const auto F = fixtures::scaled_coordinate(1.0);
  PerturbationSpec spec;
  spec.n = 2;
  spec.m = 1;
  spec.K = 1;
  spec.rgplus = 0.28;
  spec.ybar = kYbar;
  Bump b;
  b.center = vec({20, 0});
  b.partner = vec({0});
  b.xstar = vec({0, 1});
  b.ystar = vec({1});
  b.direction = vec({1});
  b.scale = bump_scale(1, spec.rgplus, 1.0);
  b.exponent = bump_exponent(1);
  b.radius = 0.25;
  spec.bumps.push_back(b);
  validate_perturbation(spec);
  const auto f = as_sampled_map(spec);
  SolverParams p;
  p.kappa = 1.05;
  p.lambda = 0.30;
  p.epsilon = 0.05;
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int converged = 0, certified = 0;
  double max_ratio = 0.0;
  for (int s = 0; s < 100; ++s) {
    const Vec x0 = vec({20 + 0.3 * u(rng), 0.3 * u(rng)});
    const Vec y = vec({0.05 * u(rng)});
    const auto tr = lg_solve(F, f, y, x0, p);
    if (!tr.converged() || tr.terminal_residual > 1e-9) continue;
    ++converged;
    for (double q : tr.ratios) max_ratio = std::max(max_ratio, q);
    if (certify_bound(tr, F, f, y, x0, p.kappa, p.lambda).pass) ++certified;
  }
  // f = 0: the single step is the projection onto F^{-1}(y).
  double proj_err = 0.0;
  for (int s = 0; s < 100; ++s) {
    const Vec x0 = vec({50 * u(rng), 50 * u(rng)});
    const Vec y = vec({u(rng)});
    const auto tr = lg_solve(F, SampledMap::zero(2, 1), y, x0, p);
    const Vec expect = vec({x0(0), y(0)});
    proj_err = std::max(proj_err, (tr.terminal - expect).norm() / std::max(1.0, expect.norm()));
  }
  const bool ok = converged == 100 && certified == 100 && max_ratio <= 0.4175 && proj_err <= 16 * kEps;
  return {ok, "kappa*lambda=" + fmt("%.3f", p.kappa * p.lambda) + " converged=" + std::to_string(converged) +
                  " certified=" + std::to_string(certified) + " max.ratio=" + fmt("%.4f", max_ratio) +
                  " f=0 proj.err=" + fmt("%.1e", proj_err)};
}

Outcome StrongRegularity() {
  const auto w = Window();
  StrongConfig cfg;
  cfg.reg = Sampler();
  // (a) single-valued localization fixture
  const auto stair = fixtures::staircase();
  const auto a = strong_regularity_check(stair, kYbar, w, cfg);
  const bool a_ok = a.decision && a.empirical_lip <= a.reg * 1.05;
  // (b) multivalued preimages, plain regularity holds
  const auto x2 = fixtures::scaled_coordinate(1.0);
  const auto bb = strong_regularity_check(x2, kYbar, w, cfg);
  const auto plain = estimate_reg_at_infinity(x2, kYbar, w, Sampler());
  const bool b_ok = !bb.decision && bb.diagnostic == "MultivaluedLocalization" && !plain.failure;
  // (c) strong-mode radius report on the strongly regular fixture
  const auto crit = criterion_check(stair, kYbar, w, Sampler());
  const auto pert = verify_perturbation(build_perturbation(stair, kYbar, 8, 1, w.R), stair, kYbar, w);
  const auto c = radius_report(stair, kYbar, crit, pert, RadiusMode::kStrong, w, 0.05, cfg);
  return {a_ok && b_ok && c.pass,
          std::string("(a) staircase ") + (a.decision ? "YES" : "NO " + a.diagnostic) + (a_ok ? " ok" : " FAIL") +
              "; (b) x2 " + (bb.decision ? "YES" : "NO " + bb.diagnostic) + " reg=" + fmt("%.4g", plain.value) +
              (b_ok ? " ok" : " FAIL") + "; (c) strong radius " + (c.pass ? "ok" : "FAIL " + c.detail)};
}

Outcome AlgebraicInvariants() {
  bool ok = true;
  int cones = 0;
  std::vector<Named> fx{{"x2", fixtures::scaled_coordinate(1.0)},
                        {"three-piece", fixtures::three_piece()},
                        {"ray", fixtures::horizontal_ray()},
                        {"staircase", fixtures::staircase()}};
  for (const auto& [name, F] : fx) {
    std::vector<geom::PolyCone> all;
    const auto at_inf = normal_cone_at_infinity(F, kYbar);
    for (const auto& c : at_inf.pieces()) all.push_back(c);
    const auto graph = F.graph();
    for (const auto& P : graph.pieces()) {
      if (auto z = geom::feasible_point(P)) {
        const auto local = limiting_normal_cone(graph, *z);
        for (const auto& c : local.pieces()) all.push_back(c);
      }
    }
    for (const auto& C : all) {
      ++cones;
      ok = ok && C.polar().polar().approx_equal(C, 1e-9);
      for (const auto& g : C.generator_list()) {
        for (double s : {0.0, 0.5, 2.0, 10.0}) ok = ok && C.contains(s * g, 1e-9);
      }
    }
  }
  double worst = 0.0;
  for (const auto& F : {fixtures::scaled_coordinate(1.0), fixtures::three_piece()}) {
    const double rg = rg_plus(F, kYbar).value;
    const double reg = estimate_reg_at_infinity(F, kYbar, Window(), Sampler()).value;
    for (double c : {0.5, 2.0}) {
      const auto cF = F.scale_output(c);
      worst = std::max(worst, std::abs(rg_plus(cF, kYbar).value - c * rg) / std::max(1.0, c * rg));
      worst = std::max(worst, std::abs(estimate_reg_at_infinity(cF, kYbar, Window(), Sampler()).value - reg / c) /
                                  std::max(1.0, reg / c));
    }
  }
  ok = ok && worst <= 1e-9;
  return {ok, std::to_string(cones) + " cones double-dual/homogeneous; scaling worst rel err=" + fmt("%.1e", worst)};
}

}  // namespace
}  // namespace infreg

int main() {
  using infreg::Outcome;
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const auto t0 = infreg::Clock::now();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"criterion equality", infreg::CriterionEquality},
      {"degenerate branch", infreg::DegenerateBranch},
      {"outer-limit representation", infreg::OuterLimit},
      {"perturbation guarantees", infreg::PerturbationGuarantees},
      {"radius chain", infreg::RadiusChain},
      {"contraction solver", infreg::SolverContraction},
      {"strong regularity", infreg::StrongRegularity},
      {"algebraic invariants", infreg::AlgebraicInvariants},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (i + 1 == criteria.size()) {
      const double total = infreg::seconds_since(t0);
      o.pass = o.pass && total < 60.0;
      o.detail += "; suite " + infreg::fmt("%.2fs", total);
    }
    if (!o.pass) ++failed;
    std::printf("[%zu] %s %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
