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

// infreg_cli <subcommand> --scenario FILE [--out DIR] [--seed N] [--budget N] [--tol X]
//
// Writes DIR/report.jsonl plus CSV side files. Exit codes: 0 all checks
// pass, 1 computation error, 2 some check failed, 3 scenario or flag error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "infreg/io/report.hpp"
#include "infreg/io/scenario.hpp"
#include "infreg/lgsolve.hpp"
#include "infreg/normals.hpp"
#include "infreg/perturb.hpp"
#include "infreg/radius.hpp"
#include "infreg/regmod.hpp"
#include "infreg/svmap.hpp"

namespace {

using infreg::Vec;
using infreg::io::Json;
using infreg::io::quantity;
using infreg::io::Record;
using infreg::io::Status;
using infreg::io::status_of;
using infreg::io::to_json;

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitCheckFailed = 2;
constexpr int kExitParse = 3;

class Runner {
 public:
  Runner(infreg::io::Scenario sc, std::filesystem::path out, std::ostream& report, const std::string& digest)
      : sc_(std::move(sc)), F_(sc_.map()), out_(std::move(out)), writer_(report, digest) {}

  int failures() const { return writer_.failures(); }

  void run(const std::string& cmd) {
    if (cmd == "slice") return slice();
    if (cmd == "jelonek") {
      jelonek();
      return;
    }
    if (cmd == "normal-cone") return normal_cone();
    if (cmd == "coderivative-inf") return coderivative_inf();
    if (cmd == "reg-estimate") return reg_estimate();
    if (cmd == "rg-plus") return rg_plus();
    if (cmd == "criterion-check") return criterion();
    if (cmd == "strong-check") return strong();
    if (cmd == "perturb") return perturb();
    if (cmd == "radius-report") return radius();
    if (cmd == "solve-lg") return solve_lg();
    if (cmd == "all") return all();
    throw infreg::InvalidArgument("unknown subcommand " + cmd);
  }

 private:
  void emit(const Record& r) {
    writer_.write(r);
    std::cout << r.name << ' ' << infreg::io::to_string(r.status) << '\n';
  }

  infreg::RegSamplerConfig sampler() const {
    infreg::RegSamplerConfig c;
    c.budget = sc_.budget;
    c.seed = sc_.seed;
    return c;
  }

  [[noreturn]] void missing(const std::string& field) const {
    throw infreg::io::ScenarioError("<scenario>", 0, field, "required by this subcommand");
  }

  // ------------------------------------------------------------ caches --
  const infreg::RgPlusResult& rg() {
    if (!rg_) rg_ = infreg::rg_plus(F_, sc_.ybar);
    return *rg_;
  }

  const infreg::CriterionReport& crit() {
    if (!crit_) {
      crit_ = infreg::criterion_check(F_, sc_.ybar, sc_.window, sampler(), sc_.tol.criterion);
      std::ofstream csv(out_ / "ratios.csv");
      infreg::io::write_ratio_csv(csv, crit_->est.ratios, F_.n(), F_.m());
    }
    return *crit_;
  }

  const infreg::PerturbationSpec& spec() {
    if (!spec_) {
      spec_ = sc_.perturbation_spec ? *sc_.perturbation_spec
                                    : infreg::build_perturbation(F_, sc_.ybar, sc_.K, sc_.seed, sc_.window.R);
      std::ofstream js(out_ / "perturbation.json");
      js << to_json(*spec_).dump(2) << '\n';
    }
    return *spec_;
  }

  const infreg::PerturbationReport& pert() {
    if (!pert_) {
      infreg::VerifyConfig vc;
      vc.seed = sc_.seed + 10;
      vc.lip_tol = sc_.tol.lip;
      vc.exact_tol = sc_.tol.exact;
      pert_ = infreg::verify_perturbation(spec(), F_, sc_.ybar, sc_.window, vc);
    }
    return *pert_;
  }

  // ------------------------------------------------------- subcommands --
  void slice() {
    if (!sc_.query_x && !sc_.query_y) missing("/queries");
    if (sc_.query_x) {
      const Vec& x = *sc_.query_x;
      const auto img = infreg::image_slice(F_, x);
      bool ok = true;
      for (const auto& p : img.pieces()) {
        if (auto y = infreg::geom::feasible_point(p)) ok = ok && F_.contains(x, *y);
      }
      Record r{"image_slice"};
      r.add("x", quantity(to_json(x), 0.0, "exact"))
          .add("pieces", quantity(to_json(img), 0.0, "exact"))
          .add("empty", quantity(img.is_empty(), 0.0, "exact"));
      r.status = status_of(ok);
      r.tolerance = infreg::kFeasTol;
      emit(r);
    }
    if (sc_.query_y) {
      const Vec& y = *sc_.query_y;
      const auto pre = infreg::preimage_slice(F_, y);
      bool ok = true;
      for (const auto& p : pre.pieces()) {
        if (auto x = infreg::geom::feasible_point(p)) ok = ok && F_.contains(*x, y);
      }
      Record r{"preimage_slice"};
      r.add("y", quantity(to_json(y), 0.0, "exact"))
          .add("pieces", quantity(to_json(pre), 0.0, "exact"))
          .add("empty", quantity(pre.is_empty(), 0.0, "exact"));
      r.status = status_of(ok);
      r.tolerance = infreg::kFeasTol;
      emit(r);
    }
  }

  bool jelonek() {
    const auto j = infreg::jelonek_contains(F_, sc_.ybar);
    Record r{"jelonek"};
    r.add("contains", quantity(j.contains, 0.0, "exact"));
    if (j.contains) {
      r.add("piece", quantity(j.piece, 0.0, "exact"))
          .add("point", quantity(to_json(j.point), infreg::kFeasTol, "exact"))
          .add("direction", quantity(to_json(j.direction), infreg::kFeasTol, "exact"));
    }
    r.status = sc_.expect_jelonek ? status_of(*sc_.expect_jelonek == j.contains) : Status::kInfo;
    emit(r);
    return j.contains;
  }

  void normal_cone() {
    if (!sc_.point) missing("/point");
    const Vec& z = *sc_.point;
    const auto reg = infreg::regular_normal_cone(F_.graph(), z);
    const auto lim = infreg::limiting_normal_cone(F_.graph(), z);
    bool inside = true;
    for (const auto& c : reg.pieces()) {
      for (const auto& g : c.generator_list()) inside = inside && lim.contains(g, sc_.tol.exact);
    }
    Record r{"normal_cone"};
    r.add("point", quantity(to_json(z), 0.0, "exact"))
        .add("regular", quantity(to_json(reg), sc_.tol.exact, "exact"))
        .add("limiting", quantity(to_json(lim), sc_.tol.exact, "exact"));
    r.status = status_of(inside && F_.graph().contains(z));
    r.tolerance = sc_.tol.exact;
    emit(r);
  }

  void coderivative_inf() {
    const Vec ystar = sc_.ystar_or_default();
    const auto exact = infreg::normal_cone_at_infinity(F_, sc_.ybar);
    const auto cod = infreg::coderivative_at_infinity(F_, sc_.ybar, ystar);
    Record e{"normal_cone_at_infinity"};
    e.add("cone", quantity(to_json(exact), sc_.tol.exact, "exact"))
        .add("ystar", quantity(to_json(ystar), 0.0, "exact"))
        .add("coderivative", quantity(to_json(cod), sc_.tol.exact, "exact"));
    e.tolerance = sc_.tol.exact;
    emit(e);

    infreg::SampledLimitConfig cfg;
    cfg.seed = sc_.seed;
    cfg.tol = sc_.tol.angle;
    cfg.throw_if_unstable = false;
    const auto lim = infreg::sampled_coderivative_limit(F_, sc_.ybar, ystar, sc_.window, cfg);
    const double gap = lim.cone.ray_hausdorff(exact);
    Record s{"sampled_coderivative_limit"};
    Json accepted = Json::array();
    for (int a : lim.accepted) accepted.push_back(a);
    s.add("stabilized", quantity(lim.stabilized, sc_.tol.angle, "sampled"))
        .add("stage_gap", quantity(lim.stage_gap, sc_.tol.angle, "sampled"))
        .add("hausdorff_to_exact", quantity(gap, sc_.tol.angle, "sampled"))
        .add("accepted_per_stage", quantity(accepted, 0.0, "sampled"))
        .add("cone", quantity(to_json(lim.cone), sc_.tol.angle, "sampled"));
    s.status = status_of(lim.stabilized && gap <= sc_.tol.angle && lim.cone.approx_equal(exact, sc_.tol.angle));
    s.tolerance = sc_.tol.angle;
    emit(s);
  }

  void reg_estimate() {
    const auto est = infreg::estimate_reg_at_infinity(F_, sc_.ybar, sc_.window, sampler());
    std::ofstream csv(out_ / "ratios.csv");
    infreg::io::write_ratio_csv(csv, est.ratios, F_.n(), F_.m());
    Record r{"reg_estimate"};
    r.add("reg", quantity(est.value, 0.0, "sampled"))
        .add("failure", quantity(est.failure, infreg::kRatioCap, "sampled"))
        .add("samples", quantity(est.samples, 0.0, "sampled"))
        .add("candidates", quantity(est.candidates, 0.0, "sampled"));
    if (est.witness.x.size() > 0) {
      r.add("witness_x", quantity(to_json(est.witness.x), 0.0, "sampled"))
          .add("witness_y", quantity(to_json(est.witness.y), 0.0, "sampled"));
    }
    emit(r);
  }

  void rg_plus() {
    const auto& res = rg();
    Record r{"rg_plus"};
    r.add("rg_plus", quantity(res.value, infreg::kExactAngleTol, "exact"))
        .add("xstar", quantity(to_json(res.argmin.xstar), infreg::kExactAngleTol, "exact"))
        .add("ystar", quantity(to_json(res.argmin.ystar), infreg::kExactAngleTol, "exact"));
    if (res.cross_checked) r.add("sphere_grid", quantity(res.grid_value, 1e-6, "sampled"));
    r.status = status_of(!res.cross_checked || res.cross_check_agrees);
    r.tolerance = 1e-6;
    emit(r);
  }

  void criterion() {
    const auto& c = crit();
    Record r{"criterion_check"};
    r.add("rg_plus", quantity(c.rg_plus, infreg::kExactAngleTol, "exact"))
        .add("reg", quantity(c.reg, 0.0, "sampled"))
        .add("inv_reg", quantity(c.inv_reg, 0.0, "sampled"))
        .add("relative_gap", quantity(c.gap, c.tolerance, "sampled"))
        .add("degenerate", quantity(c.degenerate, 1e-9, "exact"))
        .add("samples", quantity(c.est.samples, 0.0, "sampled"));
    r.status = status_of(c.pass);
    r.tolerance = c.tolerance;
    emit(r);
  }

  void strong() {
    infreg::StrongConfig cfg;
    cfg.reg = sampler();
    cfg.tol = sc_.tol.criterion;
    const auto rep = infreg::strong_regularity_check(F_, sc_.ybar, sc_.window, cfg);
    Record r{"strong_check"};
    r.add("decision", quantity(rep.decision, 0.0, "sampled"))
        .add("diagnostic", quantity(rep.diagnostic, 0.0, "sampled"))
        .add("grid_points", quantity(rep.grid_points, 0.0, "sampled"))
        .add("empirical_lip", quantity(rep.empirical_lip, cfg.tol, "sampled"))
        .add("reg", quantity(rep.reg, 0.0, "sampled"));
    if (rep.witness_y.size() > 0) r.add("witness_y", quantity(to_json(rep.witness_y), 0.0, "sampled"));
    r.status = sc_.expect_strong ? status_of(*sc_.expect_strong == rep.decision) : Status::kInfo;
    r.tolerance = cfg.tol;
    emit(r);
  }

  void perturb() {
    const auto& rep = pert();
    for (const auto& c : rep.checks) {
      Record r{"perturb." + c.name};
      r.add("value", quantity(c.value, c.tolerance, c.name == "lipschitz" || c.name == "decay" ? "sampled" : "exact"))
          .add("detail", quantity(c.detail, 0.0, "exact"));
      r.status = status_of(c.pass);
      r.tolerance = c.tolerance;
      emit(r);
    }
    if (!rep.centers.empty()) {
      Json rows = Json::array();
      for (const auto& c : rep.centers) {
        rows.push_back(Json{{"k", c.k},
                            {"scale", c.scale},
                            {"radius", c.radius},
                            {"envelope", c.envelope},
                            {"covector_norm", c.covector_norm},
                            {"expected_norm", c.expected_norm},
                            {"bound_norm", c.bound_norm},
                            {"reg_ratio", infreg::io::number(c.reg_ratio)}});
      }
      Record r{"perturb.centers"};
      r.add("centers", quantity(rows, sc_.tol.exact, "exact"))
          .add("evidence", quantity(rep.evidence, 0.0, "exact"));
      emit(r);
    }
  }

  void radius() {
    const auto mode = sc_.radius_mode == "strong" ? infreg::RadiusMode::kStrong : infreg::RadiusMode::kPlain;
    infreg::StrongConfig scfg;
    scfg.reg = sampler();
    const auto rep = infreg::radius_report(F_, sc_.ybar, crit(), pert(), mode, sc_.window, sc_.tol.criterion, scfg);
    Record r{"radius_report"};
    r.add("mode", quantity(infreg::to_string(mode), 0.0, "exact"))
        .add("rg_plus", quantity(rep.rg_plus, infreg::kExactAngleTol, "exact"))
        .add("inv_reg", quantity(rep.inv_reg, 0.0, "sampled"))
        .add("lip", quantity(rep.lip, sc_.tol.lip, "sampled"))
        .add("relative_gap", quantity(rep.relative_gap, rep.tolerance, "sampled"))
        .add("chain_holds", quantity(rep.chain_holds, rep.tolerance, "sampled"))
        .add("evidence", quantity(rep.evidence, 0.0, "exact"))
        .add("degenerate", quantity(rep.degenerate, 0.0, "exact"))
        .add("detail", quantity(rep.detail, 0.0, "exact"));
    if (rep.strong_base) {
      r.add("strong_base", quantity(rep.strong_base->decision, 0.0, "sampled"))
          .add("strong_base_diagnostic", quantity(rep.strong_base->diagnostic, 0.0, "sampled"))
          .add("strong_perturbed", quantity(rep.strong_perturbed, 0.0, "sampled"))
          .add("strong_perturbed_diagnostic", quantity(rep.strong_perturbed_diagnostic, 0.0, "sampled"));
    }
    r.status = status_of(rep.pass);
    r.tolerance = rep.tolerance;
    emit(r);
  }

  void solve_lg() {
    if (!sc_.solver) missing("/solver");
    const auto& so = *sc_.solver;
    const infreg::SampledMap f = so.f == "zero" ? infreg::SampledMap::zero(F_.n(), F_.m())
                                                : infreg::as_sampled_map(validated(spec()));
    std::mt19937_64 rng(sc_.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::ofstream csv(out_ / "residuals.csv");
    csv << "start,step,residual,ratio\n";
    int converged = 0, certified = 0;
    double max_ratio = 0.0, max_terminal = 0.0, min_slack = infreg::kInf;
    for (int s = 0; s < so.starts; ++s) {
      Vec x0 = so.x0;
      if (s > 0) {
        for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) += so.spread * u(rng);
      }
      const auto tr = infreg::lg_solve(F_, f, so.y, x0, so.params);
      for (std::size_t k = 0; k < tr.residuals.size(); ++k) {
        csv << s << ',' << k << ',' << tr.residuals[k] << ',';
        if (k > 0) csv << tr.ratios[k - 1];
        csv << '\n';
      }
      for (double q : tr.ratios) max_ratio = std::max(max_ratio, q);
      if (!tr.converged()) continue;
      ++converged;
      max_terminal = std::max(max_terminal, tr.terminal_residual);
      const auto cert = infreg::certify_bound(tr, F_, f, so.y, x0, so.params.kappa, so.params.lambda);
      if (cert.pass) ++certified;
      min_slack = std::min(min_slack, cert.slack);
    }
    const double bound = so.params.kappa * so.params.lambda + so.params.epsilon;
    Record r{"solve_lg"};
    r.add("starts", quantity(so.starts, 0.0, "exact"))
        .add("converged", quantity(converged, 0.0, "exact"))
        .add("certified", quantity(certified, 1e-9, "exact"))
        .add("max_ratio", quantity(max_ratio, bound, "exact"))
        .add("max_terminal_residual", quantity(max_terminal, 1e-9, "exact"))
        .add("min_certificate_slack", quantity(min_slack, 1e-9, "exact"));
    r.status = status_of(converged == so.starts && certified == so.starts && max_ratio <= bound &&
                         max_terminal <= 1e-9);
    r.tolerance = bound;
    emit(r);
  }

  static const infreg::PerturbationSpec& validated(const infreg::PerturbationSpec& s) {
    infreg::validate_perturbation(s);
    return s;
  }

  void all() {
    if (sc_.query_x || sc_.query_y) slice();
    if (sc_.point) normal_cone();
    if (!jelonek()) return;
    rg_plus();
    criterion();
    coderivative_inf();
    strong();
    perturb();
    radius();
    if (sc_.solver) solve_lg();
  }

  infreg::io::Scenario sc_;
  infreg::SetValuedMap F_;
  std::filesystem::path out_;
  infreg::io::ReportWriter writer_;
  std::optional<infreg::RgPlusResult> rg_;
  std::optional<infreg::CriterionReport> crit_;
  std::optional<infreg::PerturbationSpec> spec_;
  std::optional<infreg::PerturbationReport> pert_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric regularity at infinity for polyhedral set-valued maps"};
  app.require_subcommand(1, 1);
  std::string scenario_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> budget;
  std::optional<double> tol;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"slice", "image and preimage slices at the query point"},
      {"jelonek", "is ybar an asymptotic value of F"},
      {"normal-cone", "regular and limiting normal cones at a graph point"},
      {"coderivative-inf", "exact cone at infinity and its sampled outer limit"},
      {"reg-estimate", "sampled regularity modulus at infinity"},
      {"rg-plus", "exact upper coderivative norm at infinity"},
      {"criterion-check", "compare rg+ with 1/reg"},
      {"strong-check", "strong regularity at infinity"},
      {"perturb", "build and verify the destabilizing perturbation"},
      {"radius-report", "radius of regularity from the perturbation"},
      {"solve-lg", "contraction solver for y in (F + f)(x)"},
      {"all", "full pipeline"}};
  for (const auto& [c, help] : commands) {
    auto* sub = app.add_subcommand(c, help);
    sub->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed override");
    sub->add_option("--budget", budget, "ratio sample budget override")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "criterion tolerance override")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  infreg::io::Scenario sc;
  try {
    sc = infreg::io::load_scenario(scenario_path);
  } catch (const infreg::io::ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const infreg::Error& e) {
    std::cerr << "error: " << scenario_path << ": " << e.what() << '\n';
    return kExitParse;
  }
  if (seed) sc.seed = *seed;
  if (budget) sc.budget = *budget;
  if (tol) sc.tol.criterion = *tol;

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::ofstream report(std::filesystem::path(out_dir) / "report.jsonl");
  if (!report) {
    std::cerr << "error: cannot write to " << out_dir << '\n';
    return kExitComputation;
  }
  const std::string digest = infreg::io::fnv1a_hex(cmd + '\n' + infreg::io::to_json(sc).dump());
  try {
    Runner runner(sc, out_dir, report, digest);
    runner.run(cmd);
    return runner.failures() > 0 ? kExitCheckFailed : kExitOk;
  } catch (const infreg::io::ScenarioError& e) {
    std::cerr << "error: " << scenario_path << ": " << e.field() << ": required by " << cmd << '\n';
    return kExitParse;
  } catch (const infreg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitComputation;
  }
}
