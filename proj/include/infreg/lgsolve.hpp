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

// Fixed-point solver for y in F(x) + f(x): z <- nearest point of
// F^{-1}(y - f(z)), with contraction monitoring and the a-posteriori bound
// |z - x0| <= kappa / (1 - kappa lambda) dist(y, (F + f)(x0)).

#ifndef INFREG_LGSOLVE_HPP_
#define INFREG_LGSOLVE_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "infreg/core.hpp"
#include "infreg/regmod.hpp"
#include "infreg/svmap.hpp"

namespace infreg {

inline constexpr double kStepTol = 1e-12;

struct IterationTrace {
  std::vector<Vec> iterates;       // z^0 = x0, z^1, ...
  std::vector<double> residuals;   // |z^{k+1} - z^k|
  std::vector<double> ratios;      // residuals[k] / residuals[k-1]
  double kappa = 0.0;
  double lambda = 0.0;
  double epsilon = 0.0;
  Vec terminal;
  std::string status;              // converged | max-iters
  double terminal_residual = kInf; // dist(y, (F + f)(terminal))

  bool converged() const { return status == "converged"; }
  double contraction_bound() const { return kappa * lambda + epsilon; }

  void write_csv(std::ostream& os) const {
    os << "step,residual,ratio\n";
    for (std::size_t k = 0; k < residuals.size(); ++k) {
      os << k << ',' << residuals[k] << ',';
      if (k > 0) os << ratios[k - 1];
      os << '\n';
    }
  }
};

struct SolverParams {
  double kappa = 1.0;
  double lambda = 0.0;
  double epsilon = 0.05;
  int max_iters = 500;
};

inline void validate_solver_params(const SolverParams& p) {
  if (!(p.kappa > 0.0) || !(p.lambda >= 0.0)) {
    throw InvalidArgument("solver needs kappa > 0 and lambda >= 0");
  }
  if (!(p.kappa * p.lambda < 1.0)) throw InvalidArgument("solver needs kappa * lambda < 1");
  if (!(p.epsilon > 0.0) || !(p.epsilon < 1.0 - p.kappa * p.lambda)) {
    throw InvalidArgument("solver needs 0 < epsilon < 1 - kappa * lambda");
  }
  if (p.max_iters < 1) throw InvalidArgument("max_iters must be positive");
}

/// One projection step z -> nearest point of F^{-1}(y - f(z)).
inline Vec lg_step(const SetValuedMap& F, const SampledMap& f, const Vec& y, const Vec& z) {
  auto p = preimage_slice(F, y - f(z)).nearest(z);
  if (!p) throw EmptyPreimage("F^{-1}(y - f(z)) is empty; the start lies outside the window");
  return std::move(p->first);
}

/// Runs the iteration from x0. Stops once a step is at most 1e-12 (that
/// step is not recorded). Three consecutive steps whose ratio exceeds
/// kappa * lambda + epsilon abort with ContractionViolated.
inline IterationTrace lg_solve(const SetValuedMap& F, const SampledMap& f, const Vec& y,
                               const Vec& x0, const SolverParams& params) {
  validate_solver_params(params);
  require_dim(x0.size(), F.n(), "lg_solve start");
  require_dim(y.size(), F.m(), "lg_solve target");
  IterationTrace tr;
  tr.kappa = params.kappa;
  tr.lambda = params.lambda;
  tr.epsilon = params.epsilon;
  tr.iterates.push_back(x0);
  tr.status = "max-iters";
  int violations = 0;
  Vec z = x0;
  for (int it = 0; it < params.max_iters; ++it) {
    Vec next = lg_step(F, f, y, z);
    const double step = (next - z).norm();
    if (step <= kStepTol) {
      tr.status = "converged";
      break;
    }
    if (!tr.residuals.empty()) {
      const double ratio = step / tr.residuals.back();
      tr.ratios.push_back(ratio);
      violations = ratio > tr.contraction_bound() ? violations + 1 : 0;
      if (violations >= 3) {
        throw ContractionViolated("three consecutive residual ratios above kappa*lambda + epsilon");
      }
    }
    tr.residuals.push_back(step);
    tr.iterates.push_back(next);
    z = std::move(next);
  }
  tr.terminal = z;
  tr.terminal_residual = dist_to_image(F, z, y - f(z));
  return tr;
}

struct BoundCertificate {
  double distance_moved = kInf;   // |z - x0|
  double residual_at_start = kInf;// dist(y, (F + f)(x0))
  double bound = kInf;            // kappa / (1 - kappa lambda) * residual + 1e-9
  double slack = -kInf;           // bound - distance_moved
  bool pass = false;
};

inline BoundCertificate certify_bound(const IterationTrace& trace, const SetValuedMap& F,
                                      const SampledMap& f, const Vec& y, const Vec& x0,
                                      double kappa, double lambda) {
  BoundCertificate c;
  c.distance_moved = (trace.terminal - x0).norm();
  c.residual_at_start = dist_to_image(F, x0, y - f(x0));
  c.bound = kappa / (1.0 - kappa * lambda) * c.residual_at_start + 1e-9;
  c.slack = c.bound - c.distance_moved;
  c.pass = trace.converged() && c.distance_moved <= c.bound;
  return c;
}

/// Upper bound on dist(x, (F + f)^{-1}(y)): the distance to the limit of the
/// iteration started at x, or +inf if it does not settle.
inline double perturbed_preimage_distance_upper(const SetValuedMap& F, const SampledMap& f,
                                                const Vec& x, const Vec& y, int max_iters = 2000) {
  Vec z = x;
  for (int it = 0; it < max_iters; ++it) {
    auto p = preimage_slice(F, y - f(z)).nearest(z);
    if (!p) return kInf;
    const double step = (p->first - z).norm();
    z = std::move(p->first);
    if (step <= kStepTol) return (z - x).norm();
  }
  return kInf;
}

/// Sampled reg of F + f. Denominators dist(y - f(x), F(x)) are exact;
/// numerators are the iteration upper bound, so the estimate can only err
/// upwards.
inline RegEstimate estimate_reg_perturbed(const SumMap& G, const Vec& ybar,
                                          const InfinityWindow& w,
                                          const RegSamplerConfig& cfg = {},
                                          std::vector<Vec> anchors = {}) {
  if (anchors.empty()) anchors = detail::escape_anchors(G.base(), ybar, w, cfg);
  auto est = estimate_reg_with(
      anchors, G.m(), ybar, w, cfg,
      [&G](const Vec& x, const Vec& y) {
        return perturbed_preimage_distance_upper(G.base(), G.perturbation(), x, y);
      },
      [&G](const Vec& x, const Vec& y) { return G.dist_to_image(x, y); });
  est.method = "sampled-upper-bound";
  return est;
}

}  // namespace infreg

#endif  // INFREG_LGSOLVE_HPP_
