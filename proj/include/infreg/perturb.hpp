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

// Rank-one bump perturbations placed along an escaping stratum.
//
// Bump k (k = 1..K) lives on the closed ball of radius rho_k around x_k:
//   f(x) = -t_k s_k(x) <x*, x - x_k> v_k,   s_k(x) = max(1 - (|x - x_k| / rho_k)^p_k, 0)
// with p_k = 1 + 1/k. Outside every ball f is exactly zero. The gradient
// bound t_k p_k |x*| equals rg+ when t_k = k/(k+1) * rg+ / |x*|.

#ifndef INFREG_PERTURB_HPP_
#define INFREG_PERTURB_HPP_

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "infreg/core.hpp"
#include "infreg/lgsolve.hpp"
#include "infreg/normals.hpp"
#include "infreg/parallel.hpp"
#include "infreg/regmod.hpp"
#include "infreg/sampling.hpp"
#include "infreg/svmap.hpp"

namespace infreg {

struct Bump {
  Vec center;     // x_k
  Vec partner;    // y_k, with (x_k, y_k) in gph F
  Vec xstar;
  Vec ystar;      // unit
  Vec direction;  // v_k, unit
  double radius = 0.0;
  double scale = 0.0;
  double exponent = 1.0;
};

struct PerturbationSpec {
  int n = 0;
  int m = 0;
  int K = 0;             // requested bump count; bumps is empty when rg+ = 0
  double rgplus = 0.0;
  Vec ybar;
  std::vector<Bump> bumps;

  bool trivial() const { return bumps.empty(); }
};

inline double bump_scale(int k, double rgplus, double xstar_norm) {
  return static_cast<double>(k) / (k + 1.0) * rgplus / xstar_norm;
}

inline double bump_exponent(int k) { return 1.0 + 1.0 / k; }

/// Radius cap min(1/4, k^-4 / max(1, rg+)); the envelope t rho |x*| is then
/// below 1e-3 from k = 6 on.
inline double bump_radius_cap(int k, double rgplus) {
  return std::min(0.25, std::pow(static_cast<double>(k), -4.0) / std::max(1.0, rgplus));
}

/// Throws InvalidPerturbation naming the first broken invariant.
inline void validate_perturbation(const PerturbationSpec& s) {
  auto fail = [](const std::string& what) { throw InvalidPerturbation(what); };
  if (s.n <= 0 || s.m <= 0) fail("dimensions must be positive");
  if (s.ybar.size() != s.m) fail("ybar has the wrong dimension");
  if (!(s.rgplus >= 0.0) || !std::isfinite(s.rgplus)) fail("rgplus must be finite and nonnegative");
  if (s.K < 0) fail("K must be nonnegative");
  if (s.rgplus == 0.0) {
    if (!s.bumps.empty()) fail("rgplus = 0 requires the zero perturbation");
    return;
  }
  if (static_cast<int>(s.bumps.size()) != s.K) fail("bump count differs from K");
  for (int i = 0; i < s.K; ++i) {
    const Bump& b = s.bumps[i];
    const int k = i + 1;
    const std::string tag = "bump " + std::to_string(k) + ": ";
    if (b.center.size() != s.n || b.xstar.size() != s.n) fail(tag + "x-side dimension");
    if (b.partner.size() != s.m || b.ystar.size() != s.m || b.direction.size() != s.m) {
      fail(tag + "y-side dimension");
    }
    if (std::abs(b.ystar.norm() - 1.0) > 1e-12) fail(tag + "y* is not a unit vector");
    if (std::abs(b.direction.norm() - 1.0) > 1e-12) fail(tag + "v is not a unit vector");
    if (!(b.ystar.dot(b.direction) > 1.0 - 1.0 / k)) fail(tag + "<y*, v> <= 1 - 1/k");
    const double xn = b.xstar.norm();
    if (!(xn > 0.0)) fail(tag + "x* is zero");
    const double t = bump_scale(k, s.rgplus, xn);
    if (std::abs(b.scale - t) > 1e-12 * std::max(1.0, t)) fail(tag + "t differs from k/(k+1) rg+ / |x*|");
    if (std::abs(b.exponent - bump_exponent(k)) > 1e-15) fail(tag + "exponent differs from 1 + 1/k");
    if (!(b.radius > 0.0)) fail(tag + "radius must be positive");
    if (i > 0) {
      const Bump& a = s.bumps[i - 1];
      if (!(b.radius <= a.radius)) fail(tag + "radii must decrease");
      if (!(b.center.norm() > a.center.norm() + 1.0)) fail(tag + "centre spacing below 1");
    }
    for (int j = 0; j < i; ++j) {
      const Bump& a = s.bumps[j];
      if (!((b.center - a.center).norm() > a.radius + b.radius)) {
        fail(tag + "ball overlaps bump " + std::to_string(j + 1));
      }
    }
  }
}

/// -f_k evaluated at local displacement d = x - x_k (unsigned bump value).
inline Vec bump_local(const Bump& b, const Vec& d) {
  const double q = d.norm() / b.radius;
  if (q >= 1.0) return Vec::Zero(b.direction.size());
  const double s = 1.0 - std::pow(q, b.exponent);
  return (b.scale * s * b.xstar.dot(d)) * b.direction;
}

/// Index of the ball containing x, or -1.
inline int active_bump(const PerturbationSpec& s, const Vec& x) {
  for (std::size_t i = 0; i < s.bumps.size(); ++i) {
    if ((x - s.bumps[i].center).norm() <= s.bumps[i].radius) return static_cast<int>(i);
  }
  return -1;
}

inline Vec eval_perturbation(const PerturbationSpec& s, const Vec& x) {
  require_dim(x.size(), s.n, "eval_perturbation");
  const int i = active_bump(s, x);
  if (i < 0) return Vec::Zero(s.m);
  return -bump_local(s.bumps[i], x - s.bumps[i].center);
}

inline SampledMap as_sampled_map(const PerturbationSpec& s) {
  auto shared = std::make_shared<const PerturbationSpec>(s);
  SampledMap f;
  f.n = s.n;
  f.m = s.m;
  f.eval = [shared](const Vec& x) { return eval_perturbation(*shared, x); };
  f.declared_lip = s.rgplus;
  return f;
}

/// Builds K bumps along an escaping stratum whose regular normal cone holds
/// the rg+ minimiser (x*, -y*). Centres sit at (1 - delta) (base + T d) +
/// delta * interior, with T stepping by 4 beyond the window radius.
inline PerturbationSpec build_perturbation(const SetValuedMap& F, const Vec& ybar, int K,
                                           std::uint64_t seed, double window_radius = 10.0) {
  if (K < 1) throw InvalidArgument("K must be at least 1");
  const RgPlusResult rg = rg_plus(F, ybar, false);
  if (!std::isfinite(rg.value)) throw RgPlusInfinite("rg+ is infinite; no destabiliser exists");
  PerturbationSpec spec;
  spec.n = F.n();
  spec.m = F.m();
  spec.K = K;
  spec.ybar = ybar;
  spec.rgplus = rg.value <= kZeroTol ? 0.0 : rg.value;
  if (spec.rgplus == 0.0) return spec;

  const Vec& xstar = rg.argmin.xstar;
  const Vec& ystar = rg.argmin.ystar;
  const Vec normal = concat(xstar, Vec(-ystar));
  const Stratum* chosen = nullptr;
  const auto strata = escaping_strata(F, ybar);
  for (const auto& s : strata) {
    if (s.escapes && s.regular_cone.contains(normal, 1e-9)) {
      chosen = &s;
      break;
    }
  }
  if (!chosen) throw InsufficientEscape("no escaping stratum carries the rg+ minimiser");

  const int n = F.n();
  const Vec base = concat(chosen->escape_base, ybar);
  const Vec dir = concat(chosen->escape_direction, Vec::Zero(F.m()));
  const Vec& interior = chosen->point;
  std::mt19937_64 rng(seed);
  const double jitter = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const double T0 = window_radius + base.head(n).norm() + interior.head(n).norm() + 2.0 + jitter;

  for (int k = 1; k <= K; ++k) {
    const double delta = 1e-2 / k;
    const Vec z = (1.0 - delta) * (base + (T0 + 4.0 * k) * dir) + delta * interior;
    Bump b;
    b.center = z.head(n);
    b.partner = z.tail(F.m());
    b.xstar = xstar;
    b.ystar = ystar;
    b.direction = ystar;
    b.scale = bump_scale(k, spec.rgplus, xstar.norm());
    b.exponent = bump_exponent(k);
    b.radius = bump_radius_cap(k, spec.rgplus);
    spec.bumps.push_back(std::move(b));
  }
  for (int i = 0; i + 1 < K; ++i) {
    const double gap = spec.bumps[i + 1].center.norm() - spec.bumps[i].center.norm() - 1.0;
    if (!(gap > 0.0)) throw InsufficientEscape("escape direction does not separate the centres");
    spec.bumps[i].radius = std::min(spec.bumps[i].radius, gap / 2.0);
  }
  for (int i = 1; i < K; ++i) {
    spec.bumps[i].radius = std::min(spec.bumps[i].radius, spec.bumps[i - 1].radius);
  }
  try {
    validate_perturbation(spec);
  } catch (const InvalidPerturbation& e) {
    throw InsufficientEscape(std::string("cannot place disjoint balls: ") + e.what());
  }
  return spec;
}

/// Pairs around every ball: both outside, straddling the boundary, inside
/// near the boundary along x*, and across neighbouring balls.
inline std::vector<std::pair<Vec, Vec>> targeted_lip_pairs(const PerturbationSpec& s,
                                                           std::uint64_t seed, int random_per_ball = 64) {
  std::vector<std::pair<Vec, Vec>> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < s.bumps.size(); ++i) {
    const Bump& b = s.bumps[i];
    const Vec e = b.xstar.normalized();
    const Vec& c = b.center;
    const double r = b.radius;
    for (double h : {1e-2, 1e-4, 1e-6}) {
      for (double sign : {1.0, -1.0}) {
        out.emplace_back(c + sign * r * (1.0 - h) * e, c + sign * r * e);
        out.emplace_back(c + sign * r * (1.0 - 2 * h) * e, c + sign * r * (1.0 - h) * e);
        out.emplace_back(c + sign * r * (1.0 - h) * e, c + sign * r * (1.0 + h) * e);
      }
    }
    out.emplace_back(c + 1.1 * r * e, c + 1.3 * r * e);
    out.emplace_back(c - 1.1 * r * e, c + 1.1 * r * e);
    out.emplace_back(c, c + 0.5 * r * e);
    if (i + 1 < s.bumps.size()) {
      const Bump& nb = s.bumps[i + 1];
      out.emplace_back(c + 0.9 * r * e, nb.center + 0.9 * nb.radius * nb.xstar.normalized());
    }
    for (int j = 0; j < random_per_ball; ++j) {
      const Vec x = c + r * std::pow(unif(rng), 1.0 / s.n) * random_unit(s.n, rng);
      const double h = r * std::pow(10.0, -6.0 + 5.0 * unif(rng));
      out.emplace_back(x, x + h * random_unit(s.n, rng));
    }
  }
  return out;
}

// ----------------------------------------------------------- verification --

struct PerturbationCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct CenterRecord {
  int k = 0;
  double scale = 0.0;
  double radius = 0.0;
  double envelope = 0.0;         // t rho |x*|
  double sampled_sup = 0.0;      // sampled max |f| on balls j >= k
  bool in_regular_cone = false;  // (x*, -y*) in the regular normal cone of gph F at the centre
  double gradient_error = 0.0;   // |grad f^T y* + t <y*, v> x*|
  double covector_norm = 0.0;    // |x* + grad f^T y*|
  double expected_norm = 0.0;    // (1 - t <y*, v>) |x*|
  double bound_norm = 0.0;       // (1 - t (1 - 1/k)) |x*|
  double reg_ratio = 0.0;        // sampled reg of F + f near the centre
};

struct PerturbationReport {
  bool invariants_ok = false;
  std::string invariant_error;
  std::vector<PerturbationCheck> checks;
  std::vector<CenterRecord> centers;
  double lip = 0.0;
  std::string evidence = "trend evidence";
  bool pass = false;

  const PerturbationCheck* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

struct VerifyConfig {
  int samples_per_ball = 200;
  int outside_samples = 1000;
  int lip_pairs = 4000;
  std::uint64_t seed = 11;
  double lip_tol = 1e-6;
  double exact_tol = 1e-9;
  double envelope_target = 1e-3;
  int envelope_index = 8;
};

namespace detail {

/// grad f(x_k)^T y* by central differences in local coordinates with one
/// Richardson step for an error term of order h^p.
inline Vec bump_gradient_transpose(const Bump& b, const Vec& ystar) {
  const int n = static_cast<int>(b.center.size());
  const double h = b.radius / 8.0;
  const double w = std::pow(2.0, b.exponent);
  Vec g(n);
  for (int i = 0; i < n; ++i) {
    auto diff = [&](double step) {
      Vec d = Vec::Zero(n);
      d(i) = step;
      const Vec up = -bump_local(b, d);
      d(i) = -step;
      return ystar.dot(up - (-bump_local(b, d))) / (2.0 * step);
    };
    g(i) = (w * diff(h / 2.0) - diff(h)) / (w - 1.0);
  }
  return g;
}

/// Sampled dist(x, (F + f)^{-1}(y)) / dist(y, (F + f)(x)) close to a centre.
inline double centre_reg_ratio(const SetValuedMap& F, const SampledMap& f, const Bump& b, int k) {
  const double eta = 1e-2 * b.radius / (k + 1.0);
  double best = 0.0;
  const SumMap G(F, f);
  for (double sign : {1.0, -1.0}) {
    const Vec y = b.partner + sign * eta * b.ystar;
    const double den = G.dist_to_image(b.center, y);
    if (!(den > 0.0)) continue;
    const double num = perturbed_preimage_distance_upper(F, f, b.center, y);
    best = std::max(best, num / den);
  }
  return best;
}

}  // namespace detail

inline PerturbationReport verify_perturbation(const PerturbationSpec& spec, const SetValuedMap& F,
                                              const Vec& ybar, const InfinityWindow& w,
                                              const VerifyConfig& cfg = {}) {
  PerturbationReport rep;
  try {
    validate_perturbation(spec);
    require_dim(spec.n, F.n(), "perturbation input");
    require_dim(spec.m, F.m(), "perturbation output");
    if ((spec.ybar - ybar).norm() > kFeasTol) throw InvalidPerturbation("spec was built for another ybar");
    rep.invariants_ok = true;
  } catch (const Error& e) {
    rep.invariant_error = e.what();
    rep.checks.push_back({"invariants", false, 0.0, 0.0, e.what()});
    return rep;
  }
  rep.checks.push_back({"invariants", true, 0.0, 0.0, ""});
  const SampledMap f = as_sampled_map(spec);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  if (spec.trivial()) {
    rep.checks.push_back({"decay", true, 0.0, 0.0, "zero perturbation"});
    rep.checks.push_back({"lipschitz", true, 0.0, cfg.lip_tol, "zero perturbation"});
    rep.checks.push_back({"rank_one", true, 0.0, kZeroTol, "zero perturbation"});
    rep.checks.push_back({"destabilization", true, 0.0, 0.0, "rg+ already 0"});
    rep.pass = true;
    return rep;
  }

  const int K = static_cast<int>(spec.bumps.size());
  std::vector<double> ball_sup(K, 0.0);
  double rank_residual = 0.0;
  double envelope_excess = 0.0;
  for (int i = 0; i < K; ++i) {
    const Bump& b = spec.bumps[i];
    CenterRecord c;
    c.k = i + 1;
    c.scale = b.scale;
    c.radius = b.radius;
    c.envelope = b.scale * b.radius * b.xstar.norm();
    for (int j = 0; j < cfg.samples_per_ball; ++j) {
      // Half the samples on the x* axis where the envelope is approached.
      const Vec u = j % 2 == 0 ? Vec(b.xstar.normalized() * (unif(rng) < 0.5 ? 1.0 : -1.0))
                               : random_unit(spec.n, rng);
      const Vec x = b.center + b.radius * std::pow(unif(rng), j % 2 == 0 ? 0.05 : 1.0 / spec.n) * u;
      const Vec y = f(x);
      ball_sup[i] = std::max(ball_sup[i], y.norm());
      rank_residual = std::max(rank_residual, (y - y.dot(b.direction) * b.direction).norm());
    }
    rep.centers.push_back(c);
  }
  for (int i = K - 1; i >= 0; --i) {
    rep.centers[i].sampled_sup = std::max(ball_sup[i], i + 1 < K ? rep.centers[i + 1].sampled_sup : 0.0);
    envelope_excess = std::max(envelope_excess, rep.centers[i].sampled_sup - rep.centers[i].envelope * (1 + 1e-12));
  }

  // (1) decay
  {
    bool decreasing = true;
    for (int i = 1; i < K; ++i) decreasing = decreasing && rep.centers[i].envelope < rep.centers[i - 1].envelope;
    const int at = std::min(cfg.envelope_index, K) - 1;
    const double env = rep.centers[at].envelope;
    const bool small = K < cfg.envelope_index || env < cfg.envelope_target;
    PerturbationCheck c{"decay", decreasing && small && envelope_excess <= 0.0, env, cfg.envelope_target, ""};
    c.detail = "envelope at k=" + std::to_string(at + 1) + (decreasing ? ", decreasing" : ", not decreasing") +
               (envelope_excess <= 0.0 ? "" : ", sampled |f| above envelope");
    rep.checks.push_back(c);
  }

  // (2) Lipschitz outside B_R, including the targeted configurations
  {
    LipConfig lc;
    lc.pairs = cfg.lip_pairs;
    lc.seed = cfg.seed + 1;
    lc.targeted = targeted_lip_pairs(spec, cfg.seed + 2);
    InfinityWindow lw = w;
    lw.R = std::min(w.R, spec.bumps.front().center.norm() - spec.bumps.front().radius - 1.0);
    lw.R = std::max(lw.R, 1e-9);
    const LipEstimate lip = lip_at_infinity(f, lw, lc);
    rep.lip = lip.value;
    rep.checks.push_back({"lipschitz", lip.value <= spec.rgplus + cfg.lip_tol, lip.value,
                          spec.rgplus + cfg.lip_tol, std::to_string(lip.pairs) + " pairs"});
  }

  // (3) rank-one local form
  rep.checks.push_back({"rank_one", rank_residual <= kZeroTol, rank_residual, kZeroTol, ""});

  // exact zero outside the balls
  {
    int nonzero = 0, tested = 0;
    for (int j = 0; j < cfg.outside_samples; ++j) {
      Vec x;
      if (j % 2 == 0) {
        const Bump& b = spec.bumps[j / 2 % K];
        x = b.center + b.radius * (1.0 + std::pow(10.0, -9.0 + 9.0 * unif(rng))) * random_unit(spec.n, rng);
      } else {
        const double rad = spec.bumps.back().center.norm() * 2.0 * unif(rng);
        x = rad * random_unit(spec.n, rng);
      }
      if (active_bump(spec, x) >= 0) continue;
      ++tested;
      const Vec y = f(x);
      if ((y.array() != 0.0).any()) ++nonzero;
    }
    rep.checks.push_back({"zero_outside", nonzero == 0, static_cast<double>(nonzero), 0.0,
                          std::to_string(tested) + " outside points"});
  }

  // (4) destabilization at the centres
  {
    const int nm = spec.n + spec.m;
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < K; ++i) {
      const Bump& b = spec.bumps[i];
      CenterRecord& c = rep.centers[i];
      Vec z(nm);
      z << b.center, b.partner;
      c.in_regular_cone = regular_normal_cone(F.graph(), z).contains(concat(b.xstar, Vec(-b.ystar)), 1e-9);
      const Vec g = detail::bump_gradient_transpose(b, b.ystar);
      const double inner = b.ystar.dot(b.direction);
      c.gradient_error = (g + b.scale * inner * b.xstar).norm();
      c.covector_norm = (b.xstar + g).norm();
      c.expected_norm = (1.0 - b.scale * inner) * b.xstar.norm();
      c.bound_norm = (1.0 - b.scale * (1.0 - 1.0 / c.k)) * b.xstar.norm();
      const double err = std::max(c.gradient_error, std::abs(c.covector_norm - c.expected_norm));
      worst = std::max(worst, err);
      ok = ok && c.in_regular_cone && err <= cfg.exact_tol && c.covector_norm <= c.bound_norm + cfg.exact_tol;
      if (i > 0) ok = ok && c.covector_norm < rep.centers[i - 1].covector_norm;
    }
    rep.checks.push_back({"destabilization", ok, worst, cfg.exact_tol,
                          "covector norm at k=" + std::to_string(K) + ": " +
                              std::to_string(rep.centers.back().covector_norm)});
  }

  // reg of F + f near the centres
  {
    std::vector<double> ratios(K);
    parallel_for(static_cast<std::size_t>(K), [&](std::size_t i) {
      ratios[i] = detail::centre_reg_ratio(F, f, spec.bumps[i], static_cast<int>(i) + 1);
    });
    bool growing = true;
    for (int i = 0; i < K; ++i) {
      rep.centers[i].reg_ratio = ratios[i];
      if (i > 0) growing = growing && ratios[i] >= ratios[i - 1];
    }
    rep.checks.push_back({"reg_blowup", growing, ratios.back(), 0.0, "sampled reg of F+f near centre K"});
  }

  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.pass; });
  return rep;
}

}  // namespace infreg

#endif  // INFREG_PERTURB_HPP_
