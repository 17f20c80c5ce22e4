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

// Regularity moduli at infinity.
//
// Exact side: rg+ (smallest |x*| over coderivative values at infinity with
// a unit y*) and upper norms of positively homogeneous maps. Sampled side:
// the metric regularity modulus reg, Lipschitz moduli at infinity and the
// single-valued localization test.

#ifndef INFREG_REGMOD_HPP_
#define INFREG_REGMOD_HPP_

#include <algorithm>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "infreg/core.hpp"
#include "infreg/geom/region.hpp"
#include "infreg/geom/unit_slice.hpp"
#include "infreg/geom/vertices.hpp"
#include "infreg/normals.hpp"
#include "infreg/parallel.hpp"
#include "infreg/sampling.hpp"
#include "infreg/svmap.hpp"

namespace infreg {

// ---------------------------------------------------------------- rg+ ----

struct RgPlusResult {
  double value = kInf;
  CovectorPair argmin;
  std::string method = "exact-face-enumeration";
  double grid_value = kInf;  // sphere-grid cross-check (m <= 3)
  bool cross_checked = false;
  bool cross_check_agrees = false;
  geom::ConeUnion cone{1};   // N_gph F(infinity, ybar)
};

namespace detail {

/// min over pieces of min |x*| with (x*, -ystar) in the piece; +inf if no
/// piece admits ystar.
inline double slice_min_norm(const geom::ConeUnion& N, int n, const Vec& ystar) {
  double best = kInf;
  for (const auto& c : N.pieces()) {
    auto x = geom::min_norm_in_slice(c, n, ystar);
    if (x) best = std::min(best, x->norm());
  }
  return best;
}

inline Vec sphere_point(int m, double a, double b) {
  if (m == 1) return Vec::Constant(1, a < std::numbers::pi ? 1.0 : -1.0);
  Vec v(m);
  if (m == 2) {
    v << std::cos(a), std::sin(a);
  } else {
    v << std::sin(b) * std::cos(a), std::sin(b) * std::sin(a), std::cos(b);
  }
  return v;
}

/// Grid over unit y* at angular step pi/180 followed by three rounds of
/// local refinement around the best grid point.
inline double sphere_grid_min(const geom::ConeUnion& N, int n, int m) {
  if (m == 1) {
    return std::min(slice_min_norm(N, n, Vec::Constant(1, 1.0)),
                    slice_min_norm(N, n, Vec::Constant(1, -1.0)));
  }
  const double step = std::numbers::pi / 180.0;
  double best = kInf, ba = 0.0, bb = 0.0;
  auto eval = [&](double a, double b) {
    const double v = slice_min_norm(N, n, sphere_point(m, a, b));
    if (v < best) {
      best = v;
      ba = a;
      bb = b;
    }
  };
  if (m == 2) {
    for (int k = 0; k < 360; ++k) eval(k * step, 0.0);
  } else {
    for (int j = 0; j <= 180; ++j) {
      const double b = j * step;
      const int ring = std::max(1, static_cast<int>(std::round(360 * std::sin(b))));
      for (int k = 0; k < ring; ++k) eval(2.0 * std::numbers::pi * k / ring, b);
    }
  }
  double h = step / 2.0;
  for (int round = 0; round < 3; ++round, h /= 2.0) {
    const double a0 = ba, b0 = bb;
    for (int da = -2; da <= 2; ++da) {
      for (int db = (m == 3 ? -2 : 0); db <= (m == 3 ? 2 : 0); ++db) {
        eval(a0 + da * h, b0 + db * h);
      }
    }
  }
  return best;
}

}  // namespace detail

/// rg+ F(infinity, ybar), exact by face enumeration on every cone piece of
/// the normal cone at infinity, cross-checked on a sphere grid when m <= 3.
inline RgPlusResult rg_plus(const SetValuedMap& F, const Vec& ybar, bool cross_check = true) {
  if (!jelonek_contains(F, ybar).contains) {
    throw NotInJelonekSet("ybar is not reached along escaping graph sequences");
  }
  const int n = F.n(), m = F.m();
  RgPlusResult res;
  res.cone = normal_cone_at_infinity(F, ybar);
  for (const auto& c : res.cone.pieces()) {
    auto r = geom::min_first_norm_on_unit_second(c, n);
    if (r && r->value < res.value) {
      res.value = r->value;
      res.argmin.xstar = r->first;
      res.argmin.ystar = -r->second;
    }
  }
  if (cross_check && m <= 3) {
    res.cross_checked = true;
    res.grid_value = detail::sphere_grid_min(res.cone, n, m);
    // The grid only sees sampled directions, so it can exceed the exact
    // minimum; it must never undercut it.
    const double scale = std::max(1.0, res.value == kInf ? 1.0 : res.value);
    res.cross_check_agrees =
        (res.value == kInf && res.grid_value == kInf) ||
        (res.grid_value >= res.value - 1e-9 * scale &&
         (m == 1 ? res.grid_value <= res.value + 1e-9 * scale
                 : res.grid_value <= res.value + 1e-3 * scale));
  }
  return res;
}

// ---------------------------------------------------------- upper norm ----

/// |H|^+ = sup{|y| : y in H(x), |x| <= 1} for H with graph a union of cones
/// in R^{n_in} x R^{n_out}, coordinates (x, y).
inline double upper_norm(const geom::ConeUnion& graph, int n_in) {
  double best = 0.0;
  for (const auto& c : graph.pieces()) {
    auto r = geom::min_first_norm_on_unit_second(c, n_in);
    if (!r) continue;  // only y = 0 in this piece
    if (r->value <= kZeroTol) return kInf;
    best = std::max(best, 1.0 / r->value);
  }
  return best;
}

/// Graph of x* => {y* : x* in D*F(infinity, ybar)(y*)}, coordinates
/// (x*, y*); its upper norm is 1 / rg+.
inline geom::ConeUnion coderivative_inverse_graph(const geom::ConeUnion& N, int n) {
  geom::ConeUnion out(N.dim());
  for (const auto& c : N.pieces()) {
    auto flip = [n](Vec v) {
      v.tail(v.size() - n) *= -1.0;
      return v;
    };
    std::vector<Vec> rays, lin;
    for (const auto& r : c.rays()) rays.push_back(flip(r));
    for (const auto& l : c.lineality()) lin.push_back(flip(l));
    out.add(rays.empty() && lin.empty() ? geom::PolyCone::zero(N.dim())
                                        : geom::PolyCone::from_generators(N.dim(), rays, lin));
  }
  return out;
}

// ---------------------------------------------------------- reg sampling ---

struct RegSamplerConfig {
  int budget = 10000;       // candidate (x, y) pairs
  int shells = 6;           // |x| ~ R * 2^j
  int directions = 16;      // spherical design size per shell
  int radial_levels = 24;   // y shells r * 2^-s
  std::uint64_t seed = 1;
};

struct RatioSample {
  Vec x;
  Vec y;
  double numerator = 0.0;    // dist(x, F^{-1}(y))
  double denominator = 0.0;  // dist(y, F(x))
  double ratio = 0.0;
};

struct RegEstimate {
  double value = 0.0;
  RatioSample witness;
  InfinityWindow window;
  int samples = 0;      // admissible pairs
  int candidates = 0;   // pairs tried
  bool failure = false; // some ratio was infinite or above the cap
  std::string method = "sampled";
  std::vector<RatioSample> ratios;
};

namespace detail {

/// Points of F^{-1}(ybar) far out: nearest preimage points to shell points
/// plus escape rays of the Jelonek witness and escaping strata.
inline std::vector<Vec> escape_anchors(const SetValuedMap& F, const Vec& ybar,
                                       const InfinityWindow& w, const RegSamplerConfig& cfg) {
  const int n = F.n();
  std::vector<Vec> out;
  const auto pre = preimage_slice(F, ybar);
  const auto dirs = spherical_design(n, cfg.directions);
  std::vector<std::pair<Vec, Vec>> rays;
  for (const auto& s : escaping_strata(F, ybar)) {
    if (s.escapes) rays.emplace_back(s.escape_base, s.escape_direction);
  }
  const auto jw = jelonek_contains(F, ybar);
  if (jw.contains) rays.emplace_back(jw.point, jw.direction);
  for (int j = 0; j < cfg.shells; ++j) {
    const double s = w.R * std::ldexp(1.0, j) * 1.25;
    for (const auto& [base, d] : rays) out.push_back(base + s * d);
    for (const auto& u : dirs) {
      auto p = pre.nearest(s * u);
      if (p && p->first.norm() > w.R) out.push_back(p->first);
    }
  }
  return out;
}

}  // namespace detail

/// Generic ratio sampler. `numerator(x, y)` and `denominator(x, y)` give
/// dist(x, G^{-1}(y)) (or an upper bound) and dist(y, G(x)).
inline RegEstimate estimate_reg_with(
    const std::vector<Vec>& anchors, int m, const Vec& ybar, const InfinityWindow& w,
    const RegSamplerConfig& cfg, const std::function<double(const Vec&, const Vec&)>& numerator,
    const std::function<double(const Vec&, const Vec&)>& denominator) {
  w.validate();
  if (anchors.empty()) throw NoAdmissibleSamples("no anchor points outside the inner radius");
  const int n = static_cast<int>(anchors.front().size());
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<RatioSample> cand(cfg.budget);
  const auto ydirs = spherical_design(m, std::max(2 * m, 8));
  for (int i = 0; i < cfg.budget; ++i) {
    auto& s = cand[i];
    const Vec& a = anchors[i % anchors.size()];
    // x: anchor plus an offset of length up to gamma (every fourth sample
    // stays tiny to probe the ratio near the graph).
    const double len = (i % 4 == 3 ? 1e-3 : 1.0) * w.gamma * unif(rng);
    s.x = a + len * random_unit(n, rng);
    if (i % 2 == 0) {
      s.y = ybar + halton_in_ball(static_cast<std::uint64_t>(i / 2), m, 0.999 * w.r);
    } else {
      const int level = (i / 2) % cfg.radial_levels;
      const Vec& u = ydirs[(i / 2 / cfg.radial_levels) % ydirs.size()];
      s.y = ybar + 0.999 * w.r * std::ldexp(1.0, -level) * u;
    }
  }
  std::vector<char> ok(cfg.budget, 0);
  parallel_for(cand.size(), [&](std::size_t i) {
    auto& s = cand[i];
    if (s.x.norm() <= w.R || (s.y - ybar).norm() >= w.r) return;
    s.denominator = denominator(s.x, s.y);
    if (!(s.denominator > 0.0) || !(s.denominator < w.gamma)) return;
    s.numerator = numerator(s.x, s.y);
    s.ratio = s.numerator / s.denominator;
    ok[i] = 1;
  });
  RegEstimate est;
  est.window = w;
  est.candidates = cfg.budget;
  bool have = false;
  for (int i = 0; i < cfg.budget; ++i) {
    if (!ok[i]) continue;
    ++est.samples;
    const auto& s = cand[i];
    if (!(s.ratio <= kRatioCap)) est.failure = true;
    if (!have || s.ratio > est.witness.ratio) {
      est.witness = s;
      have = true;
    }
    est.ratios.push_back(s);
  }
  if (est.samples == 0) throw NoAdmissibleSamples("window admits no sampled (x, y) pairs");
  est.value = est.failure ? kInf : est.witness.ratio;
  return est;
}

/// Sampled reg F(infinity, ybar): sup of dist(x, F^{-1}(y)) / dist(y, F(x))
/// over |x| > R, |y - ybar| < r, 0 < dist(y, F(x)) < gamma. Both distances
/// are exact projections.
inline RegEstimate estimate_reg_at_infinity(const SetValuedMap& F, const Vec& ybar,
                                            const InfinityWindow& w,
                                            const RegSamplerConfig& cfg = {}) {
  if (!jelonek_contains(F, ybar).contains) {
    throw NotInJelonekSet("ybar is not reached along escaping graph sequences");
  }
  const auto anchors = detail::escape_anchors(F, ybar, w, cfg);
  return estimate_reg_with(
      anchors, F.m(), ybar, w, cfg,
      [&F](const Vec& x, const Vec& y) { return dist_to_preimage(F, x, y); },
      [&F](const Vec& x, const Vec& y) { return dist_to_image(F, x, y); });
}

// ---------------------------------------------------------- criterion ----

struct CriterionReport {
  double rg_plus = kInf;
  double reg = 0.0;
  double inv_reg = kInf;
  double gap = kInf;       // |rg+ - 1/reg| / max(rg+, 1e-9)
  double tolerance = 0.05;
  bool degenerate = false; // rg+ = 0 paired with reg = +inf
  bool pass = false;
  RgPlusResult rg;
  RegEstimate est;
};

inline CriterionReport criterion_check(const SetValuedMap& F, const Vec& ybar,
                                       const InfinityWindow& w, const RegSamplerConfig& cfg = {},
                                       double tol = 0.05) {
  CriterionReport rep;
  rep.tolerance = tol;
  rep.rg = rg_plus(F, ybar);
  rep.est = estimate_reg_at_infinity(F, ybar, w, cfg);
  rep.rg_plus = rep.rg.value;
  rep.reg = rep.est.value;
  rep.inv_reg = rep.est.failure ? 0.0 : 1.0 / rep.reg;
  if (rep.rg_plus <= 1e-9 || rep.est.failure) {
    rep.degenerate = rep.rg_plus <= 1e-9 && rep.est.failure;
    rep.gap = rep.degenerate ? 0.0 : kInf;
    rep.pass = rep.degenerate;
    return rep;
  }
  rep.gap = std::abs(rep.rg_plus - rep.inv_reg) / std::max(rep.rg_plus, 1e-9);
  rep.pass = rep.gap <= tol;
  return rep;
}

// --------------------------------------------------------- lip at inf ----

struct LipConfig {
  int pairs = 4000;
  std::uint64_t seed = 7;
  std::vector<std::pair<Vec, Vec>> targeted;  // extra pairs supplied by callers
};

struct LipEstimate {
  double value = 0.0;
  Vec x, xprime;
  int pairs = 0;
};

/// Sampled lip f(infinity) over pairs outside B_R: random points on shells
/// with partners at log-uniform separations, plus any targeted pairs.
inline LipEstimate lip_at_infinity(const SampledMap& f, const InfinityWindow& w,
                                   const LipConfig& cfg = {}) {
  w.validate();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<Vec, Vec>> pairs = cfg.targeted;
  for (int i = 0; i < cfg.pairs; ++i) {
    const double rad = w.R * (1.0 + 3.0 * unif(rng)) + 1e-6;
    const Vec x = rad * random_unit(f.n, rng);
    const double h = std::pow(10.0, -4.0 + 4.0 * unif(rng));
    pairs.emplace_back(x, x + h * random_unit(f.n, rng));
  }
  std::vector<double> q(pairs.size(), -1.0);
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto& [a, b] = pairs[i];
    const double d = (a - b).norm();
    if (!(d > 0.0) || a.norm() <= w.R || b.norm() <= w.R) return;
    q[i] = (f(a) - f(b)).norm() / d;
  });
  LipEstimate out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (q[i] < 0.0) continue;
    ++out.pairs;
    if (q[i] > out.value || out.x.size() == 0) {
      out.value = std::max(out.value, q[i]);
      out.x = pairs[i].first;
      out.xprime = pairs[i].second;
    }
  }
  return out;
}

// ----------------------------------------------------- strong regularity ----

struct StrongConfig {
  int grid_per_axis = 9;  // points per axis of the y grid
  double tol = 0.05;      // Lipschitz comparison with reg
  RegSamplerConfig reg;
};

struct StrongReport {
  bool decision = false;
  std::string diagnostic;   // "", "MultivaluedLocalization", "EmptyLocalization", ...
  Vec witness_y;            // where the diagnostic was triggered
  double empirical_lip = kInf;
  double reg = kInf;
  bool reg_available = false;
  int grid_points = 0;
  std::vector<std::pair<Vec, Vec>> localization;  // (y, x(y))
};

namespace detail {

enum class LocalSlice { kEmpty, kSingle, kMulti };

/// Classifies F^{-1}(y) outside B_R.
inline LocalSlice classify_far_slice(const SetValuedMap& F, const Vec& y, double R, Vec* point) {
  std::vector<Vec> pts;
  const auto slice = preimage_slice(F, y);
  for (const auto& Q : slice.pieces()) {
    if (recession_direction(Q)) return LocalSlice::kMulti;
    if (auto p = geom::single_point(Q)) {
      if (p->norm() > R) pts.push_back(*p);
      continue;
    }
    auto verts = geom::polytope_vertices(Q);
    if (!verts) throw NumericalFailure("bounded slice without vertex description");
    for (const auto& v : *verts) {
      if (v.norm() > R) return LocalSlice::kMulti;
    }
  }
  if (pts.empty()) return LocalSlice::kEmpty;
  for (const auto& p : pts) {
    if ((p - pts.front()).norm() > kFeasTol) return LocalSlice::kMulti;
  }
  *point = pts.front();
  return LocalSlice::kSingle;
}

inline std::vector<Vec> ball_grid(const Vec& center, double r, int per_axis) {
  const int m = static_cast<int>(center.size());
  std::vector<Vec> out;
  std::vector<int> idx(m, 0);
  while (true) {
    Vec y = center;
    for (int i = 0; i < m; ++i) {
      y(i) += r * (2.0 * (idx[i] + 1) / (per_axis + 1) - 1.0);
    }
    if ((y - center).norm() < r) out.push_back(y);
    int k = 0;
    while (k < m && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == m) break;
  }
  return out;
}

}  // namespace detail

/// Single-valued Lipschitz localization test for F^{-1} on B_r(ybar)
/// outside B_R. Uses a grid of y (odd per-axis counts include ybar).
inline StrongReport strong_regularity_check(const SetValuedMap& F, const Vec& ybar,
                                            const InfinityWindow& w,
                                            const StrongConfig& cfg = {}) {
  w.validate();
  if (!jelonek_contains(F, ybar).contains) {
    throw NotInJelonekSet("ybar is not reached along escaping graph sequences");
  }
  StrongReport rep;
  const auto grid = detail::ball_grid(ybar, w.r, cfg.grid_per_axis);
  rep.grid_points = static_cast<int>(grid.size());
  for (const auto& y : grid) {
    Vec x;
    const auto kind = detail::classify_far_slice(F, y, w.R, &x);
    if (kind == detail::LocalSlice::kMulti) {
      rep.diagnostic = "MultivaluedLocalization";
      rep.witness_y = y;
      break;
    }
    if (kind == detail::LocalSlice::kEmpty) {
      rep.diagnostic = "EmptyLocalization";
      rep.witness_y = y;
      break;
    }
    rep.localization.emplace_back(y, x);
  }
  try {
    const auto est = estimate_reg_at_infinity(F, ybar, w, cfg.reg);
    rep.reg = est.value;
    rep.reg_available = true;
  } catch (const NoAdmissibleSamples&) {
    rep.reg_available = false;
  }
  if (!rep.diagnostic.empty()) return rep;
  rep.empirical_lip = 0.0;
  for (std::size_t i = 0; i < rep.localization.size(); ++i) {
    for (std::size_t j = i + 1; j < rep.localization.size(); ++j) {
      const auto& [ya, xa] = rep.localization[i];
      const auto& [yb, xb] = rep.localization[j];
      rep.empirical_lip = std::max(rep.empirical_lip, (xa - xb).norm() / (ya - yb).norm());
    }
  }
  if (!rep.reg_available || rep.empirical_lip > rep.reg * (1.0 + cfg.tol)) {
    rep.diagnostic = rep.reg_available ? "LipschitzAboveReg" : "RegUnavailable";
    return rep;
  }
  rep.decision = true;
  return rep;
}

}  // namespace infreg

#endif  // INFREG_REGMOD_HPP_
