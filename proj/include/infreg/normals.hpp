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

// Normal cones and coderivatives of polyhedral graphs, at points and at
// infinity.
//
// A finite union of polyhedra is cut into strata by the arrangement of all
// constraint hyperplanes: on a stratum every row has a fixed sign, so the
// regular normal cone is constant there (the intersection, over pieces
// containing the stratum, of the cones spanned by the rows that are tight).
// Outer limits of regular normal cones then reduce to finite unions over
// the strata that can reach the limit point.

#ifndef INFREG_NORMALS_HPP_
#define INFREG_NORMALS_HPP_

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "infreg/core.hpp"
#include "infreg/geom/cone.hpp"
#include "infreg/geom/polyhedron.hpp"
#include "infreg/geom/region.hpp"
#include "infreg/sampling.hpp"
#include "infreg/svmap.hpp"

namespace infreg {

inline constexpr int kMaxArrangementPieces = 12;
inline constexpr int kMaxRowsPerPiece = 24;

struct CovectorPair {
  Vec xstar;
  Vec ystar;
};

/// A cell of the constraint arrangement that lies inside the region.
struct Stratum {
  std::vector<int> pieces;               // pieces containing the stratum
  std::vector<std::vector<int>> active;  // tight rows, parallel to `pieces`
  Vec point;                             // representative (relative interior)
  std::vector<int> signs;                // side of each arrangement hyperplane
  bool escapes = false;                  // reaches (infinity, ybar)
  Vec escape_base;                       // closure point with y = ybar
  Vec escape_direction;                  // unit x-direction of escape
  geom::PolyCone regular_cone = geom::PolyCone::zero(1);
};

namespace detail {

struct Arrangement {
  int dim = 0;
  // Distinct hyperplanes <h, z> = c with unit h.
  std::vector<Vec> normals;
  std::vector<double> offsets;
  // Per piece (original index), per row: (hyperplane index, +1/-1) with
  // row = orientation * (h, c).
  std::vector<int> piece_ids;
  std::vector<std::vector<std::pair<int, int>>> rows;
  std::vector<Mat> piece_normals;
};

inline Arrangement build_arrangement(int dim, const std::vector<int>& piece_ids,
                                     const std::vector<Mat>& A, const std::vector<Vec>& b) {
  constexpr double kSame = 1e-10;
  Arrangement arr;
  arr.dim = dim;
  arr.piece_ids = piece_ids;
  for (std::size_t p = 0; p < A.size(); ++p) {
    std::vector<std::pair<int, int>> refs;
    for (Eigen::Index i = 0; i < A[p].rows(); ++i) {
      const Vec a = A[p].row(i).transpose();
      const double c = b[p](i);
      int found = -1, orient = 1;
      for (std::size_t h = 0; h < arr.normals.size() && found < 0; ++h) {
        const double scale = std::max(1.0, std::abs(c));
        if ((a - arr.normals[h]).norm() <= kSame &&
            std::abs(c - arr.offsets[h]) <= kSame * scale) {
          found = static_cast<int>(h);
          orient = 1;
        } else if ((a + arr.normals[h]).norm() <= kSame &&
                   std::abs(c + arr.offsets[h]) <= kSame * scale) {
          found = static_cast<int>(h);
          orient = -1;
        }
      }
      if (found < 0) {
        found = static_cast<int>(arr.normals.size());
        arr.normals.push_back(a);
        arr.offsets.push_back(c);
      }
      refs.emplace_back(found, orient);
    }
    arr.rows.push_back(std::move(refs));
    arr.piece_normals.push_back(A[p]);
  }
  return arr;
}

/// Representative point of {sign(<h_k, z> - c_k) = sigma_k, k < upto}, or
/// nullopt when that cell is empty. Uses homogenised variables (z, tau) so
/// strict signs become margins of 1.
inline std::optional<Vec> cell_point(const Arrangement& arr, const std::vector<int>& sigma,
                                     int upto) {
  const int d = arr.dim;
  int rows = 1;
  for (int k = 0; k < upto; ++k) rows += sigma[k] == 0 ? 2 : 1;
  Mat A = Mat::Zero(rows, d + 1);
  Vec b = Vec::Zero(rows);
  int r = 0;
  for (int k = 0; k < upto; ++k) {
    Vec g(d + 1);
    g << arr.normals[k], -arr.offsets[k];
    if (sigma[k] == 0) {
      A.row(r++) = g.transpose();
      A.row(r++) = -g.transpose();
    } else {
      A.row(r) = -sigma[k] * g.transpose();
      b(r++) = -1.0;
    }
  }
  A(r, d) = -1.0;
  b(r) = -1.0;
  auto w = geom::feasible_point(geom::Polyhedron(A, b));
  if (!w) return std::nullopt;
  return Vec(w->head(d) / (*w)(d));
}

/// Pieces whose rows agree with the assigned signs.
inline std::vector<int> compatible_pieces(const Arrangement& arr, const std::vector<int>& sigma,
                                          int upto) {
  std::vector<int> out;
  for (std::size_t p = 0; p < arr.rows.size(); ++p) {
    bool ok = true;
    for (const auto& [h, o] : arr.rows[p]) {
      if (h < upto && o * sigma[h] > 0) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(static_cast<int>(p));
  }
  return out;
}

/// Closure of the partially assigned cell as a polyhedron.
inline geom::Polyhedron cell_closure(const Arrangement& arr, const std::vector<int>& sigma,
                                     int upto) {
  std::vector<geom::Halfspace> le;
  for (int k = 0; k < upto; ++k) {
    if (sigma[k] <= 0) le.push_back({arr.normals[k], arr.offsets[k]});
    if (sigma[k] >= 0) le.push_back({-arr.normals[k], -arr.offsets[k]});
  }
  return geom::Polyhedron::from_rows(arr.dim, le);
}

inline geom::PolyCone cone_of_rows(int dim, const std::vector<Vec>& rows) {
  if (rows.empty()) return geom::PolyCone::zero(dim);
  return geom::PolyCone::from_generators(dim, rows);
}

inline Stratum make_stratum(const Arrangement& arr, const std::vector<int>& sigma,
                            const std::vector<int>& compat, Vec point) {
  Stratum s;
  s.point = std::move(point);
  std::optional<geom::PolyCone> cone;
  for (int p : compat) {
    std::vector<int> active;
    std::vector<Vec> gens;
    for (std::size_t i = 0; i < arr.rows[p].size(); ++i) {
      if (sigma[arr.rows[p][i].first] == 0) {
        active.push_back(static_cast<int>(i));
        gens.push_back(arr.piece_normals[p].row(static_cast<Eigen::Index>(i)).transpose());
      }
    }
    s.pieces.push_back(arr.piece_ids[p]);
    s.active.push_back(std::move(active));
    geom::PolyCone c = cone_of_rows(arr.dim, gens);
    cone = cone ? cone->intersect(c) : c;
  }
  s.regular_cone = cone ? *cone : geom::PolyCone::zero(arr.dim);
  return s;
}

using PruneFn = std::function<bool(const std::vector<int>& sigma, int upto)>;

/// Depth-first enumeration of nonempty cells contained in some piece.
/// `keep` may reject partial assignments; it must be monotone (rejecting a
/// partial assignment rejects all its completions).
inline std::vector<Stratum> enumerate_strata(const Arrangement& arr, const PruneFn& keep) {
  const int H = static_cast<int>(arr.normals.size());
  std::vector<Stratum> out;
  std::vector<int> sigma(H, 0);
  std::function<void(int)> rec = [&](int k) {
    if (k == H) {
      auto pt = cell_point(arr, sigma, H);
      if (!pt) return;
      out.push_back(make_stratum(arr, sigma, compatible_pieces(arr, sigma, H), std::move(*pt)));
      out.back().signs = sigma;
      return;
    }
    for (int s : {0, -1, 1}) {
      sigma[k] = s;
      if (compatible_pieces(arr, sigma, k + 1).empty()) continue;
      if (!cell_point(arr, sigma, k + 1)) continue;
      if (keep && !keep(sigma, k + 1)) continue;
      rec(k + 1);
    }
    sigma[k] = 0;
  };
  if (arr.rows.empty()) return out;
  rec(0);
  return out;
}

inline void check_scale(const geom::UnionRegion& R) {
  if (static_cast<int>(R.size()) > kMaxArrangementPieces) {
    throw InvalidArgument("stratum enumeration supports at most 12 pieces");
  }
  for (const auto& p : R.pieces()) {
    if (p.num_rows() > kMaxRowsPerPiece) {
      throw InvalidArgument("stratum enumeration supports at most 24 rows per piece");
    }
  }
}

/// Slice of the closure at y = ybar is nonempty and unbounded.
inline std::optional<std::pair<Vec, Vec>> closure_escapes(const geom::Polyhedron& closure, int n,
                                                          const Vec& ybar) {
  auto s = geom::fix_coordinates(closure, n, ybar);
  if (!s) return std::nullopt;
  auto x = geom::feasible_point(*s);
  if (!x) return std::nullopt;
  auto d = recession_direction(*s);
  if (!d) return std::nullopt;
  return std::make_pair(std::move(*x), std::move(*d));
}

}  // namespace detail

/// Regular normal cone of a union at z: the intersection over pieces
/// containing z of the cones spanned by their tight rows. Empty union when
/// z is outside R.
inline geom::ConeUnion regular_normal_cone(const geom::UnionRegion& R, const Vec& z,
                                           double tol = kFeasTol) {
  require_dim(z.size(), R.dim(), "regular_normal_cone");
  geom::ConeUnion out(R.dim());
  std::optional<geom::PolyCone> cone;
  for (const auto& p : R.pieces()) {
    if (!p.contains(z, tol)) continue;
    std::vector<Vec> gens;
    for (int i : p.active_set(z, tol)) gens.push_back(p.normals().row(i).transpose());
    geom::PolyCone c = detail::cone_of_rows(R.dim(), gens);
    cone = cone ? cone->intersect(c) : c;
  }
  if (cone) out.add(*cone);
  return out;
}

/// Strata of the tangent arrangement at z; every cell of the union of
/// tangent cones, with its regular normal cone.
inline std::vector<Stratum> local_strata(const geom::UnionRegion& R, const Vec& z,
                                         double tol = kFeasTol) {
  require_dim(z.size(), R.dim(), "local_strata");
  detail::check_scale(R);
  std::vector<int> ids;
  std::vector<Mat> A;
  std::vector<Vec> b;
  for (std::size_t i = 0; i < R.size(); ++i) {
    const auto& p = R.pieces()[i];
    if (!p.contains(z, tol)) continue;
    const auto act = p.active_set(z, tol);
    Mat Ai(static_cast<Eigen::Index>(act.size()), R.dim());
    for (std::size_t k = 0; k < act.size(); ++k) {
      Ai.row(static_cast<Eigen::Index>(k)) = p.normals().row(act[k]);
    }
    ids.push_back(static_cast<int>(i));
    A.push_back(Ai);
    b.push_back(Vec::Zero(Ai.rows()));
  }
  const auto arr = detail::build_arrangement(R.dim(), ids, A, b);
  if (arr.rows.empty()) return {};
  if (arr.normals.empty()) {
    // Every containing piece is a neighbourhood of z.
    Stratum s;
    s.pieces = ids;
    s.active.assign(ids.size(), {});
    s.point = Vec::Zero(R.dim());
    s.regular_cone = geom::PolyCone::zero(R.dim());
    return {s};
  }
  return detail::enumerate_strata(arr, nullptr);
}

/// Limiting normal cone at z: the union of regular normal cones of all
/// cells of the tangent arrangement.
inline geom::ConeUnion limiting_normal_cone(const geom::UnionRegion& R, const Vec& z,
                                            double tol = kFeasTol) {
  geom::ConeUnion out(R.dim());
  for (auto& s : local_strata(R, z, tol)) out.add(std::move(s.regular_cone));
  return out.reduced();
}

/// Strata of gph F that reach (infinity, ybar), restricted to pieces that
/// satisfy the Jelonek condition (no other piece can contain such a
/// stratum).
inline std::vector<Stratum> escaping_strata(const SetValuedMap& F, const Vec& ybar) {
  require_dim(ybar.size(), F.m(), "escaping_strata");
  detail::check_scale(F.graph());
  const auto ids = jelonek_pieces(F, ybar);
  std::vector<Mat> A;
  std::vector<Vec> b;
  for (int i : ids) {
    A.push_back(F.graph().pieces()[i].normals());
    b.push_back(F.graph().pieces()[i].offsets());
  }
  const auto arr = detail::build_arrangement(F.n() + F.m(), ids, A, b);
  if (arr.rows.empty()) return {};
  const int n = F.n();
  auto keep = [&](const std::vector<int>& sigma, int upto) {
    return detail::closure_escapes(detail::cell_closure(arr, sigma, upto), n, ybar).has_value();
  };
  std::vector<Stratum> out;
  if (arr.normals.empty()) {
    // A whole-space piece.
    Stratum s;
    s.pieces = ids;
    s.active.assign(ids.size(), {});
    s.point = Vec::Zero(arr.dim);
    s.regular_cone = geom::PolyCone::zero(arr.dim);
    out.push_back(std::move(s));
  } else {
    out = detail::enumerate_strata(arr, keep);
  }
  for (auto& s : out) {
    auto esc = detail::closure_escapes(
        detail::cell_closure(arr, s.signs, static_cast<int>(s.signs.size())), n, ybar);
    s.escapes = esc.has_value();
    if (esc) {
      s.escape_base = std::move(esc->first);
      s.escape_direction = std::move(esc->second);
    }
  }
  return out;
}

/// Normal cone to gph F at (infinity, ybar): the union of regular normal
/// cones of escaping strata. Empty when ybar is not in the Jelonek set.
inline geom::ConeUnion normal_cone_at_infinity(const SetValuedMap& F, const Vec& ybar) {
  geom::ConeUnion out(F.n() + F.m());
  for (auto& s : escaping_strata(F, ybar)) {
    if (s.escapes) out.add(std::move(s.regular_cone));
  }
  return out.reduced();
}

/// D*F(x, y)(ystar) = {x* : (x*, -ystar) in N_gph F(x, y)}.
inline geom::UnionRegion coderivative_at_point(const SetValuedMap& F, const Vec& x, const Vec& y,
                                               const Vec& ystar) {
  require_dim(ystar.size(), F.m(), "coderivative_at_point");
  if (!F.contains(x, y)) return geom::UnionRegion(F.n());
  return geom::slice_cone_union(limiting_normal_cone(F.graph(), concat(x, y)), F.n(), -ystar);
}

/// D*F(infinity, ybar)(ystar).
inline geom::UnionRegion coderivative_at_infinity(const SetValuedMap& F, const Vec& ybar,
                                                  const Vec& ystar) {
  require_dim(ystar.size(), F.m(), "coderivative_at_infinity");
  if (!jelonek_contains(F, ybar).contains) {
    throw NotInJelonekSet("ybar is not reached along escaping graph sequences");
  }
  return geom::slice_cone_union(normal_cone_at_infinity(F, ybar), F.n(), -ystar);
}

struct SampledLimitConfig {
  int samples_per_stage = 48;
  std::uint64_t seed = 1;
  double tol = kSampledAngleTol;
  bool throw_if_unstable = true;
};

struct SampledLimit {
  geom::ConeUnion cone{1};                  // last stage
  std::vector<geom::ConeUnion> stages;
  std::vector<int> accepted;                // accepted samples per stage
  std::vector<Vec> xstar_samples;           // min-norm D*F(x, y)(z*) points, last stage
  double stage_gap = kInf;                  // ray Hausdorff distance of the last two stages
  bool stabilized = false;
};

/// Outer limit of coderivatives along graph samples escaping to
/// (infinity, ybar). Stage j samples |x| in [S_j, S_{j+1}],
/// |y - ybar| <= r / (j + 1) and |z* - ystar| <= 1 / (j + 1); the result is
/// stable when the last two stages agree within `cfg.tol`. Two-stage
/// agreement is a heuristic, not a convergence proof.
inline SampledLimit sampled_coderivative_limit(const SetValuedMap& F, const Vec& ybar,
                                               const Vec& ystar, const InfinityWindow& window,
                                               const SampledLimitConfig& cfg = {}) {
  window.validate();
  if (!jelonek_contains(F, ybar).contains) {
    throw NotInJelonekSet("ybar is not reached along escaping graph sequences");
  }
  std::vector<double> sched = window.schedule;
  if (sched.size() < 2) sched = InfinityWindow::doubling_schedule(10.0, 11);
  const int n = F.n();
  const int m = F.m();
  const int dim = n + m;
  const auto base_pre = preimage_slice(F, ybar);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::map<std::vector<int>, geom::ConeUnion> cache;

  SampledLimit res;
  const int J = static_cast<int>(sched.size());
  for (int j = 0; j < J; ++j) {
    const double lo = sched[j];
    const double hi = j + 1 < J ? sched[j + 1] : 2.0 * sched[j];
    const double ry = window.r / (j + 1);
    const double rz = 1.0 / (j + 1);
    geom::ConeUnion stage(dim);
    std::vector<Vec> xs;
    int accepted = 0;
    for (int s = 0; s < cfg.samples_per_stage * 8 && accepted < cfg.samples_per_stage; ++s) {
      const double rad = lo + (hi - lo) * unif(rng);
      const Vec x0 = rad * random_unit(n, rng);
      const Vec dy = ry * unif(rng) * random_unit(m, rng);
      Vec z;
      if (s % 2 == 0) {
        // Nearest graph point to (x-anchor near F^{-1}(ybar), perturbed y).
        auto near = base_pre.nearest(x0);
        if (!near) continue;
        Vec xa = near->first + ry * unif(rng) * random_unit(n, rng);
        auto g = F.graph().nearest(concat(xa, ybar + dy));
        if (!g) continue;
        z = g->first;
      } else {
        auto pre = preimage_slice(F, ybar + dy).nearest(x0);
        if (!pre) continue;
        z = concat(pre->first, ybar + dy);
      }
      const double xn = z.head(n).norm();
      if (xn < lo || xn > hi || (z.tail(m) - ybar).norm() > ry) continue;
      ++accepted;

      std::vector<int> key;
      for (std::size_t i = 0; i < F.graph().size(); ++i) {
        const auto& p = F.graph().pieces()[i];
        if (!p.contains(z)) continue;
        key.push_back(static_cast<int>(i));
        for (int a : p.active_set(z)) key.push_back(1000 + a);
        key.push_back(-1);
      }
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, limiting_normal_cone(F.graph(), z)).first;
      for (const auto& c : it->second.pieces()) stage.add(c);

      if (j + 1 == J) {
        Vec zstar = ystar + rz * unif(rng) * random_unit(m, rng);
        const double zn = zstar.norm();
        if (zn > 0) {
          for (const auto& c : it->second.pieces()) {
            auto x = geom::min_norm_in_slice(c, n, zstar / zn);
            if (x) xs.push_back(*x * zn);
          }
        }
      }
    }
    res.accepted.push_back(accepted);
    res.stages.push_back(stage.reduced());
    if (j + 1 == J) res.xstar_samples = std::move(xs);
  }
  res.cone = res.stages.back();
  if (J >= 2) {
    const auto& a = res.stages[J - 1];
    const auto& b = res.stages[J - 2];
    res.stage_gap = (a.empty() || b.empty()) ? kInf : a.ray_hausdorff(b);
    res.stabilized = !a.empty() && res.stage_gap <= cfg.tol && a.approx_equal(b, cfg.tol);
  }
  if (!res.stabilized && cfg.throw_if_unstable) {
    throw NotStabilized("sampled cones did not agree over the last two schedule stages");
  }
  return res;
}

}  // namespace infreg

#endif  // INFREG_NORMALS_HPP_
