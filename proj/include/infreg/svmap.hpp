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

// Set-valued maps with polyhedral graphs, single-valued sampled maps, and
// their sums.

#ifndef INFREG_SVMAP_HPP_
#define INFREG_SVMAP_HPP_

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "infreg/core.hpp"
#include "infreg/geom/cone.hpp"
#include "infreg/geom/polyhedron.hpp"
#include "infreg/geom/region.hpp"

namespace infreg {

/// F : R^n => R^m given by gph F, a finite union of polyhedra in R^{n+m}
/// with coordinates ordered (x, y).
class SetValuedMap {
 public:
  SetValuedMap(int n, int m, geom::UnionRegion graph) : n_(n), m_(m), graph_(std::move(graph)) {
    if (n < 1 || m < 1) throw InvalidArgument("map dimensions must be >= 1");
    require_dim(graph_.dim(), n + m, "SetValuedMap graph");
  }

  SetValuedMap(int n, int m, std::vector<geom::Polyhedron> pieces)
      : SetValuedMap(n, m, geom::UnionRegion(n + m, std::move(pieces))) {}

  int n() const { return n_; }
  int m() const { return m_; }
  const geom::UnionRegion& graph() const { return graph_; }

  bool contains(const Vec& x, const Vec& y, double tol = kFeasTol) const {
    require_dim(x.size(), n_, "SetValuedMap input");
    require_dim(y.size(), m_, "SetValuedMap output");
    return graph_.contains(concat(x, y), tol);
  }

  /// The map x => c F(x), c != 0.
  SetValuedMap scale_output(double c) const {
    if (!(std::abs(c) > 0.0) || !std::isfinite(c)) {
      throw InvalidArgument("output scale must be finite and nonzero");
    }
    std::vector<geom::Polyhedron> pieces;
    for (const auto& p : graph_.pieces()) {
      if (p.num_rows() == 0) {
        pieces.emplace_back(p.dim());
        continue;
      }
      Mat A = p.normals();
      A.rightCols(m_) /= c;
      pieces.emplace_back(A, p.offsets());
    }
    return SetValuedMap(n_, m_, std::move(pieces));
  }

  /// The inverse map, with graph coordinates swapped to (y, x).
  SetValuedMap inverse() const {
    std::vector<geom::Polyhedron> pieces;
    for (const auto& p : graph_.pieces()) {
      if (p.num_rows() == 0) {
        pieces.emplace_back(p.dim());
        continue;
      }
      Mat A(p.num_rows(), n_ + m_);
      A << p.normals().rightCols(m_), p.normals().leftCols(n_);
      pieces.emplace_back(A, p.offsets());
    }
    return SetValuedMap(m_, n_, std::move(pieces));
  }

 private:
  int n_;
  int m_;
  geom::UnionRegion graph_;
};

/// Region of radii describing a neighbourhood of infinity in the input
/// space and a ball around the reference output.
struct InfinityWindow {
  double R = 10.0;      // inputs with |x| > R
  double r = 0.5;       // outputs with |y - ybar| < r
  double gamma = 1.0;   // residual cap dist(y, F(x)) < gamma
  std::vector<double> schedule;  // increasing radii for outer limits

  void validate() const {
    if (!(R > 0.0) || !(r > 0.0) || !(gamma > 0.0)) {
      throw InvalidArgument("window radii R, r, gamma must be positive");
    }
    for (std::size_t i = 1; i < schedule.size(); ++i) {
      if (!(schedule[i] > schedule[i - 1])) {
        throw InvalidArgument("window schedule must be strictly increasing");
      }
    }
  }

  /// R_j = base * 2^j, j = 0..count-1.
  static std::vector<double> doubling_schedule(double base, int count) {
    std::vector<double> out;
    double s = base;
    for (int j = 0; j < count; ++j, s *= 2.0) out.push_back(s);
    return out;
  }
};

/// Single-valued map known only through evaluation. The evaluator must be
/// safe to call concurrently.
struct SampledMap {
  int n = 0;
  int m = 0;
  std::function<Vec(const Vec&)> eval;
  std::optional<double> declared_lip;  // Lipschitz modulus outside B_R, if known
  double declared_lip_radius = 0.0;

  Vec operator()(const Vec& x) const {
    require_dim(x.size(), n, "SampledMap input");
    Vec y = eval(x);
    require_dim(y.size(), m, "SampledMap output");
    return y;
  }

  static SampledMap zero(int n, int m) {
    SampledMap f;
    f.n = n;
    f.m = m;
    f.eval = [m](const Vec&) { return Vec::Zero(m); };
    f.declared_lip = 0.0;
    return f;
  }

  static SampledMap constant(int n, const Vec& c) {
    SampledMap f;
    f.n = n;
    f.m = static_cast<int>(c.size());
    f.eval = [c](const Vec&) { return c; };
    f.declared_lip = 0.0;
    return f;
  }
};

/// F(x) as a region of R^m; empty region when x is outside dom F.
inline geom::UnionRegion image_slice(const SetValuedMap& F, const Vec& x) {
  require_dim(x.size(), F.n(), "image_slice");
  geom::UnionRegion out(F.m());
  for (const auto& p : F.graph().pieces()) {
    auto s = geom::fix_coordinates(p, 0, x);
    if (s && !s->is_empty()) out.add(std::move(*s));
  }
  return out;
}

/// F^{-1}(y) as a region of R^n.
inline geom::UnionRegion preimage_slice(const SetValuedMap& F, const Vec& y) {
  require_dim(y.size(), F.m(), "preimage_slice");
  geom::UnionRegion out(F.n());
  for (const auto& p : F.graph().pieces()) {
    auto s = geom::fix_coordinates(p, F.n(), y);
    if (s && !s->is_empty()) out.add(std::move(*s));
  }
  return out;
}

/// dist(y, F(x)); +inf when F(x) is empty.
inline double dist_to_image(const SetValuedMap& F, const Vec& x, const Vec& y) {
  require_dim(y.size(), F.m(), "dist_to_image");
  return geom::dist_union(y, image_slice(F, x));
}

/// dist(x, F^{-1}(y)); +inf when the preimage is empty.
inline double dist_to_preimage(const SetValuedMap& F, const Vec& x, const Vec& y) {
  require_dim(x.size(), F.n(), "dist_to_preimage");
  return geom::dist_union(x, preimage_slice(F, y));
}

/// Nonzero d with A d <= 0 (rows of A), or nullopt if the cone is {0}.
/// Decided by 2 * dim feasibility problems {A d <= 0, +/- d_i >= 1}.
inline std::optional<Vec> recession_direction(const geom::Polyhedron& P) {
  const int dim = P.dim();
  if (P.num_rows() == 0) return Vec::Unit(dim, 0);
  for (int i = 0; i < dim; ++i) {
    for (double sgn : {1.0, -1.0}) {
      Mat A(P.num_rows() + 1, dim);
      Vec b = Vec::Zero(P.num_rows() + 1);
      A.topRows(P.num_rows()) = P.normals();
      A.row(P.num_rows()) = -sgn * Vec::Unit(dim, i).transpose();
      b(P.num_rows()) = -1.0;
      auto d = geom::feasible_point(geom::Polyhedron(A, b));
      if (d) return d->normalized();
    }
  }
  return std::nullopt;
}

struct JelonekResult {
  bool contains = false;
  int piece = -1;   // witness piece index
  Vec point;        // x with (x, ybar) in the witness piece
  Vec direction;    // unit d with (x + t d, ybar) in the piece for t >= 0
};

/// Is there a graph sequence (x_k, y_k) with |x_k| -> inf and y_k -> ybar?
///
/// For a closed polyhedral piece P this holds iff the slice
/// {x : (x, ybar) in P} is nonempty and unbounded: projections of
/// polyhedra are closed (so ybar is attained) and normalised escaping
/// sequences converge to a recession direction of the form (d, 0).
inline JelonekResult jelonek_contains(const SetValuedMap& F, const Vec& ybar) {
  require_dim(ybar.size(), F.m(), "jelonek_contains");
  JelonekResult res;
  const auto& pieces = F.graph().pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    auto s = geom::fix_coordinates(pieces[i], F.n(), ybar);
    if (!s) continue;
    auto x = geom::feasible_point(*s);
    if (!x) continue;
    auto d = recession_direction(*s);
    if (!d) continue;
    res.contains = true;
    res.piece = static_cast<int>(i);
    res.point = std::move(*x);
    res.direction = std::move(*d);
    return res;
  }
  return res;
}

/// Every piece index for which the Jelonek condition holds.
inline std::vector<int> jelonek_pieces(const SetValuedMap& F, const Vec& ybar) {
  std::vector<int> out;
  const auto& pieces = F.graph().pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    SetValuedMap single(F.n(), F.m(), std::vector<geom::Polyhedron>{pieces[i]});
    if (jelonek_contains(single, ybar).contains) out.push_back(static_cast<int>(i));
  }
  return out;
}

/// x => F(x) + f(x). Preimages are not sliced exactly; inverse queries go
/// through the iteration in lgsolve.
class SumMap {
 public:
  SumMap(SetValuedMap F, SampledMap f) : F_(std::move(F)), f_(std::move(f)) {
    require_dim(f_.n, F_.n(), "SumMap input");
    require_dim(f_.m, F_.m(), "SumMap output");
  }

  const SetValuedMap& base() const { return F_; }
  const SampledMap& perturbation() const { return f_; }
  int n() const { return F_.n(); }
  int m() const { return F_.m(); }

  geom::UnionRegion image_slice(const Vec& x) const {
    const geom::UnionRegion base = infreg::image_slice(F_, x);
    const Vec shift = f_(x);
    geom::UnionRegion out(F_.m());
    for (const auto& p : base.pieces()) {
      if (p.num_rows() == 0) {
        out.add(p);
        continue;
      }
      out.add(geom::Polyhedron(p.normals(), p.offsets() + p.normals() * shift));
    }
    return out;
  }

  /// dist(y, F(x) + f(x)) = dist(y - f(x), F(x)).
  double dist_to_image(const Vec& x, const Vec& y) const {
    return infreg::dist_to_image(F_, x, y - f_(x));
  }

  bool contains(const Vec& x, const Vec& y, double tol = kFeasTol) const {
    return F_.contains(x, y - f_(x), tol);
  }

 private:
  SetValuedMap F_;
  SampledMap f_;
};

}  // namespace infreg

#endif  // INFREG_SVMAP_HPP_
