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

#ifndef INFREG_GEOM_REGION_HPP_
#define INFREG_GEOM_REGION_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "infreg/core.hpp"
#include "infreg/geom/cone.hpp"
#include "infreg/geom/polyhedron.hpp"

namespace infreg::geom {

/// Finite union of closed convex polyhedra of a common dimension.
class UnionRegion {
 public:
  explicit UnionRegion(int dim) : dim_(dim) {
    if (dim < 1) throw InvalidArgument("region dimension must be >= 1");
  }
  UnionRegion(int dim, std::vector<Polyhedron> pieces) : UnionRegion(dim) {
    for (auto& p : pieces) add(std::move(p));
  }

  void add(Polyhedron p) {
    require_dim(p.dim(), dim_, "UnionRegion piece");
    pieces_.push_back(std::move(p));
  }

  int dim() const { return dim_; }
  const std::vector<Polyhedron>& pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }

  bool contains(const Vec& z, double tol = kFeasTol) const {
    for (const auto& p : pieces_) {
      if (p.contains(z, tol)) return true;
    }
    return false;
  }

  /// Indices of pieces containing z.
  std::vector<int> pieces_containing(const Vec& z, double tol = kFeasTol) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (pieces_[i].contains(z, tol)) out.push_back(static_cast<int>(i));
    }
    return out;
  }

  bool is_empty() const {
    for (const auto& p : pieces_) {
      if (!p.is_empty()) return false;
    }
    return true;
  }

  /// Nearest point of the union and the index of the piece realising it
  /// (lowest index on ties); nullopt when every piece is empty.
  std::optional<std::pair<Vec, int>> nearest(const Vec& z) const {
    require_dim(z.size(), dim_, "UnionRegion::nearest");
    std::optional<std::pair<Vec, int>> best;
    double best_d = kInf;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      auto res = pieces_[i].try_project(z);
      if (!res) continue;
      const double d = (res->point - z).norm();
      if (d < best_d) {
        best_d = d;
        best = std::make_pair(std::move(res->point), static_cast<int>(i));
      }
    }
    return best;
  }

 private:
  int dim_;
  std::vector<Polyhedron> pieces_;
};

/// dist(z, R) with the convention inf(empty) = +inf.
inline double dist_union(const Vec& z, const UnionRegion& R) {
  require_dim(z.size(), R.dim(), "dist_union");
  double best = kInf;
  for (const auto& p : R.pieces()) best = std::min(best, distance(z, p));
  return best;
}

/// Restricts P to the affine slice where coordinates
/// [first, first + values.size()) are fixed; the result lives in the
/// remaining coordinates (in their original order). Returns nullopt when a
/// row that no longer involves free coordinates is violated.
inline std::optional<Polyhedron> fix_coordinates(const Polyhedron& P, int first,
                                                 const Vec& values) {
  const int k = static_cast<int>(values.size());
  const int free_dim = P.dim() - k;
  if (first < 0 || first + k > P.dim() || free_dim < 1) {
    throw DimensionMismatch("fix_coordinates: bad coordinate block");
  }
  std::vector<Eigen::Index> free_idx;
  for (int j = 0; j < P.dim(); ++j) {
    if (j < first || j >= first + k) free_idx.push_back(j);
  }
  const Mat& A = P.normals();
  const Vec& b = P.offsets();
  std::vector<Vec> rows;
  std::vector<double> rhs;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    Vec a(free_dim);
    for (int j = 0; j < free_dim; ++j) a(j) = A(i, free_idx[j]);
    const double shift = A.row(i).segment(first, k).dot(values);
    const double r = b(i) - shift;
    if (a.norm() <= kZeroTol) {
      if (r < -kFeasTol) return std::nullopt;
      continue;
    }
    rows.push_back(std::move(a));
    rhs.push_back(r);
  }
  if (rows.empty()) return Polyhedron(free_dim);
  Mat As(static_cast<Eigen::Index>(rows.size()), free_dim);
  Vec bs(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    As.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    bs(static_cast<Eigen::Index>(i)) = rhs[i];
  }
  return Polyhedron(As, bs);
}

/// Finite union of polyhedral cones; closed under positive scaling and
/// always containing 0 unless it has no pieces at all (the empty set, used
/// for normal cones at points outside a set).
class ConeUnion {
 public:
  explicit ConeUnion(int dim) : dim_(dim) {}
  ConeUnion(int dim, std::vector<PolyCone> pieces) : dim_(dim) {
    for (auto& p : pieces) add(std::move(p));
  }

  /// Adds a piece unless an equal one is already present.
  void add(PolyCone c) {
    require_dim(c.dim(), dim_, "ConeUnion piece");
    for (const auto& p : pieces_) {
      if (p.approx_equal(c)) return;
    }
    pieces_.push_back(std::move(c));
  }

  int dim() const { return dim_; }
  const std::vector<PolyCone>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  std::size_t size() const { return pieces_.size(); }

  bool contains(const Vec& z, double tol = kExactAngleTol) const {
    for (const auto& p : pieces_) {
      if (p.contains(z, tol)) return true;
    }
    return false;
  }

  /// Angular distance from direction u to the union.
  double angular_distance(const Vec& u) const {
    double best = kInf;
    for (const auto& p : pieces_) best = std::min(best, p.angular_distance(u));
    return best;
  }

  /// Same set, with pieces contained in another piece removed. Keeps the
  /// first of two equal pieces.
  ConeUnion reduced(double tol = kExactAngleTol) const {
    ConeUnion out(dim_);
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < pieces_.size() && !dominated; ++j) {
        if (i == j) continue;
        if (!pieces_[j].contains_cone(pieces_[i], tol)) continue;
        // Equal pieces: keep the earlier one.
        if (pieces_[i].contains_cone(pieces_[j], tol) && i < j) continue;
        dominated = true;
      }
      if (!dominated) out.pieces_.push_back(pieces_[i]);
    }
    return out;
  }

  /// Every piece of `other` lies inside some piece of this union.
  bool covers_piecewise(const ConeUnion& other, double tol = kExactAngleTol) const {
    for (const auto& q : other.pieces_) {
      bool found = false;
      for (const auto& p : pieces_) {
        if (p.contains_cone(q, tol)) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }

  /// Equality test on reduced forms via piecewise containment both ways.
  bool approx_equal(const ConeUnion& other, double tol = kExactAngleTol) const {
    if (other.dim_ != dim_) return false;
    if (empty() != other.empty()) return false;
    const ConeUnion a = reduced(tol);
    const ConeUnion b = other.reduced(tol);
    return a.covers_piecewise(b, tol) && b.covers_piecewise(a, tol);
  }

  /// Hausdorff distance between the unit-sphere sections, evaluated on the
  /// generators (extreme rays and +/- lineality directions) of both sides.
  double ray_hausdorff(const ConeUnion& other) const {
    double h = 0.0;
    for (const auto& p : pieces_) {
      for (const auto& g : p.generator_list()) h = std::max(h, other.angular_distance(g));
    }
    for (const auto& p : other.pieces_) {
      for (const auto& g : p.generator_list()) h = std::max(h, angular_distance(g));
    }
    return h;
  }

 private:
  int dim_;
  std::vector<PolyCone> pieces_;
};

/// {u : (u, w) in C} for a cone C over R^{n+k}, w fixed. The result is a
/// polyhedron in R^n, or nullopt when no u is admissible because a row not
/// involving u is violated.
inline std::optional<Polyhedron> slice_cone(const PolyCone& C, int n, const Vec& w) {
  require_dim(C.dim(), n + static_cast<int>(w.size()), "slice_cone");
  if (C.halfspaces().rows() == 0) return Polyhedron(n);
  const Polyhedron P(C.halfspaces(), Vec::Zero(C.halfspaces().rows()));
  return fix_coordinates(P, n, w);
}

/// Union of the slices of every piece; empty pieces dropped.
inline UnionRegion slice_cone_union(const ConeUnion& U, int n, const Vec& w) {
  UnionRegion out(n);
  for (const auto& c : U.pieces()) {
    auto s = slice_cone(c, n, w);
    if (s && !s->is_empty()) out.add(std::move(*s));
  }
  return out;
}

/// Minimum-norm x* with (x*, -y*) in C. Returns nullopt (Infeasible) when
/// the slice is empty; the minimiser is unique by strict convexity.
inline std::optional<Vec> min_norm_in_slice(const PolyCone& C, int n, const Vec& ystar) {
  require_dim(C.dim(), n + static_cast<int>(ystar.size()), "min_norm_in_slice");
  if (std::abs(ystar.norm() - 1.0) > 1e-9) {
    throw InvalidArgument("min_norm_in_slice expects a unit ystar");
  }
  auto s = slice_cone(C, n, -ystar);
  if (!s) return std::nullopt;
  auto res = s->try_project(Vec::Zero(n));
  if (!res) return std::nullopt;
  return std::move(res->point);
}

}  // namespace infreg::geom

#endif  // INFREG_GEOM_REGION_HPP_
