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

#ifndef INFREG_GEOM_POLYHEDRON_HPP_
#define INFREG_GEOM_POLYHEDRON_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "infreg/core.hpp"
#include "infreg/geom/qp.hpp"

namespace infreg::geom {

/// One inequality <a, z> <= b as written by a user, before normalisation.
struct Halfspace {
  Vec normal;
  double offset = 0.0;
};

/// Convex polyhedron {z : <a_i, z> <= b_i} in H-representation.
///
/// Rows are stored with unit normals; zero normals are rejected on
/// construction. A polyhedron may be empty; emptiness is only ever decided
/// by the feasibility test, never assumed.
class Polyhedron {
 public:
  /// The whole space R^dim.
  explicit Polyhedron(int dim) : dim_(dim), A_(0, dim), b_(0) {
    if (dim < 1) throw InvalidArgument("polyhedron dimension must be >= 1");
  }

  Polyhedron(const Mat& A, const Vec& b) : dim_(static_cast<int>(A.cols())) {
    if (dim_ < 1) throw InvalidArgument("polyhedron dimension must be >= 1");
    require_dim(b.size(), A.rows(), "Polyhedron offsets");
    A_.resize(A.rows(), A.cols());
    b_.resize(b.size());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      const double nrm = A.row(i).norm();
      if (!std::isfinite(nrm) || !std::isfinite(b(i))) {
        throw InvalidArgument("non-finite entry in row " + std::to_string(i));
      }
      if (nrm <= kZeroTol) {
        throw InvalidArgument("zero normal vector in row " + std::to_string(i));
      }
      A_.row(i) = A.row(i) / nrm;
      b_(i) = b(i) / nrm;
    }
  }

  /// Builds from inequality rows plus equality rows (each equality becomes a
  /// pair of opposite inequalities).
  static Polyhedron from_rows(int dim, const std::vector<Halfspace>& le,
                              const std::vector<Halfspace>& eq = {}) {
    const auto rows = static_cast<Eigen::Index>(le.size() + 2 * eq.size());
    Mat A(rows, dim);
    Vec b(rows);
    Eigen::Index k = 0;
    for (const auto& h : le) {
      require_dim(h.normal.size(), dim, "Polyhedron row");
      A.row(k) = h.normal.transpose();
      b(k++) = h.offset;
    }
    for (const auto& h : eq) {
      require_dim(h.normal.size(), dim, "Polyhedron equality row");
      A.row(k) = h.normal.transpose();
      b(k++) = h.offset;
      A.row(k) = -h.normal.transpose();
      b(k++) = -h.offset;
    }
    if (rows == 0) return Polyhedron(dim);
    return Polyhedron(A, b);
  }

  /// Axis-aligned box [lo, hi].
  static Polyhedron box(const Vec& lo, const Vec& hi) {
    require_dim(hi.size(), lo.size(), "box");
    const auto d = lo.size();
    Mat A = Mat::Zero(2 * d, d);
    Vec b(2 * d);
    for (Eigen::Index i = 0; i < d; ++i) {
      A(2 * i, i) = 1.0;
      b(2 * i) = hi(i);
      A(2 * i + 1, i) = -1.0;
      b(2 * i + 1) = -lo(i);
    }
    return Polyhedron(A, b);
  }

  int dim() const { return dim_; }
  Eigen::Index num_rows() const { return A_.rows(); }
  const Mat& normals() const { return A_; }
  const Vec& offsets() const { return b_; }

  double residual(Eigen::Index row, const Vec& z) const {
    return A_.row(row).dot(z) - b_(row);
  }

  double max_violation(const Vec& z) const {
    require_dim(z.size(), dim_, "Polyhedron::max_violation");
    if (A_.rows() == 0) return 0.0;
    return std::max(0.0, (A_ * z - b_).maxCoeff());
  }

  bool contains(const Vec& z, double tol = kFeasTol) const {
    return max_violation(z) <= tol;
  }

  /// Rows with |<a_i, z> - b_i| <= tol.
  std::vector<int> active_set(const Vec& z, double tol = kFeasTol) const {
    std::vector<int> out;
    for (Eigen::Index i = 0; i < A_.rows(); ++i) {
      if (std::abs(residual(i, z)) <= tol) out.push_back(static_cast<int>(i));
    }
    return out;
  }

  std::optional<ProjectionResult> try_project(const Vec& z) const {
    require_dim(z.size(), dim_, "Polyhedron::project");
    return project_onto_halfspaces(A_, b_, z);
  }

  bool is_empty() const { return !try_project(Vec::Zero(dim_)).has_value(); }

  Polyhedron intersect(const Polyhedron& other) const {
    require_dim(other.dim(), dim_, "Polyhedron::intersect");
    if (A_.rows() + other.A_.rows() == 0) return Polyhedron(dim_);
    Mat A(A_.rows() + other.A_.rows(), dim_);
    Vec b(A.rows());
    A << A_, other.A_;
    b << b_, other.b_;
    return Polyhedron(A, b);
  }

  /// Adds rows <a, z> <= b; rows are validated like the constructor's.
  Polyhedron with_rows(const Mat& A, const Vec& b) const {
    require_dim(A.cols(), dim_, "Polyhedron::with_rows");
    return intersect(Polyhedron(A, b));
  }

  /// The recession cone {d : A d <= 0} as a polyhedron with zero offsets.
  Polyhedron recession() const {
    if (A_.rows() == 0) return Polyhedron(dim_);
    return Polyhedron(A_, Vec::Zero(A_.rows()));
  }

 private:
  int dim_;
  Mat A_;
  Vec b_;
};

/// Euclidean projection of z onto P.
inline Vec project(const Vec& z, const Polyhedron& P) {
  auto res = P.try_project(z);
  if (!res) throw EmptyPolyhedron("projection onto an infeasible polyhedron");
  return std::move(res->point);
}

/// Distance from z to P, +inf when P is empty.
inline double distance(const Vec& z, const Polyhedron& P) {
  auto res = P.try_project(z);
  if (!res) return kInf;
  return (res->point - z).norm();
}

/// Any point of P, or nullopt when P is empty.
inline std::optional<Vec> feasible_point(const Polyhedron& P) {
  auto res = P.try_project(Vec::Zero(P.dim()));
  if (!res) return std::nullopt;
  return std::move(res->point);
}

}  // namespace infreg::geom

#endif  // INFREG_GEOM_POLYHEDRON_HPP_
