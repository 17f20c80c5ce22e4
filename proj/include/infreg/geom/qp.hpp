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

// Euclidean projection onto {x : A x <= b} by the dual active-set method of
// Goldfarb and Idnani, specialised to the identity Hessian.
//
// The problem solved is
//
//   min 0.5 * |x - z|^2   s.t.   a_i^T x <= b_i,  i = 0..rows-1
//
// Starting from the unconstrained minimiser x = z, the most violated
// constraint is added to the working set; constraints whose dual multiplier
// would turn negative are dropped on the way. Because the dimensions handled
// here are tiny (<= 7), the QR factorisation of the working-set normals is
// recomputed from scratch at every step instead of being updated with
// Givens rotations.
//
// Ties are broken lexicographically: among equally violated constraints the
// lowest row index enters, among equal dual ratios the lowest working-set
// position leaves. The result is therefore a deterministic function of the
// input.

#ifndef INFREG_GEOM_QP_HPP_
#define INFREG_GEOM_QP_HPP_

#include <algorithm>
#include <optional>
#include <vector>

#include "infreg/core.hpp"

namespace infreg::geom {

struct ProjectionResult {
  Vec point;
  std::vector<int> active;  // working set at termination
  Vec multipliers;          // aligned with `active`, all >= 0
};

namespace detail {

inline double violation_tolerance(const Vec& x, double offset) {
  const double mag = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  return rounding_scale(std::max(mag, std::abs(offset)));
}

}  // namespace detail

/// Returns std::nullopt when the constraint system is infeasible. Rows of `A`
/// are expected to have unit norm.
inline std::optional<ProjectionResult> project_onto_halfspaces(const Mat& A,
                                                               const Vec& b,
                                                               const Vec& z) {
  const Eigen::Index dim = z.size();
  const Eigen::Index rows = A.rows();
  require_dim(A.cols(), dim, "project_onto_halfspaces");
  require_dim(b.size(), rows, "project_onto_halfspaces offsets");

  Vec x = z;
  std::vector<int> active;
  std::vector<double> u;
  std::vector<char> in_active(static_cast<std::size_t>(rows), 0);
  std::vector<char> ignored(static_cast<std::size_t>(rows), 0);

  const long max_iterations = 64L * (rows + dim) + 256;
  long iterations = 0;

  auto slack = [&](Eigen::Index i) { return b(i) - A.row(i).dot(x); };

  while (true) {
    int p = -1;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (in_active[i] || ignored[i]) continue;
      const double s = slack(i);
      if (s < -detail::violation_tolerance(x, b(i)) && s < worst) {
        worst = s;
        p = static_cast<int>(i);
      }
    }
    if (p < 0) break;

    std::vector<double> u_plus = u;
    u_plus.push_back(0.0);
    const Vec n_p = -A.row(p).transpose();

    while (true) {
      if (++iterations > max_iterations) {
        throw NumericalFailure("active-set projection did not terminate");
      }
      const auto q = static_cast<Eigen::Index>(active.size());
      Vec step(dim);
      Vec r(q);
      if (q == 0) {
        step = n_p;
      } else {
        Mat N(dim, q);
        for (Eigen::Index j = 0; j < q; ++j) N.col(j) = -A.row(active[j]).transpose();
        Eigen::HouseholderQR<Mat> qr(N);
        const Mat Q = qr.householderQ();
        const Vec d = Q.transpose() * n_p;
        step = Q.rightCols(dim - q) * d.tail(dim - q);
        r = qr.matrixQR().topLeftCorner(q, q).triangularView<Eigen::Upper>().solve(
            d.head(q));
      }

      double t_dual = kInf;
      int leaving = -1;
      for (Eigen::Index j = 0; j < q; ++j) {
        if (r(j) > kZeroTol) {
          const double t = u_plus[j] / r(j);
          if (t < t_dual) {
            t_dual = t;
            leaving = static_cast<int>(j);
          }
        }
      }

      const double s_p = slack(p);
      double t_primal = kInf;
      if (step.norm() > 1e-10) t_primal = -s_p / step.dot(n_p);

      const double t = std::min(t_dual, t_primal);
      if (!std::isfinite(t)) {
        // n_p lies in the span of the working set with no droppable row. A
        // violation at rounding level comes from a duplicated or opposite
        // row and is not evidence of infeasibility.
        if (-s_p <= kFeasTol) {
          ignored[p] = 1;
          u_plus.pop_back();
          u = u_plus;
          break;
        }
        return std::nullopt;
      }

      for (Eigen::Index j = 0; j < q; ++j) u_plus[j] -= t * r(j);
      u_plus.back() += t;

      if (std::isfinite(t_primal)) x += t * step;

      if (std::isfinite(t_primal) && t_primal <= t_dual) {
        active.push_back(p);
        in_active[p] = 1;
        u = u_plus;
        break;
      }
      in_active[active[leaving]] = 0;
      active.erase(active.begin() + leaving);
      u_plus.erase(u_plus.begin() + leaving);
    }
  }

  ProjectionResult out;
  out.point = std::move(x);
  out.active = std::move(active);
  out.multipliers.resize(static_cast<Eigen::Index>(u.size()));
  for (std::size_t j = 0; j < u.size(); ++j) {
    out.multipliers(static_cast<Eigen::Index>(j)) = std::max(0.0, u[j]);
  }
  return out;
}

}  // namespace infreg::geom

#endif  // INFREG_GEOM_QP_HPP_
