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

// Exact minimisation of |u| over {(u, w) in K : |w| = 1} for a polyhedral
// cone K in R^{n+m}.
//
// The minimiser lies in the relative interior of some face F of K, and on
// span(F) it is a stationary point of |u|^2 subject to |w|^2 = 1. After the
// part of span(F) invisible to w is eliminated (it only serves to shorten
// u), the stationary points are eigenvectors of a small symmetric matrix.
// Every subset of extreme rays is tried as a candidate face; a candidate
// counts only if it actually lies in K, so spans that are not faces can
// only produce feasible (hence harmless) values.

#ifndef INFREG_GEOM_UNIT_SLICE_HPP_
#define INFREG_GEOM_UNIT_SLICE_HPP_

#include <optional>
#include <vector>

#include "infreg/core.hpp"
#include "infreg/geom/cone.hpp"

namespace infreg::geom {

struct UnitSliceMin {
  double value = kInf;  // |first|
  Vec first;
  Vec second;  // unit
};

/// Returns nullopt when K contains no point with w != 0.
inline std::optional<UnitSliceMin> min_first_norm_on_unit_second(const PolyCone& K, int n) {
  const int dim = K.dim();
  const int m = dim - n;
  if (n < 1 || m < 1) throw DimensionMismatch("min_first_norm_on_unit_second: bad split");
  const auto& rays = K.rays();
  const int p = static_cast<int>(rays.size());
  if (p > 16) throw InvalidArgument("face enumeration limited to 16 extreme rays");

  std::optional<UnitSliceMin> best;
  const unsigned long subsets = 1UL << p;
  for (unsigned long mask = 0; mask < subsets; ++mask) {
    std::vector<Vec> span = K.lineality();
    for (int i = 0; i < p; ++i) {
      if (mask & (1UL << i)) span.push_back(rays[i]);
    }
    const auto basis = detail::orthonormal_basis(span, dim);
    const auto k = static_cast<Eigen::Index>(basis.size());
    if (k == 0) continue;
    Mat Q(dim, k);
    for (Eigen::Index j = 0; j < k; ++j) Q.col(j) = basis[j];
    const Mat X = Q.topRows(n);
    const Mat Y = Q.bottomRows(m);

    Eigen::JacobiSVD<Mat> svd(Y, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > 1e-10) ++r;
    if (r == 0) continue;
    const Mat& V = svd.matrixV();
    const Mat Vr = V.leftCols(r);
    const Mat Vn = V.rightCols(k - r);
    const Mat XVr = X * Vr;

    // Best null-space correction b = G a for a given range coordinate a.
    Mat G = Mat::Zero(k - r, r);
    if (k - r > 0) {
      const Mat XVn = X * Vn;
      Eigen::CompleteOrthogonalDecomposition<Mat> cod(XVn);
      cod.setThreshold(1e-12);
      G = -cod.solve(XVr);
    }
    const Mat Sinv = sv.head(r).cwiseInverse().asDiagonal();
    const Mat Ws = Q * (Vr + Vn * G) * Sinv;  // w as a function of s, |w_tail| = |s|
    const Mat Xs = Ws.topRows(n);
    const Mat M = Xs.transpose() * Xs;

    Eigen::SelfAdjointEigenSolver<Mat> es(M);
    const Vec& lam = es.eigenvalues();
    const Mat& E = es.eigenvectors();
    Eigen::Index g0 = 0;
    while (g0 < r) {
      Eigen::Index g1 = g0 + 1;
      while (g1 < r && std::abs(lam(g1) - lam(g0)) <= 1e-9 * std::max(1.0, std::abs(lam(g0)))) {
        ++g1;
      }
      const Mat Eg = E.middleCols(g0, g1 - g0);
      const double value_here = std::sqrt(std::max(0.0, lam(g0)));
      g0 = g1;
      if (best && value_here >= best->value - 1e-15) continue;

      const Mat W = Ws * Eg;
      Vec c;
      if (K.halfspaces().rows() == 0) {
        c = Vec::Unit(W.cols(), 0);
      } else {
        const Mat HW = K.halfspaces() * W;
        const PolyCone sub = PolyCone::from_halfspaces(static_cast<int>(W.cols()), HW);
        if (sub.is_zero()) continue;
        c = sub.rays().empty() ? sub.lineality().front() : sub.rays().front();
      }
      c.normalize();
      const Vec w = W * c;
      if (!K.contains(w, 1e-9)) continue;
      const Vec tail = w.tail(m);
      const double tn = tail.norm();
      if (tn <= 1e-12) continue;
      UnitSliceMin cand;
      cand.first = w.head(n) / tn;
      cand.second = tail / tn;
      cand.value = cand.first.norm();
      if (!best || cand.value < best->value) best = std::move(cand);
    }
  }
  return best;
}

}  // namespace infreg::geom

#endif  // INFREG_GEOM_UNIT_SLICE_HPP_
