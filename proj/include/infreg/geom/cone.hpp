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

// Polyhedral cones carried in both representations.
//
// A PolyCone is built either from halfspaces {z : H z <= 0} or from
// generators cone(rays) + span(lineality). Whichever side is given, the
// other is computed eagerly with the double description method and both
// are stored in canonical form:
//
//   * lineality: an orthonormal basis of the lineality space L;
//   * rays: unit extreme rays of the pointed part, orthogonal to L;
//   * halfspaces: unit rows, irredundant (extreme rays of the polar cone,
//     plus +/- the polar's lineality basis for implicit equalities).
//
// The two representations are cross-validated on construction.

#ifndef INFREG_GEOM_CONE_HPP_
#define INFREG_GEOM_CONE_HPP_

#include <algorithm>
#include <vector>

#include "infreg/core.hpp"
#include "infreg/geom/polyhedron.hpp"

namespace infreg::geom {

struct Generators {
  std::vector<Vec> rays;
  std::vector<Vec> lineality;
};

namespace detail {

/// Orthonormal basis of span(vs) in R^dim.
inline std::vector<Vec> orthonormal_basis(const std::vector<Vec>& vs, int dim) {
  if (vs.empty()) return {};
  Mat M(dim, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) M.col(static_cast<Eigen::Index>(j)) = vs[j];
  Eigen::ColPivHouseholderQR<Mat> qr(M);
  qr.setThreshold(1e-10);
  const auto rank = qr.rank();
  const Mat Q = qr.householderQ();
  std::vector<Vec> out;
  for (Eigen::Index j = 0; j < rank; ++j) out.emplace_back(Q.col(j));
  return out;
}

inline Vec remove_components(Vec v, const std::vector<Vec>& orthonormal) {
  for (const auto& l : orthonormal) v -= l.dot(v) * l;
  return v;
}

inline int matrix_rank(const std::vector<Vec>& rows, int dim) {
  if (rows.empty()) return 0;
  Mat M(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  Eigen::FullPivLU<Mat> lu(M);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

inline bool same_direction(const Vec& a, const Vec& b, double tol) {
  return (a - b).norm() <= tol;
}

/// Double description (Motzkin) for {z : A z <= 0}, with the lineality
/// space eliminated one row at a time as in cdd. Adjacency of rays uses the
/// combinatorial test backed by the algebraic rank condition.
inline Generators double_description(const Mat& A) {
  const int dim = static_cast<int>(A.cols());
  const Eigen::Index nrows = A.rows();
  constexpr double kSignTol = 1e-10;

  std::vector<Vec> lin;
  for (int k = 0; k < dim; ++k) lin.emplace_back(Vec::Unit(dim, k));

  struct Ray {
    Vec v;
    std::vector<char> tight;
  };
  std::vector<Ray> rays;
  std::vector<Vec> rows;  // normalised processed rows, by index
  rows.reserve(static_cast<std::size_t>(nrows));

  for (Eigen::Index i = 0; i < nrows; ++i) {
    Vec a = A.row(i).transpose();
    const double an = a.norm();
    rows.push_back(an > kZeroTol ? Vec(a / an) : Vec(Vec::Zero(dim)));
    if (an <= kZeroTol) {
      for (auto& r : rays) r.tight.push_back(1);
      continue;
    }
    a /= an;

    int best = -1;
    double best_val = kSignTol;
    for (std::size_t k = 0; k < lin.size(); ++k) {
      const double v = std::abs(a.dot(lin[k]));
      if (v > best_val) {
        best_val = v;
        best = static_cast<int>(k);
      }
    }

    if (best >= 0) {
      Vec l0 = lin[best];
      double al0 = a.dot(l0);
      if (al0 > 0) {
        l0 = -l0;
        al0 = -al0;
      }
      for (std::size_t k = 0; k < lin.size(); ++k) {
        if (static_cast<int>(k) == best) continue;
        lin[k] -= (a.dot(lin[k]) / al0) * l0;
      }
      for (auto& r : rays) {
        r.v -= (a.dot(r.v) / al0) * l0;
        r.v.normalize();
        r.tight.push_back(1);
      }
      lin.erase(lin.begin() + best);
      Ray fresh{l0.normalized(), std::vector<char>(static_cast<std::size_t>(i) + 1, 1)};
      fresh.tight.back() = 0;
      rays.push_back(std::move(fresh));
      continue;
    }

    std::vector<int> pos, neg, zero;
    std::vector<double> val(rays.size());
    for (std::size_t k = 0; k < rays.size(); ++k) {
      val[k] = a.dot(rays[k].v);
      if (val[k] > kSignTol) {
        pos.push_back(static_cast<int>(k));
      } else if (val[k] < -kSignTol) {
        neg.push_back(static_cast<int>(k));
      } else {
        zero.push_back(static_cast<int>(k));
      }
    }
    if (pos.empty()) {
      for (std::size_t k = 0; k < rays.size(); ++k) {
        rays[k].tight.push_back(std::abs(val[k]) <= kSignTol ? 1 : 0);
      }
      continue;
    }

    const int pointed_dim = dim - static_cast<int>(lin.size());
    std::vector<Ray> next;
    for (int k : neg) {
      Ray r = rays[k];
      r.tight.push_back(0);
      next.push_back(std::move(r));
    }
    for (int k : zero) {
      Ray r = rays[k];
      r.tight.push_back(1);
      next.push_back(std::move(r));
    }
    for (int p : pos) {
      for (int q : neg) {
        const auto& tp = rays[p].tight;
        const auto& tq = rays[q].tight;
        std::vector<int> common;
        for (std::size_t j = 0; j < tp.size(); ++j) {
          if (tp[j] && tq[j]) common.push_back(static_cast<int>(j));
        }
        bool adjacent = true;
        for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
          if (static_cast<int>(k) == p || static_cast<int>(k) == q) continue;
          bool covers = true;
          for (int j : common) {
            if (!rays[k].tight[j]) {
              covers = false;
              break;
            }
          }
          if (covers) adjacent = false;
        }
        if (!adjacent) continue;
        std::vector<Vec> common_rows;
        for (int j : common) common_rows.push_back(rows[j]);
        if (matrix_rank(common_rows, dim) < pointed_dim - 2) continue;

        Vec v = val[p] * rays[q].v - val[q] * rays[p].v;
        const double vn = v.norm();
        if (vn <= kZeroTol) continue;
        Ray r{v / vn, {}};
        r.tight.resize(tp.size() + 1, 0);
        for (int j : common) r.tight[j] = 1;
        r.tight.back() = 1;
        next.push_back(std::move(r));
      }
    }
    rays = std::move(next);
  }

  Generators out;
  out.lineality = orthonormal_basis(lin, dim);
  for (const auto& r : rays) {
    Vec v = remove_components(r.v, out.lineality);
    const double vn = v.norm();
    if (vn <= 1e-10) continue;
    v /= vn;
    bool dup = false;
    for (const auto& w : out.rays) {
      if (same_direction(v, w, 1e-9)) {
        dup = true;
        break;
      }
    }
    if (!dup) out.rays.push_back(std::move(v));
  }
  std::sort(out.rays.begin(), out.rays.end(), [](const Vec& x, const Vec& y) {
    return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(),
                                        y.data() + y.size());
  });
  return out;
}

inline Mat stack_rows(const std::vector<Vec>& vs, int dim) {
  Mat M(static_cast<Eigen::Index>(vs.size()), dim);
  for (std::size_t i = 0; i < vs.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = vs[i].transpose();
  return M;
}

}  // namespace detail

/// Closed convex polyhedral cone.
class PolyCone {
 public:
  /// {z : H z <= 0}. An empty H gives the whole space.
  static PolyCone from_halfspaces(int dim, const Mat& H) {
    if (dim < 1) throw InvalidArgument("cone dimension must be >= 1");
    require_dim(H.cols(), dim, "PolyCone::from_halfspaces");
    PolyCone c(dim);
    c.gens_ = detail::double_description(H);
    c.rebuild_halfspaces();
    c.cross_validate(H);
    return c;
  }

  /// cone(rays) + span(lineality).
  static PolyCone from_generators(int dim, const std::vector<Vec>& rays,
                                  const std::vector<Vec>& lineality = {}) {
    if (dim < 1) throw InvalidArgument("cone dimension must be >= 1");
    std::vector<Vec> polar_rows;
    for (const auto& r : rays) {
      require_dim(r.size(), dim, "PolyCone generator");
      if (r.norm() > kZeroTol) polar_rows.push_back(r);
    }
    for (const auto& l : lineality) {
      require_dim(l.size(), dim, "PolyCone lineality generator");
      if (l.norm() > kZeroTol) {
        polar_rows.push_back(l);
        polar_rows.push_back(-l);
      }
    }
    // H-rep of cone(G) = generators of its polar {y : G y <= 0}.
    const Generators polar = detail::double_description(detail::stack_rows(polar_rows, dim));
    std::vector<Vec> h = polar.rays;
    for (const auto& l : polar.lineality) {
      h.push_back(l);
      h.push_back(-l);
    }
    PolyCone c = from_halfspaces(dim, detail::stack_rows(h, dim));
    for (const auto& g : polar_rows) {
      if (!c.contains(g, 1e-8)) {
        throw NumericalFailure("generator hull and halfspace form disagree");
      }
    }
    return c;
  }

  static PolyCone whole(int dim) { return from_halfspaces(dim, Mat(0, dim)); }

  static PolyCone zero(int dim) {
    Mat H(2 * dim, dim);
    H << Mat::Identity(dim, dim), -Mat::Identity(dim, dim);
    return from_halfspaces(dim, H);
  }

  int dim() const { return dim_; }
  const Mat& halfspaces() const { return H_; }
  const std::vector<Vec>& rays() const { return gens_.rays; }
  const std::vector<Vec>& lineality() const { return gens_.lineality; }

  /// Rays plus both signs of every lineality vector.
  std::vector<Vec> generator_list() const {
    std::vector<Vec> out = gens_.rays;
    for (const auto& l : gens_.lineality) {
      out.push_back(l);
      out.push_back(-l);
    }
    return out;
  }

  bool is_zero() const { return gens_.rays.empty() && gens_.lineality.empty(); }
  bool is_whole() const { return static_cast<int>(gens_.lineality.size()) == dim_; }

  /// Membership with a scale-free tolerance: every unit row satisfies
  /// <h, z> <= tol * |z|.
  bool contains(const Vec& z, double tol = kExactAngleTol) const {
    require_dim(z.size(), dim_, "PolyCone::contains");
    const double zn = z.norm();
    if (zn == 0.0) return true;
    if (H_.rows() == 0) return true;
    return (H_ * z).maxCoeff() <= tol * zn;
  }

  bool contains_cone(const PolyCone& other, double tol = kExactAngleTol) const {
    require_dim(other.dim(), dim_, "PolyCone::contains_cone");
    for (const auto& g : other.generator_list()) {
      if (!contains(g, tol)) return false;
    }
    return true;
  }

  bool approx_equal(const PolyCone& other, double tol = kExactAngleTol) const {
    return contains_cone(other, tol) && other.contains_cone(*this, tol);
  }

  PolyCone intersect(const PolyCone& other) const {
    require_dim(other.dim(), dim_, "PolyCone::intersect");
    Mat H(H_.rows() + other.H_.rows(), dim_);
    H << H_, other.H_;
    return from_halfspaces(dim_, H);
  }

  /// {w : <w, z> <= 0 for all z in this cone}.
  PolyCone polar() const {
    std::vector<Vec> rows = gens_.rays;
    for (const auto& l : gens_.lineality) {
      rows.push_back(l);
      rows.push_back(-l);
    }
    return from_halfspaces(dim_, detail::stack_rows(rows, dim_));
  }

  Polyhedron as_polyhedron() const {
    if (H_.rows() == 0) return Polyhedron(dim_);
    return Polyhedron(H_, Vec::Zero(H_.rows()));
  }

  /// Euclidean projection onto the cone.
  Vec project(const Vec& z) const {
    require_dim(z.size(), dim_, "PolyCone::project");
    if (H_.rows() == 0) return z;
    return geom::project(z, as_polyhedron());
  }

  /// Distance from the unit vector u/|u| to the cone; equals sin of the
  /// angle to the cone when that angle is below pi/2 and 1 beyond.
  double angular_distance(const Vec& u) const {
    const double un = u.norm();
    if (un == 0.0) return 0.0;
    const Vec v = u / un;
    return (v - project(v)).norm();
  }

 private:
  explicit PolyCone(int dim) : dim_(dim), H_(0, dim) {}

  void rebuild_halfspaces() {
    std::vector<Vec> rows = gens_.rays;
    for (const auto& l : gens_.lineality) {
      rows.push_back(l);
      rows.push_back(-l);
    }
    const Generators polar = detail::double_description(detail::stack_rows(rows, dim_));
    std::vector<Vec> h = polar.rays;
    for (const auto& l : polar.lineality) {
      h.push_back(l);
      h.push_back(-l);
    }
    H_ = detail::stack_rows(h, dim_);
  }

  void cross_validate(const Mat& original) const {
    for (const auto& g : generator_list()) {
      for (Eigen::Index i = 0; i < original.rows(); ++i) {
        const double n = original.row(i).norm();
        if (n <= kZeroTol) continue;
        if (original.row(i).dot(g) / n > 1e-8) {
          throw NumericalFailure("double description produced an infeasible generator");
        }
      }
      if (H_.rows() > 0 && (H_ * g).maxCoeff() > 1e-8) {
        throw NumericalFailure("canonical halfspaces exclude a generator");
      }
    }
  }

  int dim_;
  Mat H_;
  Generators gens_;
};

/// Polar cone; free-function spelling of PolyCone::polar.
inline PolyCone polar(const PolyCone& c) { return c.polar(); }

}  // namespace infreg::geom

#endif  // INFREG_GEOM_CONE_HPP_
