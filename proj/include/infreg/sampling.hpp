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

#ifndef INFREG_SAMPLING_HPP_
#define INFREG_SAMPLING_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "infreg/core.hpp"

namespace infreg {

/// Uniform direction on the unit sphere of R^dim.
template <class Rng>
Vec random_unit(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(dim);
  do {
    for (int i = 0; i < dim; ++i) v(i) = g(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

/// Radical inverse of `index` in `base`.
inline double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base, f = inv, out = 0.0;
  while (index > 0) {
    out += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return out;
}

/// Point `index` of the Halton sequence in [0, 1)^dim (dim <= 8).
inline Vec halton(std::uint64_t index, int dim) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  if (dim < 1 || dim > 8) throw InvalidArgument("halton supports dimensions 1..8");
  Vec p(dim);
  for (int i = 0; i < dim; ++i) p(i) = radical_inverse(index + 1, kPrimes[i]);
  return p;
}

/// Halton point mapped into the Euclidean ball of radius `radius`
/// (direction from a Gaussian-free inverse map, radius by dim-th root).
inline Vec halton_in_ball(std::uint64_t index, int dim, double radius) {
  const Vec u = halton(index, std::min(dim + 1, 8));
  Vec dir(dim);
  if (dim == 1) {
    dir(0) = u(1) < 0.5 ? -1.0 : 1.0;
  } else {
    // Box-Muller on pairs of coordinates gives an isotropic direction.
    Vec g(dim);
    for (int i = 0; i < dim; ++i) {
      const double a = std::max(u((i % (u.size() - 1)) + 1), 1e-12);
      const double b = radical_inverse(index + 1, 23 + 2 * i);
      g(i) = std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * std::numbers::pi * b);
    }
    if (g.norm() < 1e-12) g = Vec::Unit(dim, 0);
    dir = g.normalized();
  }
  return radius * std::pow(u(0), 1.0 / dim) * dir;
}

/// Deterministic, roughly uniform directions on the unit sphere: +/- axes
/// first, then a Fibonacci/Halton fill.
inline std::vector<Vec> spherical_design(int dim, int count) {
  std::vector<Vec> out;
  for (int i = 0; i < dim && static_cast<int>(out.size()) < count; ++i) {
    out.push_back(Vec::Unit(dim, i));
    if (static_cast<int>(out.size()) < count) out.push_back(-Vec::Unit(dim, i));
  }
  std::uint64_t k = 0;
  while (static_cast<int>(out.size()) < count) {
    Vec v(dim);
    if (dim == 2) {
      const double th = 2.0 * std::numbers::pi * radical_inverse(++k, 2);
      v << std::cos(th), std::sin(th);
    } else {
      v = halton_in_ball(++k, dim, 1.0);
      if (v.norm() < 1e-9) continue;
      v.normalize();
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace infreg

#endif  // INFREG_SAMPLING_HPP_
