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

// Shared vocabulary for the whole library: vector types, tolerances and the
// error hierarchy. Every other header includes this one.

#ifndef INFREG_CORE_HPP_
#define INFREG_CORE_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace infreg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Absolute tolerance on constraint residuals. Membership, emptiness and
/// "distance is zero" decisions all use this single constant.
inline constexpr double kFeasTol = 1e-9;

/// Angular tolerance for comparing cones computed along exact paths.
inline constexpr double kExactAngleTol = 1e-9;

/// Angular tolerance for comparing sampled cones against exact ones.
inline constexpr double kSampledAngleTol = 1e-3;

/// Ratios dist(x, F^-1(y)) / dist(y, F(x)) above this value are reported as
/// a failure of metric regularity (reg = +inf).
inline constexpr double kRatioCap = 1e9;

// Internal zero threshold for normalized linear algebra (pivots, row norms).
inline constexpr double kZeroTol = 1e-12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define INFREG_DEFINE_ERROR(Name)                 \
  class Name : public Error {                     \
   public:                                        \
    explicit Name(const std::string& what)        \
        : Error(std::string(#Name ": ") + what) {} \
  }

INFREG_DEFINE_ERROR(DimensionMismatch);
INFREG_DEFINE_ERROR(InvalidArgument);
INFREG_DEFINE_ERROR(EmptyPolyhedron);
INFREG_DEFINE_ERROR(NumericalFailure);
INFREG_DEFINE_ERROR(NotInJelonekSet);
INFREG_DEFINE_ERROR(NotStabilized);
INFREG_DEFINE_ERROR(NoAdmissibleSamples);
INFREG_DEFINE_ERROR(RgPlusInfinite);
INFREG_DEFINE_ERROR(InsufficientEscape);
INFREG_DEFINE_ERROR(InvalidPerturbation);
INFREG_DEFINE_ERROR(EmptyPreimage);
INFREG_DEFINE_ERROR(ContractionViolated);

#undef INFREG_DEFINE_ERROR

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " +
                            std::to_string(want) + ", got " +
                            std::to_string(got));
  }
}

/// Scale used to decide whether a residual is rounding noise: 64 ulps of the
/// largest magnitude involved.
inline double rounding_scale(double magnitude) {
  return 64.0 * kEps * std::max(1.0, std::abs(magnitude));
}

inline Vec concat(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace infreg

#endif  // INFREG_CORE_HPP_
