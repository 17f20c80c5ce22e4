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

// JSON conversions shared by the scenario reader and the report writer.

#ifndef INFREG_IO_CODEC_HPP_
#define INFREG_IO_CODEC_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "infreg/core.hpp"
#include "infreg/geom/region.hpp"
#include "infreg/perturb.hpp"
#include "json.hpp"

namespace infreg::io {

using Json = nlohmann::ordered_json;

/// Non-finite doubles become the strings "inf", "-inf" and "nan".
inline Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

inline Json to_json(const std::vector<Vec>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

inline Json to_json(const geom::PolyCone& c) {
  return Json{{"rays", to_json(c.rays())}, {"lineality", to_json(c.lineality())}};
}

inline Json to_json(const geom::ConeUnion& u) {
  Json a = Json::array();
  for (const auto& c : u.pieces()) a.push_back(to_json(c));
  return a;
}

/// Rows a . z <= b as [a..., b].
inline Json to_json(const geom::Polyhedron& p) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < p.num_rows(); ++i) {
    Vec r(p.dim() + 1);
    r << p.normals().row(i).transpose(), p.offsets()(i);
    rows.push_back(to_json(r));
  }
  return Json{{"le", rows}};
}

inline Json to_json(const geom::UnionRegion& u) {
  Json a = Json::array();
  for (const auto& p : u.pieces()) a.push_back(to_json(p));
  return a;
}

inline Json to_json(const PerturbationSpec& s) {
  Json bumps = Json::array();
  for (const auto& b : s.bumps) {
    bumps.push_back(Json{{"center", to_json(b.center)},
                         {"partner", to_json(b.partner)},
                         {"xstar", to_json(b.xstar)},
                         {"ystar", to_json(b.ystar)},
                         {"direction", to_json(b.direction)},
                         {"radius", b.radius},
                         {"scale", b.scale},
                         {"exponent", b.exponent}});
  }
  return Json{{"n", s.n}, {"m", s.m}, {"K", s.K}, {"rgplus", number(s.rgplus)},
              {"ybar", to_json(s.ybar)}, {"bumps", bumps}};
}

}  // namespace infreg::io

#endif  // INFREG_IO_CODEC_HPP_
