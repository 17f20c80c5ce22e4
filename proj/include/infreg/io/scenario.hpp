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

// Scenario files (JSON). Schema, all keys optional unless marked:
//
//   name                 string
//   map        required  {n, m, pieces: [{le: [[a..., b]], eq: [[a..., b]]}]}
//                        rows act on z = (x, y) in R^{n+m}: a . z <= b or = b
//   ybar       required  [m numbers]
//   window               {R, r, gamma, schedule: [radii]}
//   budget               ratio samples for reg estimates
//   tolerances           {criterion, lip, angle, exact}
//   perturbation         {K, spec: <serialised PerturbationSpec>}
//   solver               {kappa, lambda, epsilon, max_iters, y, x0, starts,
//                         spread, f: "perturbation" | "zero"}
//   seed                 unsigned integer
//   ystar                [m numbers], covector for coderivative queries
//   point                [n + m numbers], base point for normal-cone
//   queries              {x: [n numbers], y: [m numbers]} for slice
//   radius_mode          "plain" | "strong"
//   expect               {jelonek: bool, strong: bool}
//
// Errors carry the offending field as a JSON pointer and the line where
// that field appears in the file.

#ifndef INFREG_IO_SCENARIO_HPP_
#define INFREG_IO_SCENARIO_HPP_

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "infreg/core.hpp"
#include "infreg/io/codec.hpp"
#include "infreg/lgsolve.hpp"
#include "infreg/perturb.hpp"
#include "infreg/svmap.hpp"

namespace infreg::io {

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string file, int line, std::string field, const std::string& msg)
      : std::runtime_error(format(file, line, field, msg)),
        file_(std::move(file)),
        line_(line),
        field_(std::move(field)) {}

  int line() const { return line_; }
  const std::string& field() const { return field_; }
  const std::string& file() const { return file_; }

 private:
  static std::string format(const std::string& file, int line, const std::string& field,
                            const std::string& msg) {
    std::string out = file;
    if (line > 0) out += ":" + std::to_string(line);
    out += ": ";
    if (!field.empty()) out += "field " + field + ": ";
    return out + msg;
  }
  std::string file_;
  int line_;
  std::string field_;
};

struct Tolerances {
  double criterion = 0.05;
  double lip = 1e-6;
  double angle = kSampledAngleTol;
  double exact = kExactAngleTol;
};

struct PieceRows {
  std::vector<Vec> le;  // [a..., b]
  std::vector<Vec> eq;
};

struct SolverSection {
  SolverParams params;
  Vec y;
  Vec x0;
  int starts = 1;
  double spread = 0.0;       // random starts uniform in the box x0 +- spread
  std::string f = "perturbation";
};

struct Scenario {
  std::string name;
  int n = 0;
  int m = 0;
  std::vector<PieceRows> pieces;
  Vec ybar;
  InfinityWindow window;
  int budget = 10000;
  Tolerances tol;
  int K = 8;
  std::optional<PerturbationSpec> perturbation_spec;
  std::optional<SolverSection> solver;
  std::uint64_t seed = 1;
  std::optional<Vec> ystar;
  std::optional<Vec> point;
  std::optional<Vec> query_x;
  std::optional<Vec> query_y;
  std::string radius_mode = "plain";
  std::optional<bool> expect_jelonek;
  std::optional<bool> expect_strong;

  SetValuedMap map() const {
    std::vector<geom::Polyhedron> ps;
    const int d = n + m;
    for (const auto& p : pieces) {
      std::vector<geom::Halfspace> le, eq;
      for (const auto& r : p.le) le.push_back({r.head(d), r(d)});
      for (const auto& r : p.eq) eq.push_back({r.head(d), r(d)});
      ps.push_back(geom::Polyhedron::from_rows(d, le, eq));
    }
    return SetValuedMap(n, m, ps);
  }

  Vec ystar_or_default() const {
    if (ystar) return *ystar;
    Vec e = Vec::Zero(m);
    e(0) = 1.0;
    return e;
  }
};

namespace detail {

/// Line of the last key of `pointer` found by walking the text key by key.
inline int locate_line(const std::string& text, const std::string& pointer) {
  std::size_t pos = 0;
  std::size_t found = std::string::npos;
  std::stringstream ss(pointer);
  std::string seg;
  while (std::getline(ss, seg, '/')) {
    if (seg.empty() || std::all_of(seg.begin(), seg.end(), ::isdigit)) continue;
    const std::size_t at = text.find('"' + seg + '"', pos);
    if (at == std::string::npos) break;
    found = pos = at;
  }
  if (found == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + found, '\n'));
}

class Reader {
 public:
  Reader(std::string file, const std::string& text) : file_(std::move(file)), text_(text) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    throw ScenarioError(file_, locate_line(text_, ptr), ptr.empty() ? "/" : ptr, msg);
  }

  const Json& require(const Json& obj, const std::string& ptr, const std::string& key) const {
    if (!obj.is_object()) fail(ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(ptr + "/" + key, "missing required field");
    return *it;
  }

  const Json* optional(const Json& obj, const std::string& key) const {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  double number(const Json& j, const std::string& ptr) const {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s == "inf") return kInf;
      if (s == "-inf") return -kInf;
    }
    fail(ptr, "expected a number");
  }

  double positive(const Json& j, const std::string& ptr) const {
    const double v = number(j, ptr);
    if (!(v > 0.0)) fail(ptr, "expected a positive number");
    return v;
  }

  long long integer(const Json& j, const std::string& ptr, long long lo) const {
    if (!j.is_number_integer()) fail(ptr, "expected an integer");
    const long long v = j.get<long long>();
    if (v < lo) fail(ptr, "expected an integer >= " + std::to_string(lo));
    return v;
  }

  bool boolean(const Json& j, const std::string& ptr) const {
    if (!j.is_boolean()) fail(ptr, "expected true or false");
    return j.get<bool>();
  }

  std::string string(const Json& j, const std::string& ptr) const {
    if (!j.is_string()) fail(ptr, "expected a string");
    return j.get<std::string>();
  }

  Vec vec(const Json& j, const std::string& ptr, int size) const {
    if (!j.is_array()) fail(ptr, "expected an array of numbers");
    if (size >= 0 && static_cast<int>(j.size()) != size) {
      fail(ptr, "expected " + std::to_string(size) + " entries, found " + std::to_string(j.size()));
    }
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(i) = number(j[i], ptr + "/" + std::to_string(i));
    return v;
  }

  std::vector<Vec> rows(const Json& j, const std::string& ptr, int size) const {
    if (!j.is_array()) fail(ptr, "expected an array of rows");
    std::vector<Vec> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vec(j[i], ptr + "/" + std::to_string(i), size));
    return out;
  }

 private:
  std::string file_;
  const std::string& text_;
};

inline PerturbationSpec read_perturbation_spec(const Reader& rd, const Json& j, const std::string& ptr) {
  PerturbationSpec s;
  s.n = static_cast<int>(rd.integer(rd.require(j, ptr, "n"), ptr + "/n", 1));
  s.m = static_cast<int>(rd.integer(rd.require(j, ptr, "m"), ptr + "/m", 1));
  s.K = static_cast<int>(rd.integer(rd.require(j, ptr, "K"), ptr + "/K", 0));
  s.rgplus = rd.number(rd.require(j, ptr, "rgplus"), ptr + "/rgplus");
  s.ybar = rd.vec(rd.require(j, ptr, "ybar"), ptr + "/ybar", s.m);
  const Json& bumps = rd.require(j, ptr, "bumps");
  if (!bumps.is_array()) rd.fail(ptr + "/bumps", "expected an array");
  for (std::size_t i = 0; i < bumps.size(); ++i) {
    const std::string p = ptr + "/bumps/" + std::to_string(i);
    const Json& b = bumps[i];
    Bump out;
    out.center = rd.vec(rd.require(b, p, "center"), p + "/center", s.n);
    out.partner = rd.vec(rd.require(b, p, "partner"), p + "/partner", s.m);
    out.xstar = rd.vec(rd.require(b, p, "xstar"), p + "/xstar", s.n);
    out.ystar = rd.vec(rd.require(b, p, "ystar"), p + "/ystar", s.m);
    out.direction = rd.vec(rd.require(b, p, "direction"), p + "/direction", s.m);
    out.radius = rd.number(rd.require(b, p, "radius"), p + "/radius");
    out.scale = rd.number(rd.require(b, p, "scale"), p + "/scale");
    out.exponent = rd.number(rd.require(b, p, "exponent"), p + "/exponent");
    s.bumps.push_back(std::move(out));
  }
  return s;
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text, const std::string& file = "<scenario>") {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
    throw ScenarioError(file, line, "", std::string("malformed JSON: ") + e.what());
  }
  const detail::Reader rd(file, text);
  if (!root.is_object()) rd.fail("", "top level must be an object");
  Scenario s;
  if (auto* j = rd.optional(root, "name")) s.name = rd.string(*j, "/name");

  const Json& map = rd.require(root, "", "map");
  s.n = static_cast<int>(rd.integer(rd.require(map, "/map", "n"), "/map/n", 1));
  s.m = static_cast<int>(rd.integer(rd.require(map, "/map", "m"), "/map/m", 1));
  const Json& pieces = rd.require(map, "/map", "pieces");
  if (!pieces.is_array() || pieces.empty()) rd.fail("/map/pieces", "expected a nonempty array");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string p = "/map/pieces/" + std::to_string(i);
    if (!pieces[i].is_object()) rd.fail(p, "expected an object with le/eq rows");
    PieceRows pr;
    if (auto* le = rd.optional(pieces[i], "le")) pr.le = rd.rows(*le, p + "/le", s.n + s.m + 1);
    if (auto* eq = rd.optional(pieces[i], "eq")) pr.eq = rd.rows(*eq, p + "/eq", s.n + s.m + 1);
    s.pieces.push_back(std::move(pr));
  }
  s.ybar = rd.vec(rd.require(root, "", "ybar"), "/ybar", s.m);

  if (auto* w = rd.optional(root, "window")) {
    if (auto* j = rd.optional(*w, "R")) s.window.R = rd.positive(*j, "/window/R");
    if (auto* j = rd.optional(*w, "r")) s.window.r = rd.positive(*j, "/window/r");
    if (auto* j = rd.optional(*w, "gamma")) s.window.gamma = rd.positive(*j, "/window/gamma");
    if (auto* j = rd.optional(*w, "schedule")) {
      const Vec sch = rd.vec(*j, "/window/schedule", -1);
      s.window.schedule.assign(sch.data(), sch.data() + sch.size());
    }
  }
  if (s.window.schedule.empty()) s.window.schedule = InfinityWindow::doubling_schedule(10.0, 11);
  try {
    s.window.validate();
  } catch (const Error& e) {
    rd.fail("/window", e.what());
  }
  if (auto* j = rd.optional(root, "budget")) s.budget = static_cast<int>(rd.integer(*j, "/budget", 1));
  if (auto* t = rd.optional(root, "tolerances")) {
    if (auto* j = rd.optional(*t, "criterion")) s.tol.criterion = rd.positive(*j, "/tolerances/criterion");
    if (auto* j = rd.optional(*t, "lip")) s.tol.lip = rd.positive(*j, "/tolerances/lip");
    if (auto* j = rd.optional(*t, "angle")) s.tol.angle = rd.positive(*j, "/tolerances/angle");
    if (auto* j = rd.optional(*t, "exact")) s.tol.exact = rd.positive(*j, "/tolerances/exact");
  }
  if (auto* p = rd.optional(root, "perturbation")) {
    if (auto* j = rd.optional(*p, "K")) s.K = static_cast<int>(rd.integer(*j, "/perturbation/K", 1));
    if (auto* j = rd.optional(*p, "spec")) {
      s.perturbation_spec = detail::read_perturbation_spec(rd, *j, "/perturbation/spec");
      if (s.perturbation_spec->n != s.n || s.perturbation_spec->m != s.m) {
        rd.fail("/perturbation/spec", "dimensions differ from the map");
      }
    }
  }
  if (auto* sv = rd.optional(root, "solver")) {
    SolverSection so;
    const std::string p = "/solver";
    if (auto* j = rd.optional(*sv, "kappa")) so.params.kappa = rd.positive(*j, p + "/kappa");
    if (auto* j = rd.optional(*sv, "lambda")) so.params.lambda = rd.number(*j, p + "/lambda");
    if (auto* j = rd.optional(*sv, "epsilon")) so.params.epsilon = rd.positive(*j, p + "/epsilon");
    if (auto* j = rd.optional(*sv, "max_iters")) so.params.max_iters = static_cast<int>(rd.integer(*j, p + "/max_iters", 1));
    so.y = rd.vec(rd.require(*sv, p, "y"), p + "/y", s.m);
    so.x0 = rd.vec(rd.require(*sv, p, "x0"), p + "/x0", s.n);
    if (auto* j = rd.optional(*sv, "starts")) so.starts = static_cast<int>(rd.integer(*j, p + "/starts", 1));
    if (auto* j = rd.optional(*sv, "spread")) so.spread = rd.number(*j, p + "/spread");
    if (auto* j = rd.optional(*sv, "f")) {
      so.f = rd.string(*j, p + "/f");
      if (so.f != "perturbation" && so.f != "zero") rd.fail(p + "/f", "expected \"perturbation\" or \"zero\"");
    }
    try {
      validate_solver_params(so.params);
    } catch (const Error& e) {
      rd.fail(p, e.what());
    }
    s.solver = std::move(so);
  }
  if (auto* j = rd.optional(root, "seed")) s.seed = static_cast<std::uint64_t>(rd.integer(*j, "/seed", 0));
  if (auto* j = rd.optional(root, "ystar")) s.ystar = rd.vec(*j, "/ystar", s.m);
  if (auto* j = rd.optional(root, "point")) s.point = rd.vec(*j, "/point", s.n + s.m);
  if (auto* q = rd.optional(root, "queries")) {
    if (auto* j = rd.optional(*q, "x")) s.query_x = rd.vec(*j, "/queries/x", s.n);
    if (auto* j = rd.optional(*q, "y")) s.query_y = rd.vec(*j, "/queries/y", s.m);
  }
  if (auto* j = rd.optional(root, "radius_mode")) {
    s.radius_mode = rd.string(*j, "/radius_mode");
    if (s.radius_mode != "plain" && s.radius_mode != "strong") {
      rd.fail("/radius_mode", "expected \"plain\" or \"strong\"");
    }
  }
  if (auto* e = rd.optional(root, "expect")) {
    if (auto* j = rd.optional(*e, "jelonek")) s.expect_jelonek = rd.boolean(*j, "/expect/jelonek");
    if (auto* j = rd.optional(*e, "strong")) s.expect_strong = rd.boolean(*j, "/expect/strong");
  }
  try {
    (void)s.map();
  } catch (const Error& e) {
    rd.fail("/map", e.what());
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path, 0, "", "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

/// Canonical JSON form; parse_scenario(to_json(s).dump()) reproduces s.
inline Json to_json(const Scenario& s) {
  Json pieces = Json::array();
  for (const auto& p : s.pieces) {
    Json o = Json::object();
    if (!p.le.empty()) o["le"] = to_json(p.le);
    if (!p.eq.empty()) o["eq"] = to_json(p.eq);
    pieces.push_back(o);
  }
  Json sched = Json::array();
  for (double r : s.window.schedule) sched.push_back(number(r));
  Json j{{"name", s.name},
         {"map", {{"n", s.n}, {"m", s.m}, {"pieces", pieces}}},
         {"ybar", to_json(s.ybar)},
         {"window", {{"R", s.window.R}, {"r", s.window.r}, {"gamma", s.window.gamma}, {"schedule", sched}}},
         {"budget", s.budget},
         {"tolerances",
          {{"criterion", s.tol.criterion}, {"lip", s.tol.lip}, {"angle", s.tol.angle}, {"exact", s.tol.exact}}},
         {"perturbation", {{"K", s.K}}},
         {"seed", s.seed},
         {"radius_mode", s.radius_mode}};
  if (s.perturbation_spec) j["perturbation"]["spec"] = to_json(*s.perturbation_spec);
  if (s.solver) {
    const auto& so = *s.solver;
    j["solver"] = {{"kappa", so.params.kappa}, {"lambda", so.params.lambda}, {"epsilon", so.params.epsilon},
                   {"max_iters", so.params.max_iters}, {"y", to_json(so.y)}, {"x0", to_json(so.x0)},
                   {"starts", so.starts}, {"spread", so.spread}, {"f", so.f}};
  }
  if (s.ystar) j["ystar"] = to_json(*s.ystar);
  if (s.point) j["point"] = to_json(*s.point);
  if (s.query_x || s.query_y) {
    j["queries"] = Json::object();
    if (s.query_x) j["queries"]["x"] = to_json(*s.query_x);
    if (s.query_y) j["queries"]["y"] = to_json(*s.query_y);
  }
  if (s.expect_jelonek || s.expect_strong) {
    j["expect"] = Json::object();
    if (s.expect_jelonek) j["expect"]["jelonek"] = *s.expect_jelonek;
    if (s.expect_strong) j["expect"]["strong"] = *s.expect_strong;
  }
  return j;
}

}  // namespace infreg::io

#endif  // INFREG_IO_SCENARIO_HPP_
