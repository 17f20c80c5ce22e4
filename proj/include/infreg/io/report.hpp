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

// JSON-lines report stream. One record per check:
//   {"name", "inputs_digest", "values": {key: {value, tolerance, method}},
//    "status": "PASS" | "FAIL" | "INFO", "tolerance"}

#ifndef INFREG_IO_REPORT_HPP_
#define INFREG_IO_REPORT_HPP_

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "infreg/io/codec.hpp"
#include "infreg/regmod.hpp"

namespace infreg::io {

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

enum class Status { kPass, kFail, kInfo };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::kPass: return "PASS";
    case Status::kFail: return "FAIL";
    default: return "INFO";
  }
}

inline Status status_of(bool pass) { return pass ? Status::kPass : Status::kFail; }

/// A reported value with its tolerance and method tag ("exact" | "sampled").
inline Json quantity(const Json& value, double tolerance, const char* method) {
  return Json{{"value", value}, {"tolerance", number(tolerance)}, {"method", method}};
}

inline Json quantity(double value, double tolerance, const char* method) {
  return quantity(number(value), tolerance, method);
}

inline Json quantity(bool value, double tolerance, const char* method) {
  return quantity(Json(value), tolerance, method);
}

inline Json quantity(int value, double tolerance, const char* method) {
  return quantity(Json(value), tolerance, method);
}

inline Json quantity(const std::string& value, double tolerance, const char* method) {
  return quantity(Json(value), tolerance, method);
}

inline Json quantity(const char* value, double tolerance, const char* method) {
  return quantity(Json(value), tolerance, method);
}

struct Record {
  std::string name;
  Json values = Json::object();
  Status status = Status::kInfo;
  double tolerance = 0.0;

  Record& add(const std::string& key, Json q) {
    values[key] = std::move(q);
    return *this;
  }
};

class ReportWriter {
 public:
  ReportWriter(std::ostream& os, std::string digest) : os_(os), digest_(std::move(digest)) {}

  void write(const Record& r) {
    Json j{{"name", r.name},
           {"inputs_digest", digest_},
           {"values", r.values},
           {"status", to_string(r.status)},
           {"tolerance", number(r.tolerance)}};
    os_ << j.dump() << '\n';
    if (r.status == Status::kFail) ++failures_;
    ++records_;
  }

  int failures() const { return failures_; }
  int records() const { return records_; }

 private:
  std::ostream& os_;
  std::string digest_;
  int failures_ = 0;
  int records_ = 0;
};

inline void write_ratio_csv(std::ostream& os, const std::vector<RatioSample>& samples, int n, int m) {
  for (int i = 0; i < n; ++i) os << 'x' << i + 1 << ',';
  for (int i = 0; i < m; ++i) os << 'y' << i + 1 << ',';
  os << "numerator,denominator,ratio\n";
  char buf[32];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << sep;
  };
  for (const auto& s : samples) {
    for (int i = 0; i < n; ++i) put(s.x(i), ',');
    for (int i = 0; i < m; ++i) put(s.y(i), ',');
    put(s.numerator, ',');
    put(s.denominator, ',');
    put(s.ratio, '\n');
  }
}

}  // namespace infreg::io

#endif  // INFREG_IO_REPORT_HPP_
