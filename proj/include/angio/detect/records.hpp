/* Copyright 2026 The angiopipe Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "angio/core/csv.hpp"
#include "angio/core/enum.hpp"
#include "angio/core/error.hpp"
#include "angio/detect/types.hpp"

namespace angio {

// Detection record file: one detection per line,
//   frame_index,class,x_min,y_min,x_max,y_max,score
// with an optional header line of exactly those names.

inline constexpr const char* kDetectionHeader =
    "frame_index,class,x_min,y_min,x_max,y_max,score";

inline void write_detections(std::ostream& out,
                             const std::vector<Detection>& dets,
                             bool header = true) {
  if (header) out << kDetectionHeader << '\n';
  for (const auto& d : dets)
    csv::write_row(out, {csv::num(d.frame_index), to_string(d.cls),
                         csv::num(d.box.x_min), csv::num(d.box.y_min),
                         csv::num(d.box.x_max), csv::num(d.box.y_max),
                         csv::num(d.score)});
}

inline std::vector<Detection> read_detections(std::istream& in) {
  std::vector<Detection> out;
  csv::Row row;
  std::size_t line = 0;
  while (csv::read_row(in, row)) {
    ++line;
    if (row.size() == 1 && row[0].empty()) continue;
    if (line == 1 && !row.empty() && row[0] == "frame_index") continue;
    const auto where = "detection record line " + std::to_string(line);
    require(row.size() == 7, where + ": expected 7 fields",
            ErrorKind::kInvalidInput);
    double v[6];
    const std::size_t numeric[] = {0, 2, 3, 4, 5, 6};
    for (int k = 0; k < 6; ++k) {
      auto parsed = csv::parse_double(row[numeric[k]]);
      require(parsed.has_value(), where + ": bad number '" + row[numeric[k]] + "'",
              ErrorKind::kInvalidInput);
      v[k] = *parsed;
    }
    require(v[0] >= 0 && v[0] == static_cast<double>(static_cast<std::size_t>(v[0])),
            where + ": frame_index must be a non-negative integer",
            ErrorKind::kInvalidInput);
    auto cls = parse_enum<DetectionClass>(row[1]);
    require(cls.has_value(), where + ": unknown class '" + row[1] + "'",
            ErrorKind::kInvalidInput);
    Detection d;
    d.frame_index = static_cast<std::size_t>(v[0]);
    d.cls = *cls;
    d.box = {v[1], v[2], v[3], v[4]};
    d.score = v[5];
    require(d.box.valid(), where + ": degenerate box", ErrorKind::kInvalidInput);
    require(d.score >= 0.0 && d.score <= 1.0, where + ": score outside [0, 1]",
            ErrorKind::kInvalidInput);
    out.push_back(d);
  }
  return out;
}

inline std::vector<Detection> read_detections(const std::filesystem::path& p) {
  std::ifstream in(p);
  require(in.good(), "cannot open " + p.string(), ErrorKind::kIo);
  return read_detections(in);
}

}  // namespace angio
