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

#include <algorithm>
#include <array>
#include <cstddef>
#include <string_view>

#include "angio/core/enum.hpp"

namespace angio {

/// Object-detector labels. The first 11 are the coronary segments.
enum class DetectionClass {
  LeftMain,
  ProxLAD,
  MidLAD,
  DistLAD,
  ProxLCx,
  DistLCx,
  ProxRCA,
  MidRCA,
  DistRCA,
  PDA,
  Posterolateral,
  Stenosis,
  Obstruction,
  Valve,
  Catheter,
  Sternotomy,
  Stent,
  Pacemaker,
  Guidewire,
};

template <>
struct EnumNames<DetectionClass> {
  static constexpr std::array<std::string_view, 19> names = {
      "LeftMain",   "ProxLAD",     "MidLAD",    "DistLAD",  "ProxLCx",
      "DistLCx",    "ProxRCA",     "MidRCA",    "DistRCA",  "PDA",
      "Posterolateral", "Stenosis", "Obstruction", "Valve", "Catheter",
      "Sternotomy", "Stent",       "Pacemaker", "Guidewire"};
};

inline constexpr std::size_t kSegmentCount = 11;

constexpr bool is_segment(DetectionClass c) noexcept {
  return ordinal(c) < kSegmentCount;
}

constexpr bool is_lesion(DetectionClass c) noexcept {
  return c == DetectionClass::Stenosis || c == DetectionClass::Obstruction;
}

inline constexpr std::array<DetectionClass, kSegmentCount> kSegments = {
    DetectionClass::LeftMain, DetectionClass::ProxLAD, DetectionClass::MidLAD,
    DetectionClass::DistLAD,  DetectionClass::ProxLCx, DetectionClass::DistLCx,
    DetectionClass::ProxRCA,  DetectionClass::MidRCA,  DetectionClass::DistRCA,
    DetectionClass::PDA,      DetectionClass::Posterolateral};

/// Pixel-space box, half-open on the max edges.
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const noexcept { return x_max - x_min; }
  double height() const noexcept { return y_max - y_min; }
  double area() const noexcept {
    return valid() ? width() * height() : 0.0;
  }
  bool valid() const noexcept { return x_min < x_max && y_min < y_max; }

  bool contains(const BoundingBox& inner) const noexcept {
    return inner.x_min >= x_min && inner.y_min >= y_min &&
           inner.x_max <= x_max && inner.y_max <= y_max;
  }

  BoundingBox scaled(double sx, double sy) const noexcept {
    return {x_min * sx, y_min * sy, x_max * sx, y_max * sy};
  }

  bool operator==(const BoundingBox&) const = default;
};

struct Detection {
  std::size_t frame_index = 0;
  DetectionClass cls = DetectionClass::Stenosis;
  BoundingBox box;
  double score = 1.0;

  bool operator==(const Detection&) const = default;
};

/// A lesion detection paired with the segment it overlaps most.
struct StenosisAssignment {
  Detection stenosis;
  DetectionClass segment = DetectionClass::LeftMain;
  double overlap = 0.0;

  bool operator==(const StenosisAssignment&) const = default;
};

inline double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace angio
