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
#include <cmath>
#include <cstdint>

#include "angio/detect/types.hpp"
#include "angio/ingest/image_io.hpp"

namespace angio {

struct Rgb {
  std::uint8_t r, g, b;
};

inline Rgb class_color(DetectionClass c) {
  if (is_lesion(c)) return {255, 40, 40};
  if (c == DetectionClass::Guidewire) return {255, 220, 0};
  if (!is_segment(c)) return {0, 200, 255};
  static constexpr std::array<Rgb, kSegmentCount> palette = {{
      {46, 204, 113}, {52, 152, 219}, {155, 89, 182}, {241, 196, 15}, {230, 126, 34},
      {26, 188, 156}, {149, 165, 166}, {236, 240, 241}, {211, 84, 0}, {39, 174, 96},
      {142, 68, 173}}};
  return palette[ordinal(c)];
}

/// Box outline, thickness pixels wide, drawn inside the box edges.
inline void draw_box(image_io::RgbImage& img, const BoundingBox& b, Rgb color,
                     int thickness = 1) {
  const int x0 = int(std::floor(b.x_min)), y0 = int(std::floor(b.y_min));
  const int x1 = int(std::ceil(b.x_max)) - 1, y1 = int(std::ceil(b.y_max)) - 1;
  for (int t = 0; t < thickness; ++t) {
    for (int x = x0; x <= x1; ++x) {
      img.set(x, y0 + t, color.r, color.g, color.b);
      img.set(x, y1 - t, color.r, color.g, color.b);
    }
    for (int y = y0; y <= y1; ++y) {
      img.set(x0 + t, y, color.r, color.g, color.b);
      img.set(x1 - t, y, color.r, color.g, color.b);
    }
  }
}

}  // namespace angio
