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
#include <span>

#include "angio/core/error.hpp"
#include "angio/detect/types.hpp"
#include "angio/ingest/frame.hpp"
#include "angio/ingest/frames.hpp"

namespace angio {

/// Severity-model input sizes: 1 = 256x256, 2 = 256x128 (wide),
/// 3 = 128x256 (tall). Sizes are width x height.
enum class AspectRatio { Square = 1, Wide = 2, Tall = 3 };

struct CropSize {
  int width;
  int height;
};

constexpr CropSize crop_size(AspectRatio r) noexcept {
  switch (r) {
    case AspectRatio::Wide: return {256, 128};
    case AspectRatio::Tall: return {128, 256};
    case AspectRatio::Square: break;
  }
  return {256, 256};
}

constexpr int aspect_id(AspectRatio r) noexcept { return static_cast<int>(r); }

inline AspectRatio aspect_from_id(int id) {
  require(id >= 1 && id <= 3, "aspect ratio id must be 1, 2 or 3",
          ErrorKind::kMalformed);
  return static_cast<AspectRatio>(id);
}

/// Nearest predefined ratio in log space; ties prefer the square size.
inline AspectRatio nearest_aspect_ratio(double width, double height) {
  require(width > 0.0 && height > 0.0, "aspect ratio of a degenerate box");
  const double r = std::log(width / height);
  const double d_square = std::abs(r);
  const double d_wide = std::abs(r - std::log(2.0));
  const double d_tall = std::abs(r + std::log(2.0));
  if (d_square <= d_wide && d_square <= d_tall) return AspectRatio::Square;
  return d_wide <= d_tall ? AspectRatio::Wide : AspectRatio::Tall;
}

inline constexpr std::array<AspectRatio, 3> kAllAspectRatios = {
    AspectRatio::Square, AspectRatio::Wide, AspectRatio::Tall};

/// Same rule restricted to a configured subset; ties go to the lower id.
inline AspectRatio nearest_aspect_ratio(double width, double height,
                                        std::span<const AspectRatio> allowed) {
  require(!allowed.empty(), "empty aspect-ratio set");
  require(width > 0.0 && height > 0.0, "aspect ratio of a degenerate box");
  const double r = std::log(width / height);
  auto distance = [&](AspectRatio a) {
    const CropSize s = crop_size(a);
    return std::abs(r - std::log(double(s.width) / s.height));
  };
  AspectRatio best = allowed.front();
  for (auto a : allowed) {
    const double d = distance(a), db = distance(best);
    if (d < db || (d == db && aspect_id(a) < aspect_id(best))) best = a;
  }
  return best;
}

struct CroppedImage {
  Frame pixels;
  AspectRatio ratio = AspectRatio::Square;
  BoundingBox source;  // expanded, clamped, pixel-aligned region of the frame
};

inline constexpr double kCropMargin = 12.0;

/// Grows the box by margin on every side, snaps outward to whole pixels and
/// clamps to the frame.
inline BoundingBox expand_and_clamp(const BoundingBox& box, int width,
                                    int height, double margin = kCropMargin) {
  return {std::clamp(std::floor(box.x_min - margin), 0.0, double(width)),
          std::clamp(std::floor(box.y_min - margin), 0.0, double(height)),
          std::clamp(std::ceil(box.x_max + margin), 0.0, double(width)),
          std::clamp(std::ceil(box.y_max + margin), 0.0, double(height))};
}

inline Frame crop_region(const Frame& f, const BoundingBox& region) {
  const int x0 = static_cast<int>(region.x_min);
  const int y0 = static_cast<int>(region.y_min);
  const int w = static_cast<int>(region.x_max) - x0;
  const int h = static_cast<int>(region.y_max) - y0;
  Frame out(w, h, 0, f.index());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at(x, y) = f.at(x0 + x, y0 + y);
  return out;
}

inline CroppedImage crop_for_severity(
    const Frame& f, const BoundingBox& box,
    std::span<const AspectRatio> allowed = kAllAspectRatios) {
  const BoundingBox region = expand_and_clamp(box, f.width(), f.height());
  require(region.valid(), "crop: degenerate box after clamping");
  CroppedImage out;
  out.source = region;
  out.ratio = nearest_aspect_ratio(region.width(), region.height(), allowed);
  const auto size = crop_size(out.ratio);
  out.pixels = resize_bilinear(crop_region(f, region), size.width, size.height);
  return out;
}

}  // namespace angio
