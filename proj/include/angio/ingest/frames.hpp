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
#include <cmath>
#include <cstddef>
#include <vector>

#include "angio/core/error.hpp"
#include "angio/ingest/frame.hpp"
#include "angio/ingest/ssim.hpp"

namespace angio {

/// Index of the frame least similar to frame 0 (the pre-contrast reference).
/// Ties go to the lowest index.
inline std::size_t select_peak_contrast(const Video& v) {
  require(v.frames.size() >= 2,
          "peak-contrast selection needs >= 2 frames (video " +
              v.metadata.video_id + ")");
  const SsimReference ref(v.frames[0]);
  std::size_t best = 1;
  double best_score = ref.compare(v.frames[1]);
  for (std::size_t k = 2; k < v.frames.size(); ++k) {
    const double s = ref.compare(v.frames[k]);
    if (s < best_score) {
      best_score = s;
      best = k;
    }
  }
  return best;
}

/// Reference frame plus the peak-contrast frame and up to three neighbours
/// on each side; at most 8 indices, sorted.
inline FrameStack frame_stack_for_peak(const Video& v, std::size_t peak) {
  const std::size_t n = v.frames.size();
  require(peak < n && peak >= 1, "peak index out of range");
  FrameStack stack;
  stack.video_id = v.metadata.video_id;
  stack.reference_index = 0;
  stack.peak_index = peak;
  stack.selected_indices.push_back(0);
  const std::size_t lo = peak >= 3 ? peak - 3 : 0;
  const std::size_t hi = std::min(n - 1, peak + 3);
  for (std::size_t i = std::max<std::size_t>(lo, 1); i <= hi; ++i)
    stack.selected_indices.push_back(i);
  return stack;
}

inline FrameStack extract_frames(const Video& v) {
  return frame_stack_for_peak(v, select_peak_contrast(v));
}

/// Bilinear resampling with corner-aligned sampling: output corners map
/// exactly onto input corners.
inline Frame resize_bilinear(const Frame& f, int out_w, int out_h) {
  require(out_w >= 1 && out_h >= 1, "resize: output side must be >= 1");
  if (out_w == f.width() && out_h == f.height()) return f;
  Frame out(out_w, out_h, 0, f.index());
  const double sx = out_w > 1 ? double(f.width() - 1) / (out_w - 1) : 0.0;
  const double sy = out_h > 1 ? double(f.height() - 1) / (out_h - 1) : 0.0;
  std::vector<int> x0(out_w), x1(out_w);
  std::vector<double> fx(out_w);
  for (int x = 0; x < out_w; ++x) {
    const double src = x * sx;
    x0[x] = std::min(static_cast<int>(src), f.width() - 1);
    x1[x] = std::min(x0[x] + 1, f.width() - 1);
    fx[x] = src - x0[x];
  }
  for (int y = 0; y < out_h; ++y) {
    const double src = y * sy;
    const int y0 = std::min(static_cast<int>(src), f.height() - 1);
    const int y1 = std::min(y0 + 1, f.height() - 1);
    const double fy = src - y0;
    for (int x = 0; x < out_w; ++x) {
      const double top = f.at(x0[x], y0) * (1.0 - fx[x]) + f.at(x1[x], y0) * fx[x];
      const double bot = f.at(x0[x], y1) * (1.0 - fx[x]) + f.at(x1[x], y1) * fx[x];
      const double v = top * (1.0 - fy) + bot * fy;
      out.at(x, y) = static_cast<std::uint8_t>(
          std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return out;
}

inline Frame resize_frame(const Frame& f, int side) {
  return resize_bilinear(f, side, side);
}

}  // namespace angio
