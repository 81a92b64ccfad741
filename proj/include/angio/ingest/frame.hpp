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

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "angio/core/error.hpp"

namespace angio {

/// 8-bit grayscale image, row-major.
class Frame {
 public:
  Frame() = default;

  Frame(int width, int height, std::uint8_t fill = 0, std::size_t index = 0)
      : width_(width), height_(height), index_(index) {
    require(width >= 1 && height >= 1, "frame dimensions must be >= 1");
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  Frame(int width, int height, std::vector<std::uint8_t> pixels,
        std::size_t index = 0)
      : width_(width), height_(height), index_(index),
        pixels_(std::move(pixels)) {
    require(width >= 1 && height >= 1, "frame dimensions must be >= 1");
    require(pixels_.size() == static_cast<std::size_t>(width) * height,
            "pixel count does not match frame dimensions");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t index() const noexcept { return index_; }
  void set_index(std::size_t i) noexcept { index_ = i; }
  bool empty() const noexcept { return pixels_.empty(); }

  std::uint8_t at(int x, int y) const {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::uint8_t& at(int x, int y) {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }

  const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }
  std::vector<std::uint8_t>& pixels() noexcept { return pixels_; }

  bool same_shape(const Frame& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_;
  }

  bool operator==(const Frame&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::size_t index_ = 0;
  std::vector<std::uint8_t> pixels_;
};

struct VideoMetadata {
  double primary_angle_deg = 0.0;    // RAO < 0 < LAO
  double secondary_angle_deg = 0.0;  // caudal < 0 < cranial
  std::string study_id;
  std::string patient_id;
  std::string video_id;
  std::string acquisition_date;  // YYYY-MM-DD

  bool operator==(const VideoMetadata&) const = default;
};

struct Video {
  VideoMetadata metadata;
  std::vector<Frame> frames;

  bool operator==(const Video&) const = default;
};

struct Study {
  std::string study_id;
  std::string patient_id;
  std::vector<Video> videos;

  bool operator==(const Study&) const = default;
};

/// Frames retained for classification: the reference frame, the
/// peak-contrast frame and its neighbours.
struct FrameStack {
  std::string video_id;
  std::size_t reference_index = 0;
  std::size_t peak_index = 0;
  std::vector<std::size_t> selected_indices;

  bool operator==(const FrameStack&) const = default;
};

/// Checks the Video invariants: >= 1 frame, indices 0..N-1, uniform shape.
inline void validate_video(const Video& v) {
  require(!v.frames.empty(), "video " + v.metadata.video_id + " has no frames",
          ErrorKind::kInvalidInput);
  for (std::size_t i = 0; i < v.frames.size(); ++i) {
    require(v.frames[i].index() == i,
            "video " + v.metadata.video_id + ": frame indices not sequential",
            ErrorKind::kInvalidInput);
    require(v.frames[i].same_shape(v.frames[0]),
            "video " + v.metadata.video_id + ": frame dimension mismatch",
            ErrorKind::kInvalidInput);
  }
}

}  // namespace angio
