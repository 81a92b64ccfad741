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
#include <vector>

#include "angio/core/csv.hpp"
#include "angio/synth/truth.hpp"

namespace angio {

inline constexpr const char* kTruthVideosFile = "truth_videos.csv";
inline constexpr const char* kTruthArteriesFile = "truth_arteries.csv";
inline constexpr const char* kTruthDetectionsFile = "truth_detections.csv";

/// Flat ground-truth tables across studies, in the column layout the eval
/// subcommands read. Detections cover every frame after the reference.
inline void write_truth_tables(const std::vector<GroundTruth>& studies,
                               const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream videos(dir / kTruthVideosFile, std::ios::binary);
  std::ofstream arteries(dir / kTruthArteriesFile, std::ios::binary);
  std::ofstream dets(dir / kTruthDetectionsFile, std::ios::binary);
  require(videos.good() && arteries.good() && dets.good(),
          "cannot write truth tables in " + dir.string(), ErrorKind::kIo);
  using csv::num;
  csv::write_row(videos, {"study_id", "video_id", "projection", "anatomy", "peak_frame"});
  csv::write_row(arteries, {"study_id", "segment", "percent"});
  csv::write_row(dets, {"study_id", "video_id", "frame_index", "class", "x_min", "y_min",
                        "x_max", "y_max"});
  auto box_row = [&](const std::string& study, const VideoTruth& v, std::size_t k,
                     DetectionClass c, const BoundingBox& b) {
    csv::write_row(dets, {study, v.video_id, num(k), to_string(c), num(b.x_min),
                          num(b.y_min), num(b.x_max), num(b.y_max)});
  };
  for (const auto& t : studies) {
    for (const auto& a : t.stenoses)
      csv::write_row(arteries, {t.study_id, to_string(a.segment), num(a.percent)});
    for (const auto& v : t.videos) {
      csv::write_row(videos, {t.study_id, v.video_id, to_string(v.projection),
                              to_string(v.anatomy), num(v.peak_frame)});
      for (std::size_t k = 1; k < v.frame_count; ++k) {
        for (const auto& s : v.segments) box_row(t.study_id, v, k, s.segment, s.box);
        for (const auto& s : v.stenoses)
          box_row(t.study_id, v, k,
                  s.percent >= 100 ? DetectionClass::Obstruction : DetectionClass::Stenosis,
                  s.box);
        if (std::find(v.guidewire_frames.begin(), v.guidewire_frames.end(), k) !=
            v.guidewire_frames.end())
          box_row(t.study_id, v, k, DetectionClass::Guidewire, v.guidewire_box);
      }
    }
  }
  require(videos.good() && arteries.good() && dets.good(), "truth table write failed",
          ErrorKind::kIo);
}

}  // namespace angio
