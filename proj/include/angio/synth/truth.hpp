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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "angio/classify/classes.hpp"
#include "angio/core/enum.hpp"
#include "angio/core/error.hpp"
#include "angio/detect/types.hpp"
#include "angio/ingest/image_io.hpp"
#include "angio/vesselmask/vesselmask.hpp"

namespace angio {

struct SegmentTruth {
  DetectionClass segment = DetectionClass::LeftMain;
  BoundingBox box;
  bool operator==(const SegmentTruth&) const = default;
};

struct StenosisTruth {
  DetectionClass segment = DetectionClass::LeftMain;
  BoundingBox box;
  int percent = 0;  // = 100 * fractional narrowing
  bool operator==(const StenosisTruth&) const = default;
};

/// Geometry is static over the frames of a video, so boxes and the vessel
/// mask hold for every frame; only contrast opacity varies.
struct VideoTruth {
  std::string video_id;
  ProjectionClass projection = ProjectionClass::Other;
  AnatomyClass anatomy = AnatomyClass::Other;
  std::size_t peak_frame = 0;
  std::size_t frame_count = 0;
  int frame_width = 0;
  int frame_height = 0;
  std::vector<SegmentTruth> segments;
  std::vector<StenosisTruth> stenoses;
  std::vector<std::size_t> guidewire_frames;
  BoundingBox guidewire_box;
  Mask mask;
  std::string mask_file;
  bool operator==(const VideoTruth&) const = default;
};

struct ArteryTruth {
  DetectionClass segment = DetectionClass::LeftMain;
  int percent = 0;
  bool operator==(const ArteryTruth&) const = default;
};

struct GroundTruth {
  std::string study_id;
  std::vector<VideoTruth> videos;
  std::vector<ArteryTruth> stenoses;  // study-level injected lesions

  const VideoTruth* find_video(const std::string& id) const {
    for (const auto& v : videos)
      if (v.video_id == id) return &v;
    return nullptr;
  }
  bool operator==(const GroundTruth&) const = default;
};

inline constexpr const char* kTruthSidecar = "truth.json";

namespace detail {

inline nlohmann::json box_json(const BoundingBox& b) {
  return nlohmann::json::array({b.x_min, b.y_min, b.x_max, b.y_max});
}

inline BoundingBox box_from_json(const nlohmann::json& j) {
  require(j.is_array() && j.size() == 4, "truth: box must be [x_min, y_min, x_max, y_max]",
          ErrorKind::kMalformed);
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

}  // namespace detail

// truth.json:
//   { "study_id", "stenoses": [{"segment", "percent"}],
//     "videos": [{ "video_id", "projection", "anatomy", "peak_frame",
//                  "frame_count", "frame_width", "frame_height",
//                  "segments": [{"segment", "box"}],
//                  "stenoses": [{"segment", "box", "percent"}],
//                  "guidewire_frames", "guidewire_box", "mask_file" }] }
inline void write_truth(const GroundTruth& t, const std::filesystem::path& dir) {
  nlohmann::json doc;
  doc["study_id"] = t.study_id;
  doc["stenoses"] = nlohmann::json::array();
  for (const auto& a : t.stenoses)
    doc["stenoses"].push_back({{"segment", to_string(a.segment)}, {"percent", a.percent}});
  doc["videos"] = nlohmann::json::array();
  for (const auto& v : t.videos) {
    nlohmann::json jv;
    jv["video_id"] = v.video_id;
    jv["projection"] = to_string(v.projection);
    jv["anatomy"] = to_string(v.anatomy);
    jv["peak_frame"] = v.peak_frame;
    jv["frame_count"] = v.frame_count;
    jv["frame_width"] = v.frame_width;
    jv["frame_height"] = v.frame_height;
    jv["segments"] = nlohmann::json::array();
    for (const auto& s : v.segments)
      jv["segments"].push_back({{"segment", to_string(s.segment)}, {"box", detail::box_json(s.box)}});
    jv["stenoses"] = nlohmann::json::array();
    for (const auto& s : v.stenoses)
      jv["stenoses"].push_back({{"segment", to_string(s.segment)},
                                {"box", detail::box_json(s.box)},
                                {"percent", s.percent}});
    jv["guidewire_frames"] = v.guidewire_frames;
    jv["guidewire_box"] = detail::box_json(v.guidewire_box);
    jv["mask_file"] = v.mask_file;
    if (!v.mask_file.empty() && !v.mask.bits.empty())
      image_io::write_png(dir / v.mask_file, v.mask.to_frame());
    doc["videos"].push_back(std::move(jv));
  }
  std::ofstream out(dir / kTruthSidecar);
  out << doc.dump(2) << '\n';
  require(out.good(), "cannot write truth.json", ErrorKind::kIo);
}

inline GroundTruth read_truth(const std::filesystem::path& dir) {
  const auto path = dir / kTruthSidecar;
  std::ifstream in(path);
  require(in.good(), "missing truth sidecar " + path.string(), ErrorKind::kInvalidInput);
  GroundTruth t;
  try {
    const auto doc = nlohmann::json::parse(in);
    t.study_id = doc.at("study_id").get<std::string>();
    for (const auto& a : doc.at("stenoses"))
      t.stenoses.push_back({parse_enum_or_throw<DetectionClass>(
                                a.at("segment").get<std::string>(), "segment"),
                            a.at("percent").get<int>()});
    for (const auto& jv : doc.at("videos")) {
      VideoTruth v;
      v.video_id = jv.at("video_id").get<std::string>();
      v.projection = parse_enum_or_throw<ProjectionClass>(
          jv.at("projection").get<std::string>(), "projection");
      v.anatomy = parse_enum_or_throw<AnatomyClass>(jv.at("anatomy").get<std::string>(),
                                                    "anatomy");
      v.peak_frame = jv.at("peak_frame").get<std::size_t>();
      v.frame_count = jv.at("frame_count").get<std::size_t>();
      v.frame_width = jv.at("frame_width").get<int>();
      v.frame_height = jv.at("frame_height").get<int>();
      for (const auto& s : jv.at("segments"))
        v.segments.push_back({parse_enum_or_throw<DetectionClass>(
                                  s.at("segment").get<std::string>(), "segment"),
                              detail::box_from_json(s.at("box"))});
      for (const auto& s : jv.at("stenoses"))
        v.stenoses.push_back({parse_enum_or_throw<DetectionClass>(
                                  s.at("segment").get<std::string>(), "segment"),
                              detail::box_from_json(s.at("box")),
                              s.at("percent").get<int>()});
      v.guidewire_frames =
          jv.value("guidewire_frames", std::vector<std::size_t>());
      if (jv.contains("guidewire_box"))
        v.guidewire_box = detail::box_from_json(jv.at("guidewire_box"));
      v.mask_file = jv.value("mask_file", std::string());
      if (!v.mask_file.empty())
        v.mask = Mask::from_frame(image_io::read_gray(dir / v.mask_file));
      t.videos.push_back(std::move(v));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kMalformed, "malformed truth.json: " + std::string(e.what()));
  }
  return t;
}

}  // namespace angio
