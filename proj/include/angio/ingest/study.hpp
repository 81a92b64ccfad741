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
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "angio/core/error.hpp"
#include "angio/ingest/frame.hpp"
#include "angio/ingest/image_io.hpp"

namespace angio {

// On-disk study layout:
//
//   <root>/study.json
//   <root>/<frame files...>
//
// study.json:
//   { "study_id": str, "patient_id": str,
//     "videos": [ { "video_id": str, "primary_angle_deg": num,
//                   "secondary_angle_deg": num, "acquisition_date": str,
//                   "frame_files": [relative paths, in frame order] } ] }

inline constexpr const char* kStudySidecar = "study.json";

inline bool is_calendar_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  const int month = std::stoi(s.substr(5, 2));
  const int day = std::stoi(s.substr(8, 2));
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

inline void validate_metadata(const VideoMetadata& m) {
  const auto where = " (video '" + m.video_id + "')";
  require(!m.video_id.empty(), "empty video_id", ErrorKind::kInvalidInput);
  require(!m.study_id.empty(), "empty study_id" + where,
          ErrorKind::kInvalidInput);
  require(!m.patient_id.empty(), "empty patient_id" + where,
          ErrorKind::kInvalidInput);
  require(m.primary_angle_deg >= -180.0 && m.primary_angle_deg <= 180.0,
          "primary_angle_deg outside [-180, 180]" + where,
          ErrorKind::kInvalidInput);
  require(m.secondary_angle_deg >= -50.0 && m.secondary_angle_deg <= 50.0,
          "secondary_angle_deg outside [-50, 50]" + where,
          ErrorKind::kInvalidInput);
  require(m.acquisition_date.empty() || is_calendar_date(m.acquisition_date),
          "acquisition_date is not YYYY-MM-DD" + where,
          ErrorKind::kInvalidInput);
}

namespace detail {

template <typename T>
T json_field(const nlohmann::json& j, const char* key, const std::string& ctx) {
  require(j.contains(key), ctx + ": missing field '" + key + "'",
          ErrorKind::kInvalidInput);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::kInvalidInput, ctx + ": field '" + key + "' has wrong type");
  }
}

}  // namespace detail

struct VideoLoadError {
  std::string video_id;
  std::string message;
};

/// A study whose unreadable videos were set aside instead of failing the
/// whole load.
struct StudyLoad {
  Study study;
  std::vector<VideoLoadError> errors;
};

namespace detail {

inline Video load_video(const nlohmann::json& jv, const Study& study,
                        const std::filesystem::path& root) {
  Video v;
  auto& m = v.metadata;
  m.video_id = json_field<std::string>(jv, "video_id", "video");
  const std::string ctx = "video '" + m.video_id + "'";
  m.primary_angle_deg = json_field<double>(jv, "primary_angle_deg", ctx);
  m.secondary_angle_deg = json_field<double>(jv, "secondary_angle_deg", ctx);
  m.acquisition_date = jv.value("acquisition_date", std::string());
  m.study_id = study.study_id;
  m.patient_id = study.patient_id;
  validate_metadata(m);
  const auto files = json_field<std::vector<std::string>>(jv, "frame_files", ctx);
  require(!files.empty(), ctx + ": no frame files", ErrorKind::kInvalidInput);
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto path = root / files[i];
    require(std::filesystem::exists(path),
            ctx + ": missing frame " + path.string(), ErrorKind::kInvalidInput);
    Frame f = image_io::read_gray(path);
    f.set_index(i);
    require(v.frames.empty() || f.same_shape(v.frames.front()),
            ctx + ": frame dimension mismatch at " + files[i],
            ErrorKind::kInvalidInput);
    v.frames.push_back(std::move(f));
  }
  return v;
}

}  // namespace detail

/// Loads one study directory. Sidecar problems throw; a video whose
/// metadata or frames cannot be read is reported in errors and skipped.
/// Videos come back sorted by video_id.
inline StudyLoad load_study_lenient(const std::filesystem::path& root) {
  const auto sidecar = root / kStudySidecar;
  require(std::filesystem::exists(sidecar),
          "missing metadata sidecar " + sidecar.string(),
          ErrorKind::kInvalidInput);
  nlohmann::json doc;
  {
    std::ifstream in(sidecar);
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kInvalidInput,
           "malformed " + sidecar.string() + ": " + e.what());
    }
  }
  StudyLoad out;
  Study& study = out.study;
  study.study_id = detail::json_field<std::string>(doc, "study_id", "study.json");
  study.patient_id =
      detail::json_field<std::string>(doc, "patient_id", "study.json");
  const auto videos =
      detail::json_field<nlohmann::json>(doc, "videos", "study.json");
  require(videos.is_array(), "study.json: 'videos' must be an array",
          ErrorKind::kInvalidInput);

  std::vector<std::string> ids;
  for (const auto& jv : videos) {
    const std::string id =
        jv.is_object() ? jv.value("video_id", std::string()) : std::string();
    ids.push_back(id);
    try {
      study.videos.push_back(detail::load_video(jv, study, root));
    } catch (const Error& e) {
      out.errors.push_back({id, e.what()});
    }
  }
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 1; i < ids.size(); ++i)
    require(ids[i].empty() || ids[i] != ids[i - 1], "duplicate video_id " + ids[i],
            ErrorKind::kInvalidInput);
  std::sort(study.videos.begin(), study.videos.end(),
            [](const Video& a, const Video& b) {
              return a.metadata.video_id < b.metadata.video_id;
            });
  std::sort(out.errors.begin(), out.errors.end(),
            [](const auto& a, const auto& b) { return a.video_id < b.video_id; });
  return out;
}

/// Strict variant: any unreadable video fails the load.
inline Study load_study(const std::filesystem::path& root) {
  StudyLoad l = load_study_lenient(root);
  if (!l.errors.empty()) fail(ErrorKind::kInvalidInput, l.errors.front().message);
  return std::move(l.study);
}

/// Writes a study in the layout read by load_study: one subdirectory per
/// video holding PNG frames.
inline void write_study_layout(const Study& study,
                               const std::filesystem::path& root) {
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  require(!ec, "cannot create " + root.string() + ": " + ec.message(),
          ErrorKind::kIo);
  nlohmann::json doc;
  doc["study_id"] = study.study_id;
  doc["patient_id"] = study.patient_id;
  doc["videos"] = nlohmann::json::array();
  for (const auto& v : study.videos) {
    const auto& m = v.metadata;
    std::filesystem::create_directories(root / m.video_id, ec);
    require(!ec, "cannot create video directory: " + ec.message(),
            ErrorKind::kIo);
    nlohmann::json jv;
    jv["video_id"] = m.video_id;
    jv["primary_angle_deg"] = m.primary_angle_deg;
    jv["secondary_angle_deg"] = m.secondary_angle_deg;
    jv["acquisition_date"] = m.acquisition_date;
    auto& files = jv["frame_files"] = nlohmann::json::array();
    for (std::size_t i = 0; i < v.frames.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%04zu.png", i);
      const std::string rel = m.video_id + "/" + name;
      image_io::write_png(root / rel, v.frames[i]);
      files.push_back(rel);
    }
    doc["videos"].push_back(std::move(jv));
  }
  std::ofstream out(root / kStudySidecar);
  out << doc.dump(2) << '\n';
  require(out.good(), "cannot write study.json", ErrorKind::kIo);
}

}  // namespace angio
