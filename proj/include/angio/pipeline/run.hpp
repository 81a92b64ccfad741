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
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "angio/core/csv.hpp"
#include "angio/pipeline/pipeline.hpp"

#ifndef ANGIO_VERSION
#define ANGIO_VERSION "0.0.0"
#endif

namespace angio {

struct RunResult {
  std::vector<StudyResult> studies;  // sorted by study_id
  RunCounts counts;
  std::string config_hash;

  bool partial_failure() const { return counts.videos_failed > 0; }
};

/// Loads and runs each study directory. Oracle backends read the
/// directory's truth.json. Study-level input problems throw.
inline RunResult run_pipeline(const PipelineConfig& cfg,
                              const std::vector<std::filesystem::path>& study_dirs) {
  cfg.validate();
  auto truth = std::make_shared<TruthRegistry>();
  std::vector<StudyLoad> loads;
  for (const auto& dir : study_dirs) {
    require(std::filesystem::is_directory(dir), "not a study directory: " + dir.string(),
            ErrorKind::kInvalidInput);
    loads.push_back(load_study_lenient(dir));
  }
  const Pipeline pipeline(cfg, truth);
  if (pipeline.uses_oracle()) {
    for (std::size_t i = 0; i < loads.size(); ++i) {
      GroundTruth gt = read_truth(study_dirs[i]);
      require(gt.study_id == loads[i].study.study_id,
              "truth.json study_id does not match study.json in " + study_dirs[i].string(),
              ErrorKind::kInvalidInput);
      truth->add(std::move(gt));
    }
  }
  RunResult out;
  out.config_hash = config_hash(cfg);
  for (const auto& load : loads) out.studies.push_back(pipeline.run_study(load));
  std::stable_sort(out.studies.begin(), out.studies.end(),
                   [](const auto& a, const auto& b) { return a.study_id < b.study_id; });
  for (std::size_t i = 1; i < out.studies.size(); ++i)
    require(out.studies[i].study_id != out.studies[i - 1].study_id,
            "duplicate study_id " + out.studies[i].study_id, ErrorKind::kInvalidInput);
  for (const auto& s : out.studies) out.counts += s.counts;
  return out;
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  require(out.good(), "cannot write " + p.string(), ErrorKind::kIo);
  return out;
}

template <typename T>
std::string opt_name(const std::optional<T>& v) {
  return v ? to_string(*v) : std::string();
}

inline std::string index_list(const std::vector<std::size_t>& v) {
  std::string s;
  for (auto i : v) {
    if (!s.empty()) s += ';';
    s += std::to_string(i);
  }
  return s;
}

}  // namespace detail

inline constexpr const char* kFramePredictionsFile = "frame_predictions.csv";
inline constexpr const char* kVideoPredictionsFile = "video_predictions.csv";
inline constexpr const char* kArteryPredictionsFile = "artery_predictions.csv";
inline constexpr const char* kVideosFile = "videos.csv";
inline constexpr const char* kDetectionsFile = "detections.csv";
inline constexpr const char* kLesionsFile = "lesions.csv";
inline constexpr const char* kManifestFile = "manifest.json";

inline nlohmann::json counts_json(const RunCounts& c) {
  return {{"videos_in", c.videos_in},
          {"gated_out", c.gated_out},
          {"guidewire_excluded", c.guidewire_excluded},
          {"stenoses_assigned", c.stenoses_assigned},
          {"videos_failed", c.videos_failed}};
}

inline nlohmann::json manifest_json(const RunResult& r, const PipelineConfig& cfg) {
  nlohmann::json m;
  m["tool"] = "angiopipe";
  m["version"] = ANGIO_VERSION;
  m["config_hash"] = r.config_hash;
  m["config"] = config_to_json(cfg);
  m["seed"] = cfg.bootstrap.seed;
  m["counts"] = counts_json(r.counts);
  m["studies"] = nlohmann::json::array();
  m["errors"] = nlohmann::json::array();
  for (const auto& s : r.studies) {
    m["studies"].push_back({{"study_id", s.study_id}, {"counts", counts_json(s.counts)}});
    for (const auto& v : s.videos)
      if (v.status == VideoStatus::Failed)
        m["errors"].push_back(
            {{"study_id", s.study_id}, {"video_id", v.video_id}, {"message", v.message}});
  }
  return m;
}

/// Writes every result table plus manifest.json into dir. Rows follow
/// study_id, video_id, frame and segment order.
inline void write_run(const RunResult& r, const PipelineConfig& cfg,
                      const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, "cannot create " + dir.string() + ": " + ec.message(), ErrorKind::kIo);
  using csv::num;

  auto videos = detail::open_output(dir / kVideosFile);
  csv::write_row(videos, {"study_id", "video_id", "status", "projection", "anatomy", "detector",
                          "peak_frame", "selected_frames", "n_lesions", "message"});
  auto frames = detail::open_output(dir / kFramePredictionsFile);
  csv::write_row(frames, {"study_id", "video_id", "frame_index", "segment", "percent",
                          "n_lesions"});
  auto vids = detail::open_output(dir / kVideoPredictionsFile);
  csv::write_row(vids, {"study_id", "video_id", "segment", "percent", "n_frames",
                        "obstructive"});
  auto arts = detail::open_output(dir / kArteryPredictionsFile);
  csv::write_row(arts, {"study_id", "segment", "percent", "n_videos", "n_frames",
                        "obstructive"});
  auto dets = detail::open_output(dir / kDetectionsFile);
  csv::write_row(dets, {"study_id", "video_id", "frame_index", "class", "x_min", "y_min",
                        "x_max", "y_max", "score"});
  auto lesions = detail::open_output(dir / kLesionsFile);
  csv::write_row(lesions, {"study_id", "video_id", "frame_index", "segment", "lesion",
                           "x_min", "y_min", "x_max", "y_max", "overlap", "aspect_ratio",
                           "percent"});

  const auto t = ObstructiveThreshold::of(cfg.obstructive_threshold);
  for (const auto& s : r.studies) {
    for (const auto& v : s.videos) {
      csv::write_row(videos, {s.study_id, v.video_id, to_string(v.status),
                              detail::opt_name(v.projection), detail::opt_name(v.anatomy),
                              v.detector ? std::string(detector_name(*v.detector)) : "",
                              v.peak_frame ? num(*v.peak_frame) : "",
                              detail::index_list(v.selected), num(v.lesions.size()),
                              v.message});
      for (const auto& d : v.detections)
        csv::write_row(dets, {s.study_id, v.video_id, num(d.frame_index), to_string(d.cls),
                              num(d.box.x_min), num(d.box.y_min), num(d.box.x_max),
                              num(d.box.y_max), num(d.score)});
      if (v.status != VideoStatus::Ok) continue;
      for (const auto& l : v.lesions)
        csv::write_row(lesions, {s.study_id, v.video_id, num(l.frame_index),
                                 to_string(l.segment), to_string(l.lesion), num(l.box.x_min),
                                 num(l.box.y_min), num(l.box.x_max), num(l.box.y_max),
                                 num(l.overlap), num(aspect_id(l.ratio)), num(l.percent)});
      for (const auto& f : v.frames)
        csv::write_row(frames, {s.study_id, v.video_id, num(f.frame_index),
                                to_string(f.segment), num(f.percent), num(f.n_lesions)});
      for (const auto& p : v.segments)
        csv::write_row(vids, {s.study_id, v.video_id, to_string(p.segment), num(p.percent),
                              num(p.n_frames),
                              classify_obstructive(p.percent, t) ? "1" : "0"});
    }
    for (const auto& a : s.arteries)
      csv::write_row(arts, {s.study_id, to_string(a.segment), num(a.percent),
                            num(a.n_videos), num(a.n_frames), a.obstructive ? "1" : "0"});
  }
  auto manifest = detail::open_output(dir / kManifestFile);
  manifest << manifest_json(r, cfg).dump(2) << '\n';
  for (auto* f : {&videos, &frames, &vids, &arts, &dets, &lesions, &manifest}) {
    f->flush();
    require(f->good(), "write failed in " + dir.string(), ErrorKind::kIo);
  }
}

}  // namespace angio
