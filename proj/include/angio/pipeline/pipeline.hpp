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
#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "angio/backends/external.hpp"
#include "angio/classify/vote.hpp"
#include "angio/detect/crop.hpp"
#include "angio/detect/postprocess.hpp"
#include "angio/ingest/frames.hpp"
#include "angio/ingest/study.hpp"
#include "angio/pipeline/config.hpp"
#include "angio/severity/severity.hpp"
#include "angio/synth/truth.hpp"
#include "angio/vesselmask/vesselmask.hpp"

namespace angio {

enum class VideoStatus { Ok, Gated, GuidewireExcluded, Failed };

template <>
struct EnumNames<VideoStatus> {
  static constexpr std::array<std::string_view, 4> names = {"ok", "gated", "guidewire",
                                                            "error"};
};

/// One assigned lesion on one analysed frame.
struct LesionPrediction {
  std::size_t frame_index = 0;
  DetectionClass segment = DetectionClass::LeftMain;
  DetectionClass lesion = DetectionClass::Stenosis;
  BoundingBox box;  // analysis-frame coordinates
  double overlap = 0.0;
  AspectRatio ratio = AspectRatio::Square;
  double percent = 0.0;
};

struct FrameSegmentPrediction {
  std::size_t frame_index = 0;
  DetectionClass segment = DetectionClass::LeftMain;
  double percent = 0.0;  // max over the frame's lesions on this segment
  std::size_t n_lesions = 0;
};

struct VideoSegmentPrediction {
  DetectionClass segment = DetectionClass::LeftMain;
  double percent = 0.0;
  std::size_t n_frames = 0;
};

struct VideoResult {
  std::string video_id;
  VideoStatus status = VideoStatus::Ok;
  std::string message;
  std::optional<ProjectionClass> projection;
  std::optional<AnatomyClass> anatomy;
  std::optional<DetectorId> detector;
  std::optional<std::size_t> peak_frame;
  std::vector<std::size_t> selected;
  Detections detections;  // after score filtering, native frame coordinates
  std::vector<LesionPrediction> lesions;
  std::vector<FrameSegmentPrediction> frames;
  std::vector<VideoSegmentPrediction> segments;
};

struct ArteryPrediction {
  DetectionClass segment = DetectionClass::LeftMain;
  double percent = 0.0;
  std::size_t n_videos = 0;
  std::size_t n_frames = 0;
  bool obstructive = false;
};

struct RunCounts {
  std::size_t videos_in = 0;
  std::size_t gated_out = 0;
  std::size_t guidewire_excluded = 0;
  std::size_t stenoses_assigned = 0;
  std::size_t videos_failed = 0;

  RunCounts& operator+=(const RunCounts& o) {
    videos_in += o.videos_in;
    gated_out += o.gated_out;
    guidewire_excluded += o.guidewire_excluded;
    stenoses_assigned += o.stenoses_assigned;
    videos_failed += o.videos_failed;
    return *this;
  }
};

struct StudyResult {
  std::string study_id;
  std::vector<VideoResult> videos;  // sorted by video_id
  std::vector<ArteryPrediction> arteries;
  RunCounts counts;
};

/// Artery level: for each segment, the mean over videos of the video-level
/// values. Only videos with status ok contribute.
inline std::vector<ArteryPrediction> aggregate_study(const std::vector<VideoResult>& videos,
                                                     double obstructive_threshold) {
  std::map<DetectionClass, std::vector<double>> by_segment;
  std::map<DetectionClass, std::size_t> frames;
  for (const auto& v : videos) {
    if (v.status != VideoStatus::Ok) continue;
    for (const auto& s : v.segments) {
      by_segment[s.segment].push_back(s.percent);
      frames[s.segment] += s.n_frames;
    }
  }
  std::vector<ArteryPrediction> out;
  const auto t = ObstructiveThreshold::of(obstructive_threshold);
  for (const auto& [segment, percent] : aggregate_artery(by_segment))
    out.push_back({segment, percent, by_segment[segment].size(), frames[segment],
                   classify_obstructive(percent, t)});
  return out;
}

inline RunCounts count_videos(const std::vector<VideoResult>& videos) {
  RunCounts c;
  for (const auto& v : videos) {
    ++c.videos_in;
    c.gated_out += v.status == VideoStatus::Gated;
    c.guidewire_excluded += v.status == VideoStatus::GuidewireExcluded;
    c.videos_failed += v.status == VideoStatus::Failed;
    if (v.status == VideoStatus::Ok) c.stenoses_assigned += v.lesions.size();
  }
  return c;
}

class Pipeline {
 public:
  Pipeline(PipelineConfig cfg, std::shared_ptr<const TruthRegistry> truth)
      : cfg_(std::move(cfg)) {
    cfg_.validate();
    for (const auto& [stage, d] : cfg_.backends) backends_[stage] = make_backend(d, truth);
  }

  const PipelineConfig& config() const noexcept { return cfg_; }

  bool uses_oracle() const {
    for (const auto& [stage, d] : cfg_.backends)
      if (d.kind == BackendKind::Oracle) return true;
    return false;
  }

  /// Never throws for per-video problems; they come back as status error.
  VideoResult run_video(const Video& video) const {
    VideoResult r;
    r.video_id = video.metadata.video_id;
    try {
      process(video, r);
    } catch (const std::exception& e) {
      VideoResult failed;
      failed.video_id = r.video_id;
      failed.status = VideoStatus::Failed;
      failed.message = e.what();
      return failed;
    }
    return r;
  }

  /// Videos run on up to cfg.parallelism threads; results are merged in
  /// video_id order after all workers finish.
  StudyResult run_study(const StudyLoad& load) const {
    const auto& videos = load.study.videos;
    std::vector<VideoResult> results(videos.size());
    const std::size_t workers =
        std::min<std::size_t>(std::size_t(cfg_.parallelism), std::max<std::size_t>(1, videos.size()));
    if (workers <= 1) {
      for (std::size_t i = 0; i < videos.size(); ++i) results[i] = run_video(videos[i]);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (std::size_t i; (i = next.fetch_add(1)) < videos.size();)
            results[i] = run_video(videos[i]);
        });
      for (auto& t : pool) t.join();
    }
    for (const auto& e : load.errors) {
      VideoResult f;
      f.video_id = e.video_id;
      f.status = VideoStatus::Failed;
      f.message = e.message;
      results.push_back(std::move(f));
    }
    std::stable_sort(results.begin(), results.end(),
                     [](const auto& a, const auto& b) { return a.video_id < b.video_id; });
    StudyResult s;
    s.study_id = load.study.study_id;
    s.videos = std::move(results);
    s.arteries = aggregate_study(s.videos, cfg_.obstructive_threshold);
    s.counts = count_videos(s.videos);
    return s;
  }

 private:
  Backend& backend(Stage s) const {
    auto it = backends_.find(s);
    require(it != backends_.end(), "no backend for stage " + to_string(s), ErrorKind::kConfig);
    return *it->second;
  }

  nlohmann::json base_meta(const Video& v, std::size_t frame) const {
    return {{"study_id", v.metadata.study_id},
            {"video_id", v.metadata.video_id},
            {"frame_index", frame},
            {"primary_angle_deg", v.metadata.primary_angle_deg},
            {"secondary_angle_deg", v.metadata.secondary_angle_deg}};
  }

  static std::string request_id(const Video& v, Stage s, std::size_t frame,
                                std::size_t k = 0) {
    return v.metadata.video_id + ":" + to_string(s) + ":" + std::to_string(frame) + ":" +
           std::to_string(k);
  }

  InferenceResponse call(Stage s, const Video& v, std::size_t frame, std::size_t k,
                         Frame image, nlohmann::json meta) const {
    InferenceRequest req{s, request_id(v, s, frame, k), std::move(image), std::move(meta)};
    return infer(backend(s), req);
  }

  template <typename Class>
  FramePrediction<Class> classify(Stage s, const Video& v, const Frame& f) const {
    const auto resp = call(s, v, f.index(), 0, f, base_meta(v, f.index()));
    const auto& cs = std::get<ClassScores>(resp.payload);
    FramePrediction<Class> p;
    p.frame_index = f.index();
    std::copy(cs.scores.begin(), cs.scores.end(), p.scores.begin());
    return p;
  }

  double severity(const Video& v, const Frame& analysed, const Detection& lesion,
                  DetectionClass segment, std::size_t k, CroppedImage& crop) const {
    crop = crop_for_severity(analysed, lesion.box, cfg_.aspect_ratios);
    if (lesion.cls == DetectionClass::Obstruction) return 100.0;
    nlohmann::json meta = base_meta(v, lesion.frame_index);
    meta["segment"] = to_string(segment);
    meta["aspect_ratio"] = aspect_id(crop.ratio);
    meta["source_box"] = detail::box_json(crop.source);
    meta["frame_width"] = analysed.width();
    meta["frame_height"] = analysed.height();
    CroppedImage input = crop;
    if (backends_.count(Stage::VesselSeg)) {
      const auto resp = call(Stage::VesselSeg, v, lesion.frame_index, k, crop.pixels, meta);
      const auto& map = std::get<ProbabilityMap>(resp.payload);
      require(map.width == crop.pixels.width() && map.height == crop.pixels.height(),
              "vesselseg map does not match the crop size", ErrorKind::kMalformed);
      input = apply_mask(crop, vessel_mask(map));
    }
    const auto resp = call(Stage::Severity, v, lesion.frame_index, k, input.pixels, meta);
    return std::get<Percent>(resp.payload).value;
  }

  /// Otsu needs two distinct levels; a flat map is thresholded at one half.
  static Mask vessel_mask(const ProbabilityMap& map) {
    const bool flat = std::all_of(map.values.begin(), map.values.end(), [&](double p) {
      return quantize_probability(p) == quantize_probability(map.values.front());
    });
    if (!flat) return otsu_binarize(map);
    return Mask(map.width, map.height, map.values.front() >= 0.5 ? 1 : 0);
  }

  void process(const Video& video, VideoResult& r) const {
    validate_video(video);
    const FrameStack stack = extract_frames(video);
    r.peak_frame = stack.peak_index;
    r.selected = stack.selected_indices;

    const int side = cfg_.analysis_side;
    std::vector<Frame> analysed;
    for (auto i : stack.selected_indices) analysed.push_back(resize_frame(video.frames[i], side));

    std::vector<ProjectionPrediction> proj;
    std::vector<AnatomyPrediction> anat;
    for (const auto& f : analysed) {
      proj.push_back(classify<ProjectionClass>(Stage::Projection, video, f));
      anat.push_back(classify<AnatomyClass>(Stage::Anatomy, video, f));
    }
    r.projection = vote_projection(proj);
    r.anatomy = vote_anatomy(anat);
    if (!gate_coronary(*r.anatomy)) {
      r.status = VideoStatus::Gated;
      r.message = "anatomy " + to_string(*r.anatomy);
      return;
    }
    r.detector = route_detector(*r.anatomy, *r.projection);
    const Stage det_stage = *r.detector == DetectorId::RcaLao ? Stage::Detect3b : Stage::Detect3a;

    // The reference frame precedes contrast and is not analysed.
    Detections dets;
    for (const auto& f : analysed) {
      if (f.index() == stack.reference_index) continue;
      const auto resp = call(det_stage, video, f.index(), 0, f, base_meta(video, f.index()));
      for (auto d : std::get<Detections>(resp.payload)) {
        d.frame_index = f.index();
        dets.push_back(d);
      }
    }
    dets = filter_by_score(dets, cfg_.detector_score_threshold);
    const double sx = double(video.frames.front().width()) / side;
    const double sy = double(video.frames.front().height()) / side;
    for (const auto& d : dets) r.detections.push_back({d.frame_index, d.cls, d.box.scaled(sx, sy), d.score});

    if (guidewire_excluded(dets)) {
      r.status = VideoStatus::GuidewireExcluded;
      r.message = "guidewire present in more than " + std::to_string(kGuidewireMaxFrames) +
                  " frames";
      return;
    }
    dets = apply_projection_exclusion(dets, *r.anatomy, *r.projection);
    const auto assignments = assign_stenoses(dets, cfg_.assignment_min_iou);

    std::size_t k = 0;
    for (const auto& a : assignments) {
      const Frame* frame = nullptr;
      for (const auto& f : analysed)
        if (f.index() == a.stenosis.frame_index) frame = &f;
      require(frame != nullptr, "detection on a frame that was not analysed");
      CroppedImage crop;
      const double pct = severity(video, *frame, a.stenosis, a.segment, k++, crop);
      r.lesions.push_back({a.stenosis.frame_index, a.segment, a.stenosis.cls, a.stenosis.box,
                           a.overlap, crop.ratio, pct});
    }

    std::map<std::pair<DetectionClass, std::size_t>, FrameSegmentPrediction> per_frame;
    for (const auto& l : r.lesions) {
      auto [it, fresh] = per_frame.try_emplace({l.segment, l.frame_index},
                                               FrameSegmentPrediction{l.frame_index, l.segment, l.percent, 0});
      if (!fresh) it->second.percent = std::max(it->second.percent, l.percent);
      ++it->second.n_lesions;
    }
    std::map<DetectionClass, std::vector<double>> by_segment;
    for (const auto& [key, p] : per_frame) {
      r.frames.push_back(p);
      by_segment[p.segment].push_back(p.percent);
    }
    std::sort(r.frames.begin(), r.frames.end(), [](const auto& a, const auto& b) {
      return std::pair(a.frame_index, ordinal(a.segment)) <
             std::pair(b.frame_index, ordinal(b.segment));
    });
    for (const auto& [segment, values] : by_segment)
      r.segments.push_back({segment, aggregate_video(values), values.size()});
  }

  PipelineConfig cfg_;
  std::map<Stage, std::unique_ptr<Backend>> backends_;
};

}  // namespace angio
