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

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "angio/backends/wire.hpp"
#include "angio/core/error.hpp"
#include "angio/detect/crop.hpp"
#include "angio/ingest/frames.hpp"
#include "angio/synth/truth.hpp"

namespace angio {

class Backend {
 public:
  explicit Backend(Stage stage) : stage_(stage) {}
  virtual ~Backend() = default;
  Backend(const Backend&) = delete;
  Backend& operator=(const Backend&) = delete;

  Stage stage() const noexcept { return stage_; }

  /// Raw answer; use the free infer() for stage and schema checking.
  virtual InferenceResponse answer(const InferenceRequest& req) = 0;

 private:
  Stage stage_;
};

inline std::string join_diagnostics(const std::vector<std::string>& diags) {
  std::string out;
  for (const auto& d : diags) {
    if (!out.empty()) out += "; ";
    out += d;
  }
  return out;
}

inline InferenceResponse infer(Backend& b, const InferenceRequest& req) {
  require(req.stage == b.stage(),
          "stage mismatch: request for " + to_string(req.stage) +
              " sent to " + to_string(b.stage()) + " backend");
  InferenceResponse resp = b.answer(req);
  require(resp.request_id == req.request_id,
          "response request_id '" + resp.request_id + "' does not match '" +
              req.request_id + "'",
          ErrorKind::kMalformed);
  require(resp.stage == req.stage, "response stage does not match request",
          ErrorKind::kMalformed);
  const auto diags = validate_response(resp.stage, resp.payload);
  require(diags.empty(), "invalid " + to_string(resp.stage) + " response: " + join_diagnostics(diags),
          ErrorKind::kMalformed);
  return resp;
}

// --- constant -------------------------------------------------------------

/// Returns the same payload for every request. Detection frame indices are
/// taken from the request meta; a vessel-seg constant is a single probability
/// broadcast to the request image size.
class ConstantBackend final : public Backend {
 public:
  ConstantBackend(Stage stage, Payload payload)
      : Backend(stage), payload_(std::move(payload)) {}

  /// Accepted forms: a class name (one-hot) or a scores object for
  /// projection/anatomy; a detections array; a number for severity; a number
  /// in [0, 1] for vesselseg.
  static std::unique_ptr<ConstantBackend> from_json(Stage stage,
                                                    const nlohmann::json& value) {
    try {
      if ((stage == Stage::Projection || stage == Stage::Anatomy) && value.is_string()) {
        const auto idx = class_index(stage, value.get<std::string>());
        require(idx.has_value(), "unknown class '" + value.get<std::string>() + "'",
                ErrorKind::kConfig);
        ClassScores cs;
        cs.scores.assign(class_count(stage), 0.0);
        cs.scores[*idx] = 1.0;
        return std::make_unique<ConstantBackend>(stage, cs);
      }
      if (stage == Stage::Severity && value.is_number()) {
        const double pct = value.get<double>();
        require(pct >= 0.0 && pct <= 100.0, "severity constant must be in [0, 100]",
                ErrorKind::kConfig);
        return std::make_unique<ConstantBackend>(stage, Percent{pct});
      }
      if (stage == Stage::VesselSeg) {
        require(value.is_number(), "vesselseg constant must be a probability",
                ErrorKind::kConfig);
        const double p = value.get<double>();
        require(p >= 0.0 && p <= 1.0, "vesselseg constant must be in [0, 1]",
                ErrorKind::kConfig);
        ProbabilityMap m;
        m.values = {p};
        return std::make_unique<ConstantBackend>(stage, m);
      }
      Payload p = payload_from_json(stage, value);
      const auto diags = validate_response(stage, p);
      require(diags.empty(), "invalid constant payload: " + join_diagnostics(diags),
              ErrorKind::kConfig);
      return std::make_unique<ConstantBackend>(stage, std::move(p));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kConfig, std::string("invalid constant payload: ") + e.what());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kConfig) throw;
      fail(ErrorKind::kConfig, e.what());
    }
  }

  InferenceResponse answer(const InferenceRequest& req) override {
    InferenceResponse r{req.request_id, req.stage, payload_};
    if (auto* dets = std::get_if<Detections>(&r.payload)) {
      const auto idx = req.meta.value("frame_index", std::size_t{0});
      for (auto& d : *dets) d.frame_index = idx;
    } else if (auto* m = std::get_if<ProbabilityMap>(&r.payload)) {
      const double p = m->values.empty() ? 0.0 : m->values.front();
      m->width = req.image.width();
      m->height = req.image.height();
      m->values.assign(std::size_t(m->width) * std::size_t(m->height), p);
    }
    return r;
  }

 private:
  Payload payload_;
};

// --- oracle -----------------------------------------------------------------

/// Ground truth by study_id, shared by every oracle backend of a run.
class TruthRegistry {
 public:
  void add(GroundTruth truth) {
    std::lock_guard lock(mu_);
    const std::string id = truth.study_id;
    studies_[id] = std::make_shared<const GroundTruth>(std::move(truth));
  }

  std::shared_ptr<const GroundTruth> find(const std::string& study_id) const {
    std::lock_guard lock(mu_);
    auto it = studies_.find(study_id);
    return it == studies_.end() ? nullptr : it->second;
  }

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const GroundTruth>> studies_;
};

/// Answers from synthetic ground truth. Requests carry meta fields
/// study_id, video_id, frame_index and, for crops, segment and source_box
/// (the crop region in request-frame coordinates) plus frame_width /
/// frame_height of the frame the crop was cut from.
class OracleBackend final : public Backend {
 public:
  OracleBackend(Stage stage, std::shared_ptr<const TruthRegistry> truth)
      : Backend(stage), truth_(std::move(truth)) {
    require(truth_ != nullptr, "oracle backend needs a truth registry", ErrorKind::kConfig);
  }

  InferenceResponse answer(const InferenceRequest& req) override {
    const VideoTruth& v = lookup(req.meta);
    return {req.request_id, req.stage, payload_for(req, v)};
  }

 private:
  const VideoTruth& lookup(const nlohmann::json& meta) const {
    const std::string study = meta.value("study_id", std::string());
    const std::string video = meta.value("video_id", std::string());
    auto gt = truth_->find(study);
    require(gt != nullptr, "oracle: no ground truth for study '" + study + "'",
            ErrorKind::kInvalidInput);
    const VideoTruth* v = gt->find_video(video);
    require(v != nullptr, "oracle: no ground truth for video '" + video + "'",
            ErrorKind::kInvalidInput);
    // The registry keeps the GroundTruth alive for the backend's lifetime.
    return *v;
  }

  template <typename Class>
  static ClassScores one_hot(Class c) {
    ClassScores cs;
    cs.scores.assign(enum_count<Class>, 0.0);
    cs.scores[ordinal(c)] = 1.0;
    return cs;
  }

  static BoundingBox source_box(const nlohmann::json& meta) {
    return detail::box_from_json(meta.at("source_box"));
  }

  Payload payload_for(const InferenceRequest& req, const VideoTruth& v) const {
    switch (req.stage) {
      case Stage::Projection: return one_hot(v.projection);
      case Stage::Anatomy: return one_hot(v.anatomy);
      case Stage::Detect3a:
      case Stage::Detect3b: {
        const double sx = double(req.image.width()) / v.frame_width;
        const double sy = double(req.image.height()) / v.frame_height;
        const auto frame = req.meta.value("frame_index", std::size_t{0});
        Detections dets;
        for (const auto& s : v.segments)
          dets.push_back({frame, s.segment, s.box.scaled(sx, sy), 1.0});
        for (const auto& s : v.stenoses)
          dets.push_back({frame,
                          s.percent >= 100 ? DetectionClass::Obstruction
                                           : DetectionClass::Stenosis,
                          s.box.scaled(sx, sy), 1.0});
        if (std::find(v.guidewire_frames.begin(), v.guidewire_frames.end(), frame) !=
            v.guidewire_frames.end())
          dets.push_back({frame, DetectionClass::Guidewire, v.guidewire_box.scaled(sx, sy), 1.0});
        return dets;
      }
      case Stage::Severity: {
        const auto seg = parse_enum_or_throw<DetectionClass>(
            req.meta.at("segment").get<std::string>(), "segment");
        // Several lesions on one segment: take the one best overlapping the
        // crop, mapped back to native coordinates.
        const BoundingBox region = native_region(req.meta, v);
        const StenosisTruth* best = nullptr;
        double best_iou = -1.0;
        for (const auto& s : v.stenoses) {
          if (s.segment != seg) continue;
          const double o = iou(s.box, region);
          if (o > best_iou) best_iou = o, best = &s;
        }
        return Percent{best ? double(best->percent) : 0.0};
      }
      case Stage::VesselSeg: {
        require(!v.mask.bits.empty(), "oracle: video has no truth mask",
                ErrorKind::kInvalidInput);
        const BoundingBox region = native_region(req.meta, v);
        ProbabilityMap m;
        m.width = req.image.width();
        m.height = req.image.height();
        m.values.resize(std::size_t(m.width) * std::size_t(m.height));
        for (int y = 0; y < m.height; ++y)
          for (int x = 0; x < m.width; ++x) {
            const double fx = region.x_min + (x + 0.5) * region.width() / m.width;
            const double fy = region.y_min + (y + 0.5) * region.height() / m.height;
            const int mx = std::clamp(int(fx), 0, v.mask.width - 1);
            const int my = std::clamp(int(fy), 0, v.mask.height - 1);
            m.values[std::size_t(y) * m.width + x] = v.mask.at(mx, my) ? 1.0 : 0.0;
          }
        return m;
      }
    }
    fail(ErrorKind::kPrecondition, "oracle: unknown stage");
  }

  static BoundingBox native_region(const nlohmann::json& meta, const VideoTruth& v) {
    const BoundingBox box = source_box(meta);
    const double fw = meta.value("frame_width", double(v.frame_width));
    const double fh = meta.value("frame_height", double(v.frame_height));
    return box.scaled(v.frame_width / fw, v.frame_height / fh);
  }

  std::shared_ptr<const TruthRegistry> truth_;
};

}  // namespace angio
