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
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "angio/core/enum.hpp"
#include "angio/core/error.hpp"
#include "angio/core/rng.hpp"
#include "angio/detect/types.hpp"
#include "angio/report/record.hpp"

namespace angio {

enum class PredictionLevel { Frame, Video, Artery };

template <>
struct EnumNames<PredictionLevel> {
  static constexpr std::array<std::string_view, 3> names = {"frame", "video",
                                                            "artery"};
};

struct StenosisPrediction {
  PredictionLevel level = PredictionLevel::Frame;
  DetectionClass segment = DetectionClass::LeftMain;
  double percent = 0.0;
  std::vector<std::string> provenance;

  bool operator==(const StenosisPrediction&) const = default;
};

struct ObstructiveThreshold {
  double value = 54.0;

  static ObstructiveThreshold of(double v) {
    require(v >= 0.0 && v <= 100.0, "obstructive threshold outside [0, 100]",
            ErrorKind::kConfig);
    return {v};
  }
};

inline constexpr double kDefaultObstructiveThreshold = 54.0;
inline constexpr double kReportObstructivePercent = 70.0;
inline constexpr std::size_t kGuidewireMaxFrames = 4;

/// True when the video must be dropped: guidewire detections in more than
/// kGuidewireMaxFrames distinct frames.
inline bool guidewire_excluded(std::span<const Detection> dets,
                               std::size_t max_frames = kGuidewireMaxFrames) {
  std::set<std::size_t> frames;
  for (const auto& d : dets)
    if (d.cls == DetectionClass::Guidewire) frames.insert(d.frame_index);
  return frames.size() > max_frames;
}

/// Arithmetic mean, summed in sorted order so it is permutation invariant,
/// and clamped to the input range.
inline double mean_percent(std::span<const double> values) {
  require(!values.empty(), "mean of an empty list");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  return std::clamp(sum / double(v.size()), v.front(), v.back());
}

inline double aggregate_video(std::span<const double> frame_percents) {
  return mean_percent(frame_percents);
}

inline std::map<DetectionClass, double> aggregate_artery(
    const std::map<DetectionClass, std::vector<double>>& by_segment) {
  std::map<DetectionClass, double> out;
  for (const auto& [segment, values] : by_segment) {
    require(!values.empty(),
            "no video-level values for segment " + to_string(segment));
    out[segment] = mean_percent(values);
  }
  return out;
}

constexpr bool classify_obstructive(double percent,
                                    ObstructiveThreshold t) noexcept {
  return percent >= t.value;
}

struct Calibration {
  ObstructiveThreshold threshold;
  double f1 = 0.0;
};

inline double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp == 0) return 0.0;
  return 2.0 * double(tp) / double(2 * tp + fp + fn);
}

/// F1-optimal cut among the observed scores plus 0 and 100; F1 ties go to
/// the lowest threshold.
inline Calibration calibrate_threshold(std::span<const double> scores,
                                       std::span<const int> labels) {
  require(scores.size() == labels.size(), "calibrate: length mismatch");
  std::size_t positives = 0;
  for (int l : labels) positives += l ? 1 : 0;
  require(positives > 0 && positives < labels.size(),
          "calibrate: both label classes must be present");

  std::vector<std::pair<double, int>> items;
  items.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    items.emplace_back(scores[i], labels[i] ? 1 : 0);
  std::sort(items.begin(), items.end());

  std::vector<double> candidates(scores.begin(), scores.end());
  candidates.push_back(0.0);
  candidates.push_back(100.0);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  // Walk candidates upward; items below the cut are predicted negative.
  std::size_t below = 0, pos_below = 0;
  Calibration best{{candidates.front()}, -1.0};
  for (double t : candidates) {
    while (below < items.size() && items[below].first < t) {
      pos_below += items[below].second;
      ++below;
    }
    const std::size_t tp = positives - pos_below;
    const std::size_t fp = (items.size() - below) - tp;
    const std::size_t fn = pos_below;
    const double f1 = f1_from_counts(tp, fp, fn);
    if (f1 > best.f1) best = {{t}, f1};
  }
  return best;
}

struct RecordMatch {
  std::vector<std::pair<StenosisPrediction, StenosisRecord>> matched;
  std::vector<StenosisPrediction> unmatched_predictions;
  std::vector<StenosisRecord> unmatched_records;
};

/// Pairs predictions with report records of the same segment, first come
/// first served in input order.
inline RecordMatch match_records(std::span<const StenosisPrediction> preds,
                                 std::span<const StenosisRecord> records) {
  RecordMatch out;
  std::vector<bool> used(records.size(), false);
  for (const auto& p : preds) {
    bool found = false;
    for (std::size_t j = 0; j < records.size(); ++j) {
      if (!used[j] && records[j].segment == p.segment) {
        used[j] = true;
        out.matched.emplace_back(p, records[j]);
        found = true;
        break;
      }
    }
    if (!found) out.unmatched_predictions.push_back(p);
  }
  for (std::size_t j = 0; j < records.size(); ++j)
    if (!used[j]) out.unmatched_records.push_back(records[j]);
  return out;
}

struct BoxSize {
  double width;
  double height;
};

/// Random sub-box of a healthy segment whose size is drawn from the
/// empirical stenosis crop sizes; placement is uniform inside the segment.
inline BoundingBox healthy_crop_box(const BoundingBox& segment_box,
                                    std::span<const BoxSize> size_distribution,
                                    std::uint64_t seed) {
  require(!size_distribution.empty(), "healthy crop: empty size distribution");
  require(segment_box.valid(), "healthy crop: degenerate segment box");
  Rng rng(seed);
  const auto& s = size_distribution[rng.index(size_distribution.size())];
  const double w = std::min(s.width, segment_box.width());
  const double h = std::min(s.height, segment_box.height());
  const double x = segment_box.x_min + rng.uniform01() * (segment_box.width() - w);
  const double y = segment_box.y_min + rng.uniform01() * (segment_box.height() - h);
  return {x, y, std::min(x + w, segment_box.x_max),
          std::min(y + h, segment_box.y_max)};
}

}  // namespace angio
