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
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "angio/detect/types.hpp"

namespace angio {

/// COCO-style IoU ladder 0.50:0.05:0.95.
inline constexpr std::array<double, 10> kIouLadder = {
    0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95};

struct ClassAp {
  DetectionClass cls = DetectionClass::Stenosis;
  std::size_t n_truth = 0;
  std::size_t n_pred = 0;
  std::optional<double> ap;     // mean over the IoU ladder
  std::optional<double> ap50;   // IoU >= 0.5 only
  std::array<double, kIouLadder.size()> per_threshold{};
};

struct MapReport {
  std::vector<ClassAp> per_class;
  std::optional<double> weighted_map;   // weights = ground-truth frequency
  std::optional<double> weighted_ap50;
};

/// All-point interpolated AP from detections ranked by descending score.
inline double average_precision_from_ranked(const std::vector<bool>& is_tp,
                                            std::size_t n_truth) {
  if (n_truth == 0) return 0.0;
  const std::size_t n = is_tp.size();
  std::vector<double> precision(n), recall(n);
  std::size_t tp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (is_tp[k]) ++tp;
    precision[k] = double(tp) / double(k + 1);
    recall[k] = double(tp) / double(n_truth);
  }
  for (std::size_t k = n; k-- > 1;)
    precision[k - 1] = std::max(precision[k - 1], precision[k]);
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ap += (recall[k] - prev_recall) * precision[k];
    prev_recall = recall[k];
  }
  return ap;
}

namespace detail {

// Greedy matching at one IoU threshold. preds must already be score-ranked.
inline std::vector<bool> greedy_match(std::span<const Detection* const> preds,
                                      std::span<const Detection* const> truth,
                                      double threshold) {
  std::vector<bool> used(truth.size(), false);
  std::vector<bool> tp(preds.size(), false);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    std::size_t best = truth.size();
    double best_iou = -1.0;
    for (std::size_t j = 0; j < truth.size(); ++j) {
      if (used[j] || truth[j]->frame_index != preds[i]->frame_index) continue;
      const double v = iou(preds[i]->box, truth[j]->box);
      if (v > best_iou) {
        best_iou = v;
        best = j;
      }
    }
    if (best < truth.size() && best_iou >= threshold) {
      used[best] = true;
      tp[i] = true;
    }
  }
  return tp;
}

}  // namespace detail

inline ClassAp evaluate_class(std::span<const Detection> preds,
                              std::span<const Detection> truth,
                              DetectionClass cls) {
  std::vector<const Detection*> p, t;
  for (const auto& d : preds)
    if (d.cls == cls) p.push_back(&d);
  for (const auto& d : truth)
    if (d.cls == cls) t.push_back(&d);
  std::stable_sort(p.begin(), p.end(), [](const Detection* a, const Detection* b) {
    return a->score > b->score;
  });

  ClassAp out;
  out.cls = cls;
  out.n_truth = t.size();
  out.n_pred = p.size();
  if (t.empty()) return out;
  for (std::size_t k = 0; k < kIouLadder.size(); ++k) {
    const auto tp = detail::greedy_match(p, t, kIouLadder[k]);
    out.per_threshold[k] = average_precision_from_ranked(tp, t.size());
  }
  out.ap = std::accumulate(out.per_threshold.begin(), out.per_threshold.end(),
                           0.0) /
           double(kIouLadder.size());
  out.ap50 = out.per_threshold[0];
  return out;
}

/// Per-class AP over the IoU ladder plus the ground-truth-frequency weighted
/// mean. Classes without ground truth have undefined AP and carry no weight.
inline MapReport eval_map(std::span<const Detection> preds,
                          std::span<const Detection> truth,
                          std::span<const DetectionClass> classes) {
  MapReport report;
  double weighted = 0.0, weighted50 = 0.0;
  std::size_t total = 0;
  for (auto cls : classes) {
    auto c = evaluate_class(preds, truth, cls);
    if (c.ap) {
      weighted += *c.ap * double(c.n_truth);
      weighted50 += *c.ap50 * double(c.n_truth);
      total += c.n_truth;
    }
    report.per_class.push_back(c);
  }
  if (total > 0) {
    report.weighted_map = weighted / double(total);
    report.weighted_ap50 = weighted50 / double(total);
  }
  return report;
}

inline MapReport eval_map(std::span<const Detection> preds,
                          std::span<const Detection> truth) {
  const auto classes = all_values<DetectionClass>();
  return eval_map(preds, truth, classes);
}

}  // namespace angio
