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
#include <optional>
#include <span>
#include <vector>

#include "angio/classify/classes.hpp"
#include "angio/core/error.hpp"
#include "angio/detect/types.hpp"

namespace angio {

/// General detector (3a) or the dedicated RCA-in-LAO detector (3b).
enum class DetectorId { General, RcaLao };

constexpr std::string_view detector_name(DetectorId d) noexcept {
  return d == DetectorId::RcaLao ? "3b" : "3a";
}

inline DetectorId route_detector(AnatomyClass a, ProjectionClass p) {
  require(a == AnatomyClass::LeftCoronary || a == AnatomyClass::RightCoronary,
          "detector routing requires a coronary anatomy");
  return a == AnatomyClass::RightCoronary && p == ProjectionClass::LAO_Straight
             ? DetectorId::RcaLao
             : DetectorId::General;
}

/// Segments that are foreshortened or not visible in a projection. Empty for
/// non-coronary anatomy.
inline std::span<const DetectionClass> excluded_segments(ProjectionClass p,
                                                         AnatomyClass a) {
  using D = DetectionClass;
  using P = ProjectionClass;
  static constexpr D kLcx[] = {D::ProxLCx, D::DistLCx};
  static constexpr D kRaoStraightLeft[] = {D::ProxLAD};
  static constexpr D kRaoStraightRight[] = {D::ProxRCA};
  static constexpr D kApLeft[] = {D::MidLAD, D::DistLAD, D::DistLCx};
  static constexpr D kMidDistLad[] = {D::MidLAD, D::DistLAD};
  static constexpr D kDistLad[] = {D::DistLAD};

  if (a == AnatomyClass::RightCoronary) {
    if (p == P::RAO_Straight) return kRaoStraightRight;
    return {};
  }
  if (a != AnatomyClass::LeftCoronary) return {};
  switch (p) {
    case P::RAO_Cranial:
    case P::AP_Cranial:
    case P::LAO_Cranial:
    case P::LAO_Straight:
      return kLcx;
    case P::RAO_Straight: return kRaoStraightLeft;
    case P::AP: return kApLeft;
    case P::RAO_Caudal:
    case P::LAO_Caudal:
      return kMidDistLad;
    case P::AP_Caudal: return kDistLad;
    case P::LAO_Lateral:
    case P::RAO_Lateral:
    case P::Other:
      break;
  }
  return {};
}

inline std::vector<Detection> apply_projection_exclusion(
    std::span<const Detection> dets, AnatomyClass a, ProjectionClass p) {
  const auto excluded = excluded_segments(p, a);
  std::vector<Detection> out;
  out.reserve(dets.size());
  for (const auto& d : dets)
    if (std::find(excluded.begin(), excluded.end(), d.cls) == excluded.end())
      out.push_back(d);
  return out;
}

inline std::vector<Detection> filter_by_score(std::span<const Detection> dets,
                                              double min_score) {
  std::vector<Detection> out;
  for (const auto& d : dets)
    if (d.score >= min_score) out.push_back(d);
  return out;
}

inline constexpr double kAssignmentMinIou = 0.20;

/// Pairs each Stenosis/Obstruction detection with the same-frame segment of
/// highest IoU, when that IoU reaches the minimum. IoU ties resolve to the
/// earlier segment class, then to input order.
inline std::vector<StenosisAssignment> assign_stenoses(
    std::span<const Detection> dets, double min_iou = kAssignmentMinIou) {
  std::vector<StenosisAssignment> out;
  for (const auto& lesion : dets) {
    if (!is_lesion(lesion.cls)) continue;
    const Detection* best = nullptr;
    double best_iou = -1.0;
    for (const auto& seg : dets) {
      if (!is_segment(seg.cls) || seg.frame_index != lesion.frame_index)
        continue;
      const double v = iou(lesion.box, seg.box);
      if (v > best_iou ||
          (v == best_iou && ordinal(seg.cls) < ordinal(best->cls))) {
        best = &seg;
        best_iou = v;
      }
    }
    if (best && best_iou >= min_iou)
      out.push_back({lesion, best->cls, best_iou});
  }
  return out;
}

}  // namespace angio
