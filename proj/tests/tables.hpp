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

// Reference tables written out row by row for table-fidelity checks.

#include <set>
#include <vector>

#include "angio/classify/classes.hpp"
#include "angio/detect/types.hpp"

namespace tables {

using angio::AnatomyClass;
using angio::DetectionClass;
using angio::ProjectionClass;

// Closed-open angle range [lo, hi); closed_hi also admits hi itself.
struct Range {
  double lo, hi;
  bool closed_hi;
  bool contains(double a) const { return a >= lo && (a < hi || (closed_hi && a == hi)); }
};

struct ProjectionRow {
  ProjectionClass cls;
  Range primary;
  Range secondary;
};

// Neighbouring bands share an edge; it belongs to the band starting there.
inline const std::vector<ProjectionRow>& projection_rows() {
  using P = ProjectionClass;
  const Range rao{-45, -15, false}, ap{-15, 15, false}, lao{15, 45, true};
  const Range lao_lat{70, 110, true}, rao_lat{-110, -70, true};
  const Range caudal{-45, -15, false}, straight{-15, 15, false}, cranial{15, 45, true};
  static const std::vector<ProjectionRow> rows = {
      {P::RAO_Cranial, rao, cranial},      {P::AP_Cranial, ap, cranial},
      {P::LAO_Cranial, lao, cranial},      {P::RAO_Straight, rao, straight},
      {P::AP, ap, straight},               {P::RAO_Caudal, rao, caudal},
      {P::AP_Caudal, ap, caudal},          {P::LAO_Caudal, lao, caudal},
      {P::LAO_Straight, lao, straight},    {P::LAO_Lateral, lao_lat, straight},
      {P::RAO_Lateral, rao_lat, straight},
  };
  return rows;
}

// One interior point per class, Other included.
struct AnglePoint {
  double primary, secondary;
  ProjectionClass expected;
};

inline const std::vector<AnglePoint>& interior_points() {
  using P = ProjectionClass;
  static const std::vector<AnglePoint> pts = {
      {-30, 30, P::RAO_Cranial}, {0, 30, P::AP_Cranial},     {30, 30, P::LAO_Cranial},
      {-30, 0, P::RAO_Straight}, {0, 0, P::AP},              {-30, -30, P::RAO_Caudal},
      {0, -30, P::AP_Caudal},    {30, -30, P::LAO_Caudal},   {30, 0, P::LAO_Straight},
      {90, 0, P::LAO_Lateral},   {-90, 0, P::RAO_Lateral},   {60, 0, P::Other},
  };
  return pts;
}

struct ExclusionRow {
  ProjectionClass projection;
  AnatomyClass artery;
  std::set<DetectionClass> excluded;
};

inline const std::vector<ExclusionRow>& exclusion_rows() {
  using P = ProjectionClass;
  using D = DetectionClass;
  const auto R = AnatomyClass::RightCoronary, L = AnatomyClass::LeftCoronary;
  static const std::vector<ExclusionRow> rows = {
      {P::RAO_Cranial, R, {}},  {P::RAO_Cranial, L, {D::ProxLCx, D::DistLCx}},
      {P::AP_Cranial, R, {}},   {P::AP_Cranial, L, {D::ProxLCx, D::DistLCx}},
      {P::LAO_Cranial, R, {}},  {P::LAO_Cranial, L, {D::ProxLCx, D::DistLCx}},
      {P::RAO_Straight, R, {D::ProxRCA}},
      {P::RAO_Straight, L, {D::ProxLAD}},
      {P::AP, R, {}},           {P::AP, L, {D::MidLAD, D::DistLAD, D::DistLCx}},
      {P::RAO_Caudal, R, {}},   {P::RAO_Caudal, L, {D::MidLAD, D::DistLAD}},
      {P::AP_Caudal, R, {}},    {P::AP_Caudal, L, {D::DistLAD}},
      {P::LAO_Caudal, R, {}},   {P::LAO_Caudal, L, {D::MidLAD, D::DistLAD}},
      {P::LAO_Straight, R, {}}, {P::LAO_Straight, L, {D::ProxLCx, D::DistLCx}},
      {P::LAO_Lateral, R, {}},  {P::LAO_Lateral, L, {}},
      {P::RAO_Lateral, R, {}},  {P::RAO_Lateral, L, {}},
      {P::Other, R, {}},        {P::Other, L, {}},
  };
  return rows;
}

}  // namespace tables
