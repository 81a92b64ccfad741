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

// Hand-written report snippets with hand-traced per-segment maxima.

#include <utility>
#include <vector>

#include "angio/detect/types.hpp"

namespace corpus {

using angio::DetectionClass;

struct Snippet {
  const char* text;
  std::vector<std::pair<DetectionClass, int>> expected;  // enumeration order
};

inline const std::vector<Snippet>& snippets() {
  using D = DetectionClass;
  static const std::vector<Snippet> s = {
      {"70% proximal LAD, 50% mid RCA.", {{D::ProxLAD, 70}, {D::MidRCA, 50}}},
      {"70% proximal LAD. 90% proximal LAD later.", {{D::ProxLAD, 90}}},
      {"mid RCA occluded", {{D::MidRCA, 100}}},
      {"50% in first diagonal", {}},
      {"Left main: 30% stenosis", {{D::LeftMain, 30}}},
      {"Distal left main 40% narrowing", {{D::LeftMain, 40}}},
      {"ostial left main 60%", {{D::LeftMain, 60}}},
      {"Ostial RCA 80% stenosis", {{D::ProxRCA, 80}}},
      {"90% stenosis of the ostial LAD", {{D::ProxLAD, 90}}},
      {"Mid LAD 60% stenosis", {{D::MidLAD, 60}}},
      {"distal LAD with 45% disease", {{D::DistLAD, 45}}},
      {"proximal circumflex 75% lesion", {{D::ProxLCx, 75}}},
      {"Mid circumflex 65% stenosis", {{D::DistLCx, 65}}},
      {"distal LCx 30%", {{D::DistLCx, 30}}},
      {"proximal RCA 20% plaque", {{D::ProxRCA, 20}}},
      {"distal RCA 85% stenosis", {{D::DistRCA, 85}}},
      {"PDA 70% stenosis", {{D::PDA, 70}}},
      {"right posterior descending artery 40%", {{D::PDA, 40}}},
      {"posterolateral branch 60% stenosis", {{D::Posterolateral, 60}}},
      {"RPL 50%", {{D::Posterolateral, 50}}},
      {"PL branch occluded", {{D::Posterolateral, 100}}},
      {"pLAD 80%", {{D::ProxLAD, 80}}},
      {"LAD proximal 70%", {{D::ProxLAD, 70}}},
      {"PROXIMAL LAD 70% STENOSIS", {{D::ProxLAD, 70}}},
      {"Severe stenosis of the mid LAD", {}},
      {"Mild luminal irregularities in the RCA", {}},
      {"obstructive disease in the mid LAD", {}},
      {"no significant disease", {}},
      {"", {}},
      {"Thrombus in the proximal RCA", {{D::ProxRCA, 100}}},
      {"Total obstruction of the distal LAD", {{D::DistLAD, 100}}},
      {"CTO of the mid RCA", {{D::MidRCA, 100}}},
      {"Occluded distal RCA", {{D::DistRCA, 100}}},
      {"Proximal RCA with thrombotic occlusion", {{D::ProxRCA, 100}}},
      {"OM1 95% stenosis", {}},
      {"Ramus 80% stenosis", {}},
      {"SVG to OM 99% stenosis", {}},
      {"LIMA to LAD patent", {}},
      {"left PDA 80% stenosis", {}},
      {"D1 70% and mid LAD 40%", {{D::MidLAD, 40}}},
      {"Proximal LAD 50% stenosis, mid LAD 70% stenosis, distal LAD 40% stenosis",
       {{D::ProxLAD, 50}, {D::MidLAD, 70}, {D::DistLAD, 40}}},
      {"Mid RCA 30%. Mid RCA 80%. Mid RCA 50%", {{D::MidRCA, 80}}},
      {"Mid LAD 40% stenosis. Proximal LAD occluded", {{D::ProxLAD, 100}, {D::MidLAD, 40}}},
      {"50% mid LAD and 80% proximal RCA", {{D::MidLAD, 50}, {D::ProxRCA, 80}}},
      {"Proximal and mid LAD 70%", {{D::MidLAD, 70}}},
      {"stenosis of 95 % in the mid RCA", {{D::MidRCA, 95}}},
      {"The proximal LAD has a 99.5% stenosis", {{D::ProxLAD, 99}}},
      {"150% proximal LAD", {}},
      {"LM 50%, LAD 30%", {{D::LeftMain, 50}}},
      {"Left anterior descending artery, proximal 60% stenosis", {}},
      {"LCx: 70% stenosis in the proximal circumflex", {{D::ProxLCx, 70}}},
      {"Distal circumflex 70%", {{D::DistLCx, 70}}},
  };
  return s;
}

}  // namespace corpus
