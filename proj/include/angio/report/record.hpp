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

#include <cstddef>
#include <string>

#include "angio/detect/types.hpp"

namespace angio {

/// Maximal stenosis for one coronary segment, as written in a report.
struct StenosisRecord {
  DetectionClass segment = DetectionClass::LeftMain;
  int percent = 0;
  std::string source_clause;
  std::size_t clause_offset = 0;

  bool operator==(const StenosisRecord&) const = default;
};

}  // namespace angio
