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

#include <array>
#include <string_view>

#include "angio/core/enum.hpp"

namespace angio {

enum class ProjectionClass {
  RAO_Cranial,
  AP_Cranial,
  LAO_Cranial,
  RAO_Straight,
  AP,
  RAO_Caudal,
  AP_Caudal,
  LAO_Caudal,
  LAO_Straight,
  LAO_Lateral,
  RAO_Lateral,
  Other,
};

template <>
struct EnumNames<ProjectionClass> {
  static constexpr std::array<std::string_view, 12> names = {
      "RAO_Cranial",  "AP_Cranial", "LAO_Cranial", "RAO_Straight",
      "AP",           "RAO_Caudal", "AP_Caudal",   "LAO_Caudal",
      "LAO_Straight", "LAO_Lateral", "RAO_Lateral", "Other"};
};

enum class AnatomyClass {
  LeftCoronary,
  RightCoronary,
  BypassGraft,
  StentingProcedure,
  Catheter,
  PigtailCatheter,
  Ventriculography,
  RadialArtery,
  FemoralArtery,
  Aortography,
  Other,
};

template <>
struct EnumNames<AnatomyClass> {
  static constexpr std::array<std::string_view, 11> names = {
      "LeftCoronary",     "RightCoronary",   "BypassGraft",
      "StentingProcedure", "Catheter",        "PigtailCatheter",
      "Ventriculography", "RadialArtery",    "FemoralArtery",
      "Aortography",      "Other"};
};

}  // namespace angio
