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
#include <cstddef>
#include <span>
#include <vector>

#include "angio/classify/classes.hpp"
#include "angio/core/enum.hpp"
#include "angio/core/error.hpp"

namespace angio {

/// Per-frame class probabilities reported by a projection or anatomy model.
template <typename Class>
struct FramePrediction {
  std::size_t frame_index = 0;
  std::array<double, enum_count<Class>> scores{};

  /// Highest-probability class; ties go to the earlier enumerator.
  Class argmax() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
      if (scores[i] > scores[best]) best = i;
    return from_ordinal<Class>(best);
  }

  static FramePrediction one_hot(Class c, std::size_t frame_index = 0) {
    FramePrediction p;
    p.frame_index = frame_index;
    p.scores[ordinal(c)] = 1.0;
    return p;
  }

  bool operator==(const FramePrediction&) const = default;
};

using ProjectionPrediction = FramePrediction<ProjectionClass>;
using AnatomyPrediction = FramePrediction<AnatomyClass>;

/// Checks scores lie in [0, 1] and sum to 1 within tolerance.
template <typename Class>
bool is_normalized(const FramePrediction<Class>& p, double tol = 1e-6) {
  double sum = 0.0;
  for (double s : p.scores) {
    if (!(s >= 0.0 && s <= 1.0)) return false;
    sum += s;
  }
  return std::abs(sum - 1.0) <= tol;
}

/// Video-level label: the most frequent per-frame argmax. Count ties go to
/// the class with the highest mean probability over all frames, and any
/// remaining tie to enumeration order.
template <typename Class>
Class vote(std::span<const FramePrediction<Class>> preds) {
  require(!preds.empty(), "vote: no frame predictions");
  constexpr std::size_t n = enum_count<Class>;
  std::array<std::size_t, n> counts{};
  std::array<double, n> prob_sum{};
  std::vector<double> column(preds.size());
  for (const auto& p : preds) ++counts[ordinal(p.argmax())];
  // Summed in sorted order so the result does not depend on frame order.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < preds.size(); ++f)
      column[f] = preds[f].scores[i];
    std::sort(column.begin(), column.end());
    for (double v : column) prob_sum[i] += v;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (counts[i] > counts[best] ||
        (counts[i] == counts[best] && prob_sum[i] > prob_sum[best]))
      best = i;
  }
  return from_ordinal<Class>(best);
}

inline ProjectionClass vote_projection(
    std::span<const ProjectionPrediction> preds) {
  return vote<ProjectionClass>(preds);
}

inline AnatomyClass vote_anatomy(std::span<const AnatomyPrediction> preds) {
  return vote<AnatomyClass>(preds);
}

/// Only left/right coronary videos continue to detection.
constexpr bool gate_coronary(AnatomyClass a) noexcept {
  return a == AnatomyClass::LeftCoronary || a == AnatomyClass::RightCoronary;
}

}  // namespace angio
