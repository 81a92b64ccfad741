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
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "angio/core/error.hpp"

namespace angio {

namespace detail {

inline std::pair<std::size_t, std::size_t> count_classes(
    std::span<const int> labels) {
  std::size_t pos = 0;
  for (int l : labels) pos += l ? 1 : 0;
  return {pos, labels.size() - pos};
}

inline void check_binary_inputs(std::span<const double> scores,
                                std::span<const int> labels, const char* who) {
  require(scores.size() == labels.size(),
          std::string(who) + ": scores and labels differ in length");
  for (double s : scores)
    require(!std::isnan(s), std::string(who) + ": NaN score");
  const auto [pos, neg] = count_classes(labels);
  require(pos > 0 && neg > 0,
          std::string(who) + ": both label classes must be present");
}

}  // namespace detail

/// ROC AUC as the Mann-Whitney statistic with midranks: the probability a
/// positive outscores a negative, ties counting one half.
inline double roc_auc(std::span<const double> scores,
                      std::span<const int> labels) {
  detail::check_binary_inputs(scores, labels, "roc_auc");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum_pos = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (double(i + 1) + double(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]]) rank_sum_pos += midrank;
    i = j;
  }
  const auto [pos, neg] = detail::count_classes(labels);
  const double u = rank_sum_pos - double(pos) * double(pos + 1) / 2.0;
  return u / (double(pos) * double(neg));
}

/// Area under the precision-recall curve as average precision: the sum over
/// distinct score thresholds of (recall step) x precision.
inline double pr_auc(std::span<const double> scores,
                     std::span<const int> labels) {
  detail::check_binary_inputs(scores, labels, "pr_auc");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const auto [pos, neg] = detail::count_classes(labels);
  std::size_t tp = 0, fp = 0;
  double ap = 0.0, prev_recall = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      if (labels[order[j]])
        ++tp;
      else
        ++fp;
      ++j;
    }
    const double recall = double(tp) / double(pos);
    const double precision = double(tp) / double(tp + fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

}  // namespace angio
