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
#include <cstddef>
#include <span>
#include <vector>

#include "angio/core/error.hpp"

namespace angio {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

/// Per-class precision/recall/F1 with support-weighted averages. Rates with
/// an empty denominator are reported as 0.
template <typename Label>
struct ClassificationReport {
  std::vector<Label> classes;
  std::vector<ClassMetrics> per_class;
  std::vector<std::vector<std::size_t>> confusion;  // [truth][predicted]
  ClassMetrics weighted;
  double accuracy = 0.0;
};

template <typename Label>
ClassificationReport<Label> classification_report(
    std::span<const Label> preds, std::span<const Label> truth,
    std::span<const Label> classes) {
  require(preds.size() == truth.size(),
          "classification_report: prediction/truth length mismatch");
  const std::size_t k = classes.size();
  auto index_of = [&](const Label& l) {
    auto it = std::find(classes.begin(), classes.end(), l);
    require(it != classes.end(), "classification_report: label not in classes");
    return static_cast<std::size_t>(it - classes.begin());
  };

  ClassificationReport<Label> r;
  r.classes.assign(classes.begin(), classes.end());
  r.confusion.assign(k, std::vector<std::size_t>(k, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto t = index_of(truth[i]);
    const auto p = index_of(preds[i]);
    ++r.confusion[t][p];
    correct += t == p ? 1 : 0;
  }
  r.accuracy = preds.empty() ? 0.0 : double(correct) / double(preds.size());

  std::size_t total = 0;
  r.per_class.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t row = 0, col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += r.confusion[c][j];
      col += r.confusion[j][c];
    }
    const std::size_t tp = r.confusion[c][c];
    auto& m = r.per_class[c];
    m.support = row;
    m.precision = col ? double(tp) / double(col) : 0.0;
    m.recall = row ? double(tp) / double(row) : 0.0;
    m.f1 = m.precision + m.recall > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    total += row;
  }
  if (total > 0) {
    for (const auto& m : r.per_class) {
      const double w = double(m.support) / double(total);
      r.weighted.precision += w * m.precision;
      r.weighted.recall += w * m.recall;
      r.weighted.f1 += w * m.f1;
    }
  }
  r.weighted.support = total;
  return r;
}

}  // namespace angio
