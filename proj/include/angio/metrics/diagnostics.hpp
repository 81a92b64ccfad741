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

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "angio/core/error.hpp"
#include "angio/metrics/bootstrap.hpp"
#include "angio/metrics/roc.hpp"

namespace angio {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
};

struct DiagnosticsReport {
  double threshold = 0.0;
  ConfusionCounts counts;
  std::optional<double> auc;
  std::optional<ConfidenceInterval> auc_ci;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> ppv;
  std::optional<double> npv;
  std::optional<double> diagnostic_odds_ratio;  // undefined if any cell is 0
};

inline std::optional<double> safe_ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return double(num) / double(den);
}

/// Rates derived from a 2x2 table alone (no AUC).
inline DiagnosticsReport diagnostics_from_counts(const ConfusionCounts& c,
                                                 double threshold = 0.0) {
  DiagnosticsReport r;
  r.threshold = threshold;
  r.counts = c;
  r.sensitivity = safe_ratio(c.tp, c.tp + c.fn);
  r.specificity = safe_ratio(c.tn, c.tn + c.fp);
  r.ppv = safe_ratio(c.tp, c.tp + c.fp);
  r.npv = safe_ratio(c.tn, c.tn + c.fn);
  if (c.tp && c.tn && c.fp && c.fn)
    r.diagnostic_odds_ratio =
        (double(c.tp) * double(c.tn)) / (double(c.fp) * double(c.fn));
  return r;
}

inline ConfusionCounts confusion_at(std::span<const double> scores,
                                    std::span<const int> labels,
                                    double threshold) {
  ConfusionCounts c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i])
      (predicted ? c.tp : c.fn)++;
    else
      (predicted ? c.fp : c.tn)++;
  }
  return c;
}

/// Confusion-table diagnostics at an inclusive threshold plus ROC AUC.
/// When bootstrap options are given the AUC also gets a 5-95% interval.
inline DiagnosticsReport binary_diagnostics(
    std::span<const double> scores, std::span<const int> labels,
    double threshold, std::optional<BootstrapOptions> ci = std::nullopt) {
  detail::check_binary_inputs(scores, labels, "binary_diagnostics");
  DiagnosticsReport r =
      diagnostics_from_counts(confusion_at(scores, labels, threshold), threshold);
  r.auc = roc_auc(scores, labels);
  if (ci) {
    std::vector<std::pair<double, int>> pairs;
    pairs.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
      pairs.emplace_back(scores[i], labels[i] ? 1 : 0);
    auto metric = [](std::span<const std::pair<double, int>> sample)
        -> std::optional<double> {
      std::vector<double> s;
      std::vector<int> l;
      std::size_t pos = 0;
      for (const auto& [score, label] : sample) {
        s.push_back(score);
        l.push_back(label);
        pos += label;
      }
      if (pos == 0 || pos == sample.size()) return std::nullopt;
      return roc_auc(s, l);
    };
    r.auc_ci = bootstrap_ci<std::pair<double, int>>(pairs, metric, *ci);
  }
  return r;
}

}  // namespace angio
