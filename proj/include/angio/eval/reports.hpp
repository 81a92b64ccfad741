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

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "angio/backends/wire.hpp"
#include "angio/core/csv.hpp"
#include "angio/detect/eval_map.hpp"
#include "angio/eval/table.hpp"
#include "angio/metrics/agreement.hpp"
#include "angio/metrics/classification.hpp"
#include "angio/metrics/diagnostics.hpp"
#include "angio/report/record.hpp"
#include "angio/severity/severity.hpp"

namespace angio {

// --- output -----------------------------------------------------------------

/// Flattens nested objects to dotted names. Array elements are keyed by
/// their "class" or "segment" member when present, else by position.
inline void flatten_metrics(const nlohmann::json& j, const std::string& prefix,
                            std::vector<std::pair<std::string, std::string>>& out) {
  auto join = [&](const std::string& k) { return prefix.empty() ? k : prefix + "." + k; };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten_metrics(v, join(k), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto& e = j[i];
      std::string key = std::to_string(i);
      if (e.is_object() && e.contains("class") && e["class"].is_string())
        key = e["class"].get<std::string>();
      else if (e.is_object() && e.contains("segment") && e["segment"].is_string())
        key = e["segment"].get<std::string>();
      flatten_metrics(e, join(key), out);
    }
  } else if (j.is_null()) {
    out.emplace_back(prefix, "");
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else if (j.is_boolean()) {
    out.emplace_back(prefix, j.get<bool>() ? "1" : "0");
  } else if (j.is_number_integer() || j.is_number_unsigned()) {
    out.emplace_back(prefix, j.dump());
  } else {
    out.emplace_back(prefix, csv::num(j.get<double>()));
  }
}

inline void write_metrics_csv(std::ostream& out, const nlohmann::json& report) {
  std::vector<std::pair<std::string, std::string>> flat;
  flatten_metrics(report, "", flat);
  csv::write_row(out, {"metric", "value"});
  for (const auto& [k, v] : flat) csv::write_row(out, {k, v});
}

/// report.json plus report.csv (one metric per row) under the given stem.
inline void write_report(const nlohmann::json& report, const std::filesystem::path& stem) {
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  std::filesystem::path json_path = stem, csv_path = stem;
  json_path += ".json";
  csv_path += ".csv";
  std::ofstream j(json_path, std::ios::binary), c(csv_path, std::ios::binary);
  require(j.good() && c.good(), "cannot write report " + stem.string(), ErrorKind::kIo);
  j << report.dump(2) << '\n';
  write_metrics_csv(c, report);
  require(j.good() && c.good(), "cannot write report " + stem.string(), ErrorKind::kIo);
}

template <typename T>
nlohmann::json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

// --- classification -----------------------------------------------------------

template <typename Label>
nlohmann::json classification_json(const ClassificationReport<Label>& r) {
  nlohmann::json j;
  j["n"] = 0;
  std::size_t n = 0;
  auto& pc = j["per_class"] = nlohmann::json::array();
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    const auto& m = r.per_class[i];
    n += m.support;
    pc.push_back({{"class", to_string(r.classes[i])},
                  {"precision", m.precision},
                  {"recall", m.recall},
                  {"f1", m.f1},
                  {"support", m.support}});
  }
  j["n"] = n;
  j["accuracy"] = r.accuracy;
  j["weighted"] = {{"precision", r.weighted.precision},
                   {"recall", r.weighted.recall},
                   {"f1", r.weighted.f1}};
  nlohmann::json cm = nlohmann::json::array();
  for (const auto& row : r.confusion) cm.push_back(row);
  j["confusion"] = cm;
  return j;
}

namespace detail {

template <typename Label>
nlohmann::json eval_labels(const Table& pred, const Table& truth, const std::string& key,
                           const std::string& column) {
  const auto pk = pred.column(key), pl = pred.column(column);
  const auto tk = truth.column(key), tl = truth.column(column);
  std::map<std::string, Label> reference;
  for (std::size_t i = 0; i < truth.size(); ++i)
    reference[truth.at(i, tk)] = parse_enum_or_throw<Label>(truth.at(i, tl), column.c_str());
  std::vector<Label> p, t;
  std::size_t unmatched = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred.at(i, pl).empty()) continue;
    auto it = reference.find(pred.at(i, pk));
    if (it == reference.end()) {
      ++unmatched;
      continue;
    }
    p.push_back(parse_enum_or_throw<Label>(pred.at(i, pl), column.c_str()));
    t.push_back(it->second);
  }
  require(!p.empty(), "no predictions matched the truth table on '" + key + "'",
          ErrorKind::kInvalidInput);
  const auto classes = all_values<Label>();
  auto j = classification_json(
      classification_report<Label>(p, t, std::span<const Label>(classes)));
  j["unmatched_predictions"] = unmatched;
  return j;
}

}  // namespace detail

/// kind: the projection or anatomy stage; the label column has the same name.
inline nlohmann::json eval_classify(const Table& pred, const Table& truth, Stage kind,
                                    const std::string& key = "video_id") {
  if (kind == Stage::Projection)
    return detail::eval_labels<ProjectionClass>(pred, truth, key, "projection");
  require(kind == Stage::Anatomy, "eval-classify handles projection or anatomy",
          ErrorKind::kInvalidInput);
  return detail::eval_labels<AnatomyClass>(pred, truth, key, "anatomy");
}

// --- detection ----------------------------------------------------------------

namespace detail {

/// Image identity is (study_id, video_id, frame_index) using whichever of
/// those columns exist; frame_index of the result is a dense image id.
inline Detections detections_from_table(const Table& t,
                                        std::map<std::string, std::size_t>& images) {
  const auto study = t.find("study_id"), video = t.find("video_id");
  const auto frame = t.column("frame_index"), cls = t.column("class");
  const auto x0 = t.column("x_min"), y0 = t.column("y_min");
  const auto x1 = t.column("x_max"), y1 = t.column("y_max");
  const auto score = t.find("score");
  Detections out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::string key;
    if (study) key += t.at(i, *study);
    key += '|';
    if (video) key += t.at(i, *video);
    key += '|' + t.at(i, frame);
    auto [it, fresh] = images.try_emplace(key, images.size());
    (void)fresh;
    Detection d;
    d.frame_index = it->second;
    d.cls = parse_enum_or_throw<DetectionClass>(t.at(i, cls), "detection class");
    d.box = {t.number(i, x0), t.number(i, y0), t.number(i, x1), t.number(i, y1)};
    require(d.box.valid(), t.name() + ": degenerate box on row " + std::to_string(i + 2),
            ErrorKind::kInvalidInput);
    d.score = score ? t.number(i, *score) : 1.0;
    out.push_back(d);
  }
  return out;
}

}  // namespace detail

inline nlohmann::json map_json(const MapReport& r) {
  nlohmann::json j;
  auto& pc = j["per_class"] = nlohmann::json::array();
  for (const auto& c : r.per_class) {
    if (c.n_truth == 0 && c.n_pred == 0) continue;
    pc.push_back({{"class", to_string(c.cls)},
                  {"n_truth", c.n_truth},
                  {"n_pred", c.n_pred},
                  {"ap", opt_json(c.ap)},
                  {"ap50", opt_json(c.ap50)}});
  }
  j["weighted_map"] = opt_json(r.weighted_map);
  j["weighted_ap50"] = opt_json(r.weighted_ap50);
  return j;
}

/// With only_predicted_images set, ground truth on images that received no
/// prediction at all is ignored.
inline nlohmann::json eval_detect(const Table& pred, const Table& truth,
                                  bool only_predicted_images = false) {
  std::map<std::string, std::size_t> images;
  const Detections p = detail::detections_from_table(pred, images);
  const std::size_t predicted_images = images.size();
  Detections t = detail::detections_from_table(truth, images);
  if (only_predicted_images)
    std::erase_if(t, [&](const Detection& d) { return d.frame_index >= predicted_images; });
  auto j = map_json(eval_map(p, t));
  j["n_images"] = only_predicted_images ? predicted_images : images.size();
  return j;
}

// --- severity -----------------------------------------------------------------

struct SeverityPair {
  std::string study_id;
  DetectionClass segment = DetectionClass::LeftMain;
  double predicted = 0.0;
  double reference = 0.0;
};

struct SeverityJoin {
  std::vector<SeverityPair> pairs;  // study_id, then segment order
  std::size_t unmatched_predictions = 0;
  std::size_t unmatched_records = 0;
};

/// Pairs prediction and reference rows sharing study_id and segment. Both
/// tables need study_id, segment and percent columns.
inline SeverityJoin join_severity(const Table& pred, const Table& truth) {
  struct Side {
    std::vector<StenosisPrediction> preds;
    std::vector<StenosisRecord> records;
  };
  std::map<std::string, Side> by_study;
  {
    const auto s = pred.column("study_id"), g = pred.column("segment"),
               v = pred.column("percent");
    for (std::size_t i = 0; i < pred.size(); ++i) {
      StenosisPrediction p;
      p.level = PredictionLevel::Artery;
      p.segment = parse_enum_or_throw<DetectionClass>(pred.at(i, g), "segment");
      p.percent = pred.number(i, v);
      p.provenance = {pred.at(i, s)};
      by_study[pred.at(i, s)].preds.push_back(p);
    }
  }
  {
    const auto s = truth.column("study_id"), g = truth.column("segment"),
               v = truth.column("percent");
    for (std::size_t i = 0; i < truth.size(); ++i) {
      StenosisRecord r;
      r.segment = parse_enum_or_throw<DetectionClass>(truth.at(i, g), "segment");
      r.percent = int(std::lround(truth.number(i, v)));
      by_study[truth.at(i, s)].records.push_back(r);
    }
  }
  SeverityJoin out;
  for (const auto& [study, side] : by_study) {
    const auto m = match_records(side.preds, side.records);
    for (const auto& [p, r] : m.matched)
      out.pairs.push_back({study, p.segment, p.percent, double(r.percent)});
    out.unmatched_predictions += m.unmatched_predictions.size();
    out.unmatched_records += m.unmatched_records.size();
  }
  std::stable_sort(out.pairs.begin(), out.pairs.end(), [](const auto& a, const auto& b) {
    return std::pair(a.study_id, ordinal(a.segment)) < std::pair(b.study_id, ordinal(b.segment));
  });
  return out;
}

inline nlohmann::json diagnostics_json(const DiagnosticsReport& d) {
  nlohmann::json j{{"threshold", d.threshold},
                   {"tp", d.counts.tp},
                   {"fp", d.counts.fp},
                   {"tn", d.counts.tn},
                   {"fn", d.counts.fn},
                   {"auc", opt_json(d.auc)},
                   {"sensitivity", opt_json(d.sensitivity)},
                   {"specificity", opt_json(d.specificity)},
                   {"ppv", opt_json(d.ppv)},
                   {"npv", opt_json(d.npv)},
                   {"diagnostic_odds_ratio", opt_json(d.diagnostic_odds_ratio)}};
  if (d.auc_ci)
    j["auc_ci"] = {{"lower", d.auc_ci->lower},
                   {"upper", d.auc_ci->upper},
                   {"redraws", d.auc_ci->redraws}};
  else
    j["auc_ci"] = nullptr;
  return j;
}

inline nlohmann::json agreement_json(const AgreementReport& a) {
  return {{"n", a.n},
          {"pearson_r", opt_json(a.pearson_r)},
          {"icc", opt_json(a.icc)},
          {"icc_band", a.icc ? nlohmann::json(to_string(icc_interpretation(*a.icc)))
                             : nlohmann::json(nullptr)},
          {"mean_abs_diff", a.mean_abs_diff},
          {"mean_abs_diff_sd", a.mean_abs_diff_sd},
          {"mse", a.mse},
          {"mse_sd", a.mse_sd},
          {"bland_altman",
           {{"bias", a.bland_altman.bias},
            {"lower", a.bland_altman.lower},
            {"upper", a.bland_altman.upper}}}};
}

/// Obstructive-stenosis diagnostics (reference >= report_cutoff as the
/// label, prediction >= threshold as the call) and percent agreement.
/// Sections whose preconditions fail are null with a note.
inline nlohmann::json eval_severity(const SeverityJoin& join, double threshold,
                                    double report_cutoff = kReportObstructivePercent,
                                    std::optional<BootstrapOptions> ci = std::nullopt) {
  std::vector<double> pred, ref;
  std::vector<int> labels;
  for (const auto& p : join.pairs) {
    pred.push_back(p.predicted);
    ref.push_back(p.reference);
    labels.push_back(p.reference >= report_cutoff ? 1 : 0);
  }
  nlohmann::json j;
  j["n_matched"] = join.pairs.size();
  j["unmatched_predictions"] = join.unmatched_predictions;
  j["unmatched_records"] = join.unmatched_records;
  j["report_cutoff"] = report_cutoff;
  j["notes"] = nlohmann::json::array();
  try {
    j["diagnostics"] = diagnostics_json(binary_diagnostics(pred, labels, threshold, ci));
  } catch (const Error& e) {
    j["diagnostics"] = nullptr;
    j["notes"].push_back(std::string("diagnostics: ") + e.what());
  }
  try {
    j["agreement"] = agreement_json(agreement(pred, ref));
  } catch (const Error& e) {
    j["agreement"] = nullptr;
    j["notes"].push_back(std::string("agreement: ") + e.what());
  }
  return j;
}

inline nlohmann::json calibrate_json(const SeverityJoin& join,
                                     double report_cutoff = kReportObstructivePercent) {
  std::vector<double> pred;
  std::vector<int> labels;
  for (const auto& p : join.pairs) {
    pred.push_back(p.predicted);
    labels.push_back(p.reference >= report_cutoff ? 1 : 0);
  }
  const auto c = calibrate_threshold(pred, labels);
  return {{"threshold", c.threshold.value},
          {"f1", c.f1},
          {"n", pred.size()},
          {"report_cutoff", report_cutoff}};
}

}  // namespace angio
