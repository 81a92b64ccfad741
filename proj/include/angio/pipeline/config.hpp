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

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "angio/backends/external.hpp"
#include "angio/core/error.hpp"
#include "angio/detect/crop.hpp"
#include "angio/detect/postprocess.hpp"
#include "angio/metrics/bootstrap.hpp"
#include "angio/severity/severity.hpp"

namespace angio {

struct PipelineConfig {
  std::map<Stage, BackendDescriptor> backends;  // vesselseg optional
  double detector_score_threshold = 0.5;
  double assignment_min_iou = kAssignmentMinIou;
  double obstructive_threshold = kDefaultObstructiveThreshold;
  BootstrapOptions bootstrap;
  std::vector<AspectRatio> aspect_ratios{kAllAspectRatios.begin(), kAllAspectRatios.end()};
  int analysis_side = 512;
  int parallelism = 1;
  std::string keyword_table;  // empty = built-in table

  /// Every learned stage answered from ground truth; vessel masking off.
  static PipelineConfig oracle_defaults() {
    PipelineConfig c;
    for (Stage s : {Stage::Projection, Stage::Anatomy, Stage::Detect3a, Stage::Detect3b,
                    Stage::Severity})
      c.backends[s] = BackendDescriptor{s, BackendKind::Oracle, {}, {}, kDefaultTimeoutMs};
    return c;
  }

  void validate() const {
    auto check = [](bool ok, const std::string& what) {
      require(ok, "config: " + what, ErrorKind::kConfig);
    };
    for (Stage s : {Stage::Projection, Stage::Anatomy, Stage::Detect3a, Stage::Detect3b,
                    Stage::Severity})
      check(backends.count(s) == 1, "missing backend for stage " + to_string(s));
    check(detector_score_threshold >= 0.0 && detector_score_threshold <= 1.0,
          "detector_score_threshold must be in [0, 1]");
    check(assignment_min_iou >= 0.0 && assignment_min_iou <= 1.0,
          "assignment_min_iou must be in [0, 1]");
    check(obstructive_threshold >= 0.0 && obstructive_threshold <= 100.0,
          "obstructive_threshold must be in [0, 100]");
    check(bootstrap.iterations >= 1, "bootstrap iterations must be >= 1");
    check(bootstrap.fraction > 0.0 && bootstrap.fraction <= 1.0,
          "bootstrap fraction must be in (0, 1]");
    check(!aspect_ratios.empty(), "aspect_ratios must be non-empty");
    check(analysis_side >= 16 && analysis_side <= 4096, "analysis_side must be in [16, 4096]");
    check(parallelism >= 1 && parallelism <= 256, "parallelism must be in [1, 256]");
  }
};

inline nlohmann::json config_to_json(const PipelineConfig& c) {
  nlohmann::json j;
  auto& b = j["backends"] = nlohmann::json::object();
  for (const auto& [stage, d] : c.backends) b[to_string(stage)] = descriptor_to_json(d);
  j["detector_score_threshold"] = c.detector_score_threshold;
  j["assignment_min_iou"] = c.assignment_min_iou;
  j["obstructive_threshold"] = c.obstructive_threshold;
  j["bootstrap"] = {{"seed", c.bootstrap.seed},
                    {"iterations", c.bootstrap.iterations},
                    {"fraction", c.bootstrap.fraction}};
  auto& ar = j["aspect_ratios"] = nlohmann::json::array();
  for (auto a : c.aspect_ratios) ar.push_back(aspect_id(a));
  j["analysis_side"] = c.analysis_side;
  j["parallelism"] = c.parallelism;
  j["keyword_table"] = c.keyword_table;
  return j;
}

/// Keys absent from the document keep the values already in base.
inline PipelineConfig config_from_json(const nlohmann::json& j,
                                       PipelineConfig base = PipelineConfig::oracle_defaults()) {
  require(j.is_object(), "config must be a JSON object", ErrorKind::kConfig);
  static const char* known[] = {"backends", "detector_score_threshold", "assignment_min_iou",
                                "obstructive_threshold", "bootstrap", "aspect_ratios",
                                "analysis_side", "parallelism", "keyword_table"};
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    require(ok, "config: unknown key '" + k + "'", ErrorKind::kConfig);
  }
  try {
    if (j.contains("backends")) {
      for (const auto& [name, d] : j.at("backends").items()) {
        const auto stage = parse_enum<Stage>(name);
        require(stage.has_value(), "config: unknown backend stage '" + name + "'",
                ErrorKind::kConfig);
        base.backends[*stage] = descriptor_from_json(*stage, d);
      }
    }
    base.detector_score_threshold =
        j.value("detector_score_threshold", base.detector_score_threshold);
    base.assignment_min_iou = j.value("assignment_min_iou", base.assignment_min_iou);
    base.obstructive_threshold = j.value("obstructive_threshold", base.obstructive_threshold);
    if (j.contains("bootstrap")) {
      const auto& bs = j.at("bootstrap");
      base.bootstrap.seed = bs.value("seed", base.bootstrap.seed);
      base.bootstrap.iterations = bs.value("iterations", base.bootstrap.iterations);
      base.bootstrap.fraction = bs.value("fraction", base.bootstrap.fraction);
    }
    if (j.contains("aspect_ratios")) {
      base.aspect_ratios.clear();
      for (int id : j.at("aspect_ratios").get<std::vector<int>>()) {
        require(id >= 1 && id <= 3, "config: aspect ratio ids are 1, 2, 3", ErrorKind::kConfig);
        const auto a = aspect_from_id(id);
        if (std::find(base.aspect_ratios.begin(), base.aspect_ratios.end(), a) ==
            base.aspect_ratios.end())
          base.aspect_ratios.push_back(a);
      }
      std::sort(base.aspect_ratios.begin(), base.aspect_ratios.end());
    }
    base.analysis_side = j.value("analysis_side", base.analysis_side);
    base.parallelism = j.value("parallelism", base.parallelism);
    base.keyword_table = j.value("keyword_table", base.keyword_table);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kConfig, std::string("config: ") + e.what());
  }
  base.validate();
  return base;
}

inline PipelineConfig load_config(const std::filesystem::path& p) {
  std::ifstream in(p);
  require(in.good(), "cannot read config " + p.string(), ErrorKind::kConfig);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kConfig, "malformed config " + p.string() + ": " + e.what());
  }
  return config_from_json(j);
}

/// FNV-1a over the canonical JSON form, as 16 hex digits.
inline std::string config_hash(const PipelineConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_json(c).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace angio
