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
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "angio/classify/classes.hpp"
#include "angio/core/base64.hpp"
#include "angio/core/enum.hpp"
#include "angio/core/error.hpp"
#include "angio/detect/types.hpp"
#include "angio/ingest/frame.hpp"
#include "angio/vesselmask/vesselmask.hpp"

namespace angio {

/// The learned stages that sit behind a backend.
enum class Stage { Projection, Anatomy, Detect3a, Detect3b, Severity, VesselSeg };

template <>
struct EnumNames<Stage> {
  static constexpr std::array<std::string_view, 6> names = {
      "projection", "anatomy", "detect_3a", "detect_3b", "severity", "vesselseg"};
};

constexpr bool is_detect_stage(Stage s) noexcept {
  return s == Stage::Detect3a || s == Stage::Detect3b;
}

/// Class probabilities ordered by the stage's class enumeration.
struct ClassScores {
  std::vector<double> scores;
  bool operator==(const ClassScores&) const = default;
};

struct Percent {
  double value = 0.0;
  bool operator==(const Percent&) const = default;
};

using Detections = std::vector<Detection>;
using Payload = std::variant<ClassScores, Detections, Percent, ProbabilityMap>;

struct InferenceRequest {
  Stage stage = Stage::Projection;
  std::string request_id;
  Frame image;
  nlohmann::json meta = nlohmann::json::object();
};

struct InferenceResponse {
  std::string request_id;
  Stage stage = Stage::Projection;
  Payload payload;
};

inline std::size_t class_count(Stage s) {
  switch (s) {
    case Stage::Projection: return enum_count<ProjectionClass>;
    case Stage::Anatomy: return enum_count<AnatomyClass>;
    default: break;
  }
  return 0;
}

inline std::string_view class_name(Stage s, std::size_t i) {
  return s == Stage::Projection ? name_of(from_ordinal<ProjectionClass>(i))
                                : name_of(from_ordinal<AnatomyClass>(i));
}

inline std::optional<std::size_t> class_index(Stage s, std::string_view name) {
  if (s == Stage::Projection) {
    if (auto c = parse_enum<ProjectionClass>(name)) return ordinal(*c);
  } else if (s == Stage::Anatomy) {
    if (auto c = parse_enum<AnatomyClass>(name)) return ordinal(*c);
  }
  return std::nullopt;
}

/// Schema checks on a backend answer. Empty result means valid.
inline std::vector<std::string> validate_response(Stage stage,
                                                  const Payload& payload) {
  std::vector<std::string> diags;
  switch (stage) {
    case Stage::Projection:
    case Stage::Anatomy: {
      const auto* cs = std::get_if<ClassScores>(&payload);
      if (!cs) return {"payload type does not match stage"};
      if (cs->scores.size() != class_count(stage))
        diags.push_back("wrong number of class scores");
      double sum = 0.0;
      bool range_ok = true;
      for (double s : cs->scores) {
        if (!(s >= 0.0 && s <= 1.0)) range_ok = false;
        sum += s;
      }
      if (!range_ok) diags.push_back("score outside [0, 1]");
      if (!(std::abs(sum - 1.0) <= 1e-6)) diags.push_back("unnormalized scores");
      break;
    }
    case Stage::Detect3a:
    case Stage::Detect3b: {
      const auto* dets = std::get_if<Detections>(&payload);
      if (!dets) return {"payload type does not match stage"};
      for (const auto& d : *dets) {
        if (!d.box.valid()) diags.push_back("degenerate box");
        if (!(d.score >= 0.0 && d.score <= 1.0))
          diags.push_back("detection score outside [0, 1]");
      }
      break;
    }
    case Stage::Severity: {
      const auto* p = std::get_if<Percent>(&payload);
      if (!p) return {"payload type does not match stage"};
      if (!(p->value >= 0.0 && p->value <= 100.0))
        diags.push_back("percent outside [0, 100]");
      break;
    }
    case Stage::VesselSeg: {
      const auto* m = std::get_if<ProbabilityMap>(&payload);
      if (!m) return {"payload type does not match stage"};
      if (m->width < 1 || m->height < 1 ||
          m->values.size() != std::size_t(m->width) * std::size_t(m->height))
        diags.push_back("probability map size mismatch");
      for (double v : m->values) {
        if (!(v >= 0.0 && v <= 1.0)) {
          diags.push_back("probability outside [0, 1]");
          break;
        }
      }
      break;
    }
  }
  return diags;
}

// --- JSON encoding ---------------------------------------------------------
//
// request:  {"stage", "request_id", "width", "height", "pixels_b64", "meta"}
// response: {"request_id", "stage", "payload"}
//
// payload by stage:
//   projection/anatomy  {"<ClassName>": probability, ...}  (absent = 0)
//   detect_3a/detect_3b [{"class", "x_min", "y_min", "x_max", "y_max", "score"}]
//   severity            {"percent": number}
//   vesselseg           {"width", "height", "values": [row-major numbers]}

inline nlohmann::json request_to_json(const InferenceRequest& r) {
  return {{"stage", to_string(r.stage)},
          {"request_id", r.request_id},
          {"width", r.image.width()},
          {"height", r.image.height()},
          {"pixels_b64", base64::encode(r.image.pixels())},
          {"meta", r.meta}};
}

inline InferenceRequest request_from_json(const nlohmann::json& j) {
  try {
    InferenceRequest r;
    r.stage = parse_enum_or_throw<Stage>(j.at("stage").get<std::string>(), "stage");
    r.request_id = j.at("request_id").get<std::string>();
    const int w = j.at("width").get<int>();
    const int h = j.at("height").get<int>();
    r.image = Frame(w, h, base64::decode(j.at("pixels_b64").get<std::string>()));
    r.meta = j.value("meta", nlohmann::json::object());
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kMalformed, std::string("malformed request: ") + e.what());
  } catch (const Error& e) {
    fail(ErrorKind::kMalformed, std::string("malformed request: ") + e.what());
  }
}

inline nlohmann::json payload_to_json(Stage stage, const Payload& payload) {
  return std::visit(
      [&](const auto& p) -> nlohmann::json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ClassScores>) {
          nlohmann::json o = nlohmann::json::object();
          for (std::size_t i = 0; i < p.scores.size() && i < class_count(stage); ++i)
            o[std::string(class_name(stage, i))] = p.scores[i];
          return o;
        } else if constexpr (std::is_same_v<T, Detections>) {
          nlohmann::json a = nlohmann::json::array();
          for (const auto& d : p)
            a.push_back({{"class", to_string(d.cls)},
                         {"x_min", d.box.x_min},
                         {"y_min", d.box.y_min},
                         {"x_max", d.box.x_max},
                         {"y_max", d.box.y_max},
                         {"score", d.score}});
          return a;
        } else if constexpr (std::is_same_v<T, Percent>) {
          return {{"percent", p.value}};
        } else {
          return {{"width", p.width}, {"height", p.height}, {"values", p.values}};
        }
      },
      payload);
}

inline Payload payload_from_json(Stage stage, const nlohmann::json& j,
                                 std::size_t frame_index = 0) {
  switch (stage) {
    case Stage::Projection:
    case Stage::Anatomy: {
      require(j.is_object(), "class-score payload must be an object",
              ErrorKind::kMalformed);
      ClassScores cs;
      cs.scores.assign(class_count(stage), 0.0);
      for (const auto& [k, v] : j.items()) {
        const auto idx = class_index(stage, k);
        require(idx.has_value(), "unknown class '" + k + "'", ErrorKind::kMalformed);
        cs.scores[*idx] = v.get<double>();
      }
      return cs;
    }
    case Stage::Detect3a:
    case Stage::Detect3b: {
      require(j.is_array(), "detections payload must be an array",
              ErrorKind::kMalformed);
      Detections dets;
      for (const auto& e : j) {
        Detection d;
        d.frame_index = frame_index;
        d.cls = parse_enum_or_throw<DetectionClass>(e.at("class").get<std::string>(),
                                                    "detection class");
        d.box = {e.at("x_min").get<double>(), e.at("y_min").get<double>(),
                 e.at("x_max").get<double>(), e.at("y_max").get<double>()};
        d.score = e.at("score").get<double>();
        dets.push_back(d);
      }
      return dets;
    }
    case Stage::Severity:
      return Percent{j.at("percent").get<double>()};
    case Stage::VesselSeg: {
      ProbabilityMap m;
      m.width = j.at("width").get<int>();
      m.height = j.at("height").get<int>();
      m.values = j.at("values").get<std::vector<double>>();
      return m;
    }
  }
  fail(ErrorKind::kMalformed, "unknown stage");
}

inline nlohmann::json response_to_json(const InferenceResponse& r) {
  return {{"request_id", r.request_id},
          {"stage", to_string(r.stage)},
          {"payload", payload_to_json(r.stage, r.payload)}};
}

inline InferenceResponse response_from_json(const nlohmann::json& j,
                                            std::size_t frame_index = 0) {
  try {
    InferenceResponse r;
    r.request_id = j.at("request_id").get<std::string>();
    r.stage = parse_enum_or_throw<Stage>(j.at("stage").get<std::string>(), "stage");
    r.payload = payload_from_json(r.stage, j.at("payload"), frame_index);
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kMalformed, std::string("malformed response: ") + e.what());
  }
}

}  // namespace angio
