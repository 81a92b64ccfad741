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
// Scripted NDJSON backend for the external transport tests.
//
//   stub_backend STAGE MODE [STATE_FILE]
//
// MODE is one of
//   ok         answer every request with a fixed valid payload
//   slow       read the request and never answer
//   garbage    answer with a line that is not JSON
//   wrong-id   answer with a different request id
//   crash-once exit without answering the first time STATE_FILE is absent
//   invalid    answer with a payload that fails schema validation

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "angio/backends/wire.hpp"

namespace {

angio::Payload fixed_payload(angio::Stage stage, const angio::InferenceRequest& req,
                             bool valid) {
  using angio::Stage;
  switch (stage) {
    case Stage::Projection:
    case Stage::Anatomy: {
      angio::ClassScores s;
      s.scores.assign(angio::class_count(stage), 0.0);
      s.scores[2] = valid ? 1.0 : 0.5;
      return s;
    }
    case Stage::Detect3a:
    case Stage::Detect3b: {
      angio::Detection d;
      d.cls = angio::DetectionClass::ProxLAD;
      d.box = {4, 4, 20, 12};
      d.score = valid ? 0.9 : 1.5;
      return angio::Detections{d};
    }
    case Stage::Severity:
      return angio::Percent{valid ? 42.0 : 140.0};
    case Stage::VesselSeg: {
      angio::ProbabilityMap m;
      m.width = req.image.width();
      m.height = req.image.height();
      m.values.assign(std::size_t(m.width) * m.height, 0.0);
      for (std::size_t i = 0; i < m.values.size(); i += 2) m.values[i] = 1.0;
      return m;
    }
  }
  return angio::Percent{0.0};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: stub_backend STAGE MODE [STATE_FILE]\n";
    return 2;
  }
  const auto stage = angio::parse_enum<angio::Stage>(argv[1]);
  const std::string mode = argv[2];
  if (!stage) return 2;

  std::string line;
  while (std::getline(std::cin, line)) {
    const auto req = angio::request_from_json(nlohmann::json::parse(line));
    if (mode == "slow") {
      std::this_thread::sleep_for(std::chrono::seconds(30));
      return 0;
    }
    if (mode == "crash-once" && argc > 3 && !std::filesystem::exists(argv[3])) {
      std::ofstream(argv[3]) << "crashed\n";
      return 3;
    }
    if (mode == "garbage") {
      std::cout << "this is not json\n" << std::flush;
      continue;
    }
    angio::InferenceResponse resp;
    resp.request_id = mode == "wrong-id" ? req.request_id + "-x" : req.request_id;
    resp.stage = *stage;
    resp.payload = fixed_payload(*stage, req, mode != "invalid");
    std::cout << angio::response_to_json(resp).dump() << '\n' << std::flush;
  }
  return 0;
}
