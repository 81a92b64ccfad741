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
// Command-line front end: one subcommand per pipeline task.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "angio/eval/reports.hpp"
#include "angio/pipeline/run.hpp"
#include "angio/report/parser.hpp"
#include "angio/synth/synthgen.hpp"
#include "angio/synth/tables.hpp"
#include "angio/viz/overlay.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kPartial = 1, kInvalid = 2 };

// --- config overrides ---------------------------------------------------------

struct ConfigFlags {
  std::string config_path;
  std::vector<std::string> backends;  // stage=kind[:arg]
  std::optional<double> score_threshold;
  std::optional<double> assignment_iou;
  std::optional<double> obstructive_threshold;
  std::optional<int> side;
  std::optional<int> jobs;
  std::optional<std::string> aspect_ratios;
  std::optional<std::uint64_t> bootstrap_seed;
  std::optional<std::size_t> bootstrap_iterations;
  std::optional<double> bootstrap_fraction;
  std::optional<std::string> keywords;
  std::optional<int> timeout_ms;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "Pipeline config (JSON)");
    cmd->add_option("--backend", backends,
                    "Backend override stage=oracle | stage=constant:VALUE | "
                    "stage=external:COMMAND (repeatable)");
    cmd->add_option("--score-threshold", score_threshold, "Minimum detection score");
    cmd->add_option("--assignment-iou", assignment_iou, "Minimum stenosis/segment IoU");
    cmd->add_option("--threshold", obstructive_threshold, "Obstructive percent threshold");
    cmd->add_option("--side", side, "Analysis frame side in pixels");
    cmd->add_option("-j,--jobs", jobs, "Worker threads");
    cmd->add_option("--aspect-ratios", aspect_ratios, "Comma-separated crop ratio ids (1,2,3)");
    cmd->add_option("--bootstrap-seed", bootstrap_seed);
    cmd->add_option("--bootstrap-iterations", bootstrap_iterations);
    cmd->add_option("--bootstrap-fraction", bootstrap_fraction);
    cmd->add_option("--keywords", keywords, "Keyword table CSV");
    cmd->add_option("--timeout-ms", timeout_ms, "Timeout for external backends");
  }

  static json backend_override(const std::string& spec) {
    const auto eq = spec.find('=');
    angio::require(eq != std::string::npos && eq > 0, "--backend expects stage=kind[:arg]",
                   angio::ErrorKind::kConfig);
    const std::string rest = spec.substr(eq + 1);
    const auto colon = rest.find(':');
    const std::string kind = rest.substr(0, colon);
    json d{{"kind", kind}};
    if (colon != std::string::npos) {
      const std::string arg = rest.substr(colon + 1);
      if (kind == "external") {
        d["endpoint"] = arg;
      } else {
        // A bare word such as a class name is taken as a string.
        d["value"] = json::accept(arg) ? json::parse(arg) : json(arg);
      }
    }
    return d;
  }

  angio::PipelineConfig resolve() const {
    json j = json::object();
    if (!config_path.empty()) j = angio::config_to_json(angio::load_config(config_path));
    for (const auto& spec : backends) {
      const std::string stage = spec.substr(0, spec.find('='));
      j["backends"][stage] = backend_override(spec);
    }
    if (timeout_ms && j.contains("backends"))
      for (auto& [stage, d] : j["backends"].items())
        if (d.value("kind", "") == "external") d["timeout_ms"] = *timeout_ms;
    if (score_threshold) j["detector_score_threshold"] = *score_threshold;
    if (assignment_iou) j["assignment_min_iou"] = *assignment_iou;
    if (obstructive_threshold) j["obstructive_threshold"] = *obstructive_threshold;
    if (side) j["analysis_side"] = *side;
    if (jobs) j["parallelism"] = *jobs;
    if (keywords) j["keyword_table"] = *keywords;
    if (bootstrap_seed) j["bootstrap"]["seed"] = *bootstrap_seed;
    if (bootstrap_iterations) j["bootstrap"]["iterations"] = *bootstrap_iterations;
    if (bootstrap_fraction) j["bootstrap"]["fraction"] = *bootstrap_fraction;
    if (aspect_ratios) {
      json ids = json::array();
      std::string cur;
      for (char c : *aspect_ratios + ",") {
        if (c == ',') {
          if (!cur.empty()) {
            const auto v = angio::csv::parse_double(cur);
            angio::require(v.has_value(), "--aspect-ratios expects ids like 1,2,3",
                           angio::ErrorKind::kConfig);
            ids.push_back(int(*v));
          }
          cur.clear();
        } else if (c != ' ') {
          cur += c;
        }
      }
      j["aspect_ratios"] = ids;
    }
    return angio::config_from_json(j);
  }
};

const angio::KeywordTable& keyword_table(const angio::PipelineConfig& cfg,
                                         std::optional<angio::KeywordTable>& storage) {
  if (cfg.keyword_table.empty()) return angio::KeywordTable::defaults();
  storage = angio::KeywordTable::from_file(cfg.keyword_table);
  return *storage;
}

// --- subcommands ------------------------------------------------------------

int cmd_run(const std::vector<std::string>& studies, const std::string& out,
            const ConfigFlags& flags) {
  const auto cfg = flags.resolve();
  std::vector<fs::path> dirs(studies.begin(), studies.end());
  const auto result = angio::run_pipeline(cfg, dirs);
  angio::write_run(result, cfg, out);
  const auto& c = result.counts;
  std::cerr << "videos " << c.videos_in << ", gated " << c.gated_out << ", guidewire "
            << c.guidewire_excluded << ", failed " << c.videos_failed << ", stenoses "
            << c.stenoses_assigned << "\n";
  return result.partial_failure() ? kPartial : kOk;
}

struct SynthFlags {
  std::string out;
  std::size_t studies = 1;
  std::uint64_t seed = 1;
  angio::SynthConfig base;
  std::size_t max_stenoses = 3;
  std::vector<std::string> stenoses;  // SEGMENT:PERCENT[:POSITION]
  std::optional<std::size_t> peak;
};

angio::StenosisSpec parse_stenosis(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s + ":") {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  angio::require(parts.size() == 2 || parts.size() == 3,
                 "--stenosis expects SEGMENT:PERCENT[:POSITION]", angio::ErrorKind::kConfig);
  angio::StenosisSpec spec;
  spec.segment = angio::parse_enum_or_throw<angio::DetectionClass>(parts[0], "segment");
  const auto pct = angio::csv::parse_double(parts[1]);
  angio::require(pct && *pct >= 0 && *pct <= 100 && *pct == std::round(*pct),
                 "stenosis percent must be a whole number in [0, 100]",
                 angio::ErrorKind::kConfig);
  spec.narrowing = *pct / 100.0;
  if (parts.size() == 3) {
    const auto pos = angio::csv::parse_double(parts[2]);
    angio::require(pos.has_value(), "stenosis position must be a number",
                   angio::ErrorKind::kConfig);
    spec.position = *pos;
  }
  return spec;
}

int cmd_synth(const SynthFlags& f) {
  std::vector<angio::StenosisSpec> fixed;
  for (const auto& s : f.stenoses) fixed.push_back(parse_stenosis(s));
  std::vector<angio::GroundTruth> truths;
  for (std::size_t i = 0; i < f.studies; ++i) {
    angio::SynthConfig cfg = f.base;
    char id[32];
    std::snprintf(id, sizeof id, "S%04zu", i + 1);
    cfg.study_id = id;
    std::snprintf(id, sizeof id, "P%04zu", i + 1);
    cfg.patient_id = id;
    cfg.seed = f.seed + i;
    cfg.peak_index = f.peak;
    if (!fixed.empty()) {
      cfg.stenoses = fixed;
    } else if (f.max_stenoses > 0) {
      angio::Rng pick(cfg.seed ^ 0x5eedULL);
      cfg.stenoses = angio::random_stenoses(pick, 1 + pick.index(f.max_stenoses));
    }
    const auto study = angio::generate_study(cfg);
    angio::write_study(study, fs::path(f.out) / cfg.study_id);
    truths.push_back(study.truth);
  }
  angio::write_truth_tables(truths, f.out);
  std::cerr << "wrote " << f.studies << " studies to " << f.out << "\n";
  return kOk;
}

int cmd_parse_reports(const std::string& input, const std::string& out,
                      const std::string& diagnostics, const ConfigFlags& flags) {
  const auto cfg = flags.resolve();
  std::optional<angio::KeywordTable> storage;
  const auto& table = keyword_table(cfg, storage);
  const auto reports = angio::Table::read(input);
  const auto id_col = reports.column("study_id");
  const auto text_col = reports.find("report") ? *reports.find("report") : reports.column("text");
  std::ofstream rec(out, std::ios::binary);
  angio::require(rec.good(), "cannot write " + out, angio::ErrorKind::kIo);
  angio::csv::write_row(rec, {"study_id", "segment", "percent", "clause_offset", "clause"});
  std::ofstream diag;
  if (!diagnostics.empty()) {
    diag.open(diagnostics, std::ios::binary);
    angio::require(diag.good(), "cannot write " + diagnostics, angio::ErrorKind::kIo);
    angio::csv::write_row(diag, {"study_id", "clause_offset", "clause", "message"});
  }
  std::size_t n_records = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto parsed = angio::parse_report_detailed(reports.at(i, text_col), table);
    for (const auto& r : parsed.records) {
      angio::csv::write_row(rec, {reports.at(i, id_col), angio::to_string(r.segment),
                                  angio::csv::num(r.percent), angio::csv::num(r.clause_offset),
                                  r.source_clause});
      ++n_records;
    }
    if (!diagnostics.empty())
      for (const auto& d : parsed.diagnostics)
        angio::csv::write_row(diag, {reports.at(i, id_col), angio::csv::num(d.clause_offset),
                                     d.clause, d.message});
  }
  std::cerr << "parsed " << reports.size() << " reports into " << n_records << " records\n";
  return kOk;
}

int cmd_overlay(const std::string& study_dir, const std::string& detections,
                const std::string& out, const std::string& video_filter, int thickness) {
  const auto study = angio::load_study(study_dir);
  const auto table = angio::Table::read(detections);
  const auto study_col = table.find("study_id"), video_col = table.find("video_id");
  const auto frame_col = table.column("frame_index"), cls_col = table.column("class");
  const auto x0 = table.column("x_min"), y0 = table.column("y_min");
  const auto x1 = table.column("x_max"), y1 = table.column("y_max");
  // (video_id, frame) -> boxes
  std::map<std::pair<std::string, std::size_t>,
           std::vector<std::pair<angio::DetectionClass, angio::BoundingBox>>>
      boxes;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (study_col && table.at(i, *study_col) != study.study_id) continue;
    const std::string vid = video_col ? table.at(i, *video_col)
                                      : (study.videos.empty() ? "" : study.videos.front().metadata.video_id);
    if (!video_filter.empty() && vid != video_filter) continue;
    boxes[{vid, std::size_t(table.number(i, frame_col))}].push_back(
        {angio::parse_enum_or_throw<angio::DetectionClass>(table.at(i, cls_col), "class"),
         {table.number(i, x0), table.number(i, y0), table.number(i, x1), table.number(i, y1)}});
  }
  fs::create_directories(out);
  std::size_t written = 0;
  for (const auto& v : study.videos) {
    for (const auto& f : v.frames) {
      auto it = boxes.find({v.metadata.video_id, f.index()});
      if (it == boxes.end()) continue;
      auto img = angio::image_io::RgbImage::from_gray(f);
      for (const auto& [cls, box] : it->second)
        angio::draw_box(img, box, angio::class_color(cls), thickness);
      char name[64];
      std::snprintf(name, sizeof name, "_frame_%04zu.png", f.index());
      angio::image_io::write_png(fs::path(out) / (v.metadata.video_id + name), img);
      ++written;
    }
  }
  std::cerr << "wrote " << written << " overlay images to " << out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coronary angiogram analysis pipeline"};
  app.set_version_flag("--version", std::string(ANGIO_VERSION));
  app.require_subcommand(1);

  // run
  std::vector<std::string> run_studies;
  std::string run_out;
  ConfigFlags run_flags;
  auto* run = app.add_subcommand("run", "Run the full pipeline over study directories");
  run->add_option("studies", run_studies, "Study directories")->required()->check(CLI::ExistingDirectory);
  run->add_option("-o,--out", run_out, "Output directory")->required();
  run_flags.attach(run);

  // synth
  SynthFlags synth_flags;
  auto* synth = app.add_subcommand("synth", "Generate synthetic studies with ground truth");
  synth->add_option("-o,--out", synth_flags.out, "Output directory")->required();
  synth->add_option("-n,--studies", synth_flags.studies, "Number of studies")->check(CLI::Range(1, 100000));
  synth->add_option("--seed", synth_flags.seed, "Base seed; study i uses seed + i");
  synth->add_option("--videos", synth_flags.base.n_videos, "Videos per study");
  synth->add_option("--frames", synth_flags.base.frames_per_video, "Frames per video");
  synth->add_option("--side", synth_flags.base.frame_side, "Frame side in pixels");
  synth->add_option("--width", synth_flags.base.base_width, "Vessel width in pixels");
  synth->add_option("--noise", synth_flags.base.noise, "Uniform noise amplitude");
  synth->add_option("--tau", synth_flags.base.ramp_tau, "Contrast ramp falloff in frames");
  synth->add_option("--peak", synth_flags.peak, "Peak-contrast frame (random when unset)");
  synth->add_option("--max-stenoses", synth_flags.max_stenoses, "Random lesions per study, 1..N");
  synth->add_option("--stenosis", synth_flags.stenoses,
                    "Fixed lesion SEGMENT:PERCENT[:POSITION] (repeatable)");
  synth->add_option("--guidewire-videos", synth_flags.base.guidewire_videos);
  synth->add_option("--non-coronary-videos", synth_flags.base.non_coronary_videos);

  // parse-reports
  std::string pr_in, pr_out, pr_diag;
  ConfigFlags pr_flags;
  auto* pr = app.add_subcommand("parse-reports", "Extract stenosis records from report text");
  pr->add_option("-i,--input", pr_in, "CSV with study_id and report columns")->required()->check(CLI::ExistingFile);
  pr->add_option("-o,--out", pr_out, "Records CSV")->required();
  pr->add_option("--diagnostics", pr_diag, "Diagnostics CSV");
  pr_flags.attach(pr);

  // eval-classify
  std::string ec_pred, ec_truth, ec_out, ec_kind = "projection", ec_key = "video_id";
  auto* ec = app.add_subcommand("eval-classify", "Projection/anatomy classification report");
  ec->add_option("--kind", ec_kind, "projection or anatomy")->check(CLI::IsMember({"projection", "anatomy"}));
  ec->add_option("--pred", ec_pred, "Predictions CSV (e.g. videos.csv)")->required()->check(CLI::ExistingFile);
  ec->add_option("--truth", ec_truth, "Truth CSV")->required()->check(CLI::ExistingFile);
  ec->add_option("--key", ec_key, "Join column");
  ec->add_option("-o,--out", ec_out, "Report path stem (.json and .csv)")->required();

  // eval-detect
  std::string ed_pred, ed_truth, ed_out;
  bool ed_only = false;
  auto* ed = app.add_subcommand("eval-detect", "Detection mAP over the IoU ladder");
  ed->add_option("--pred", ed_pred, "Detections CSV")->required()->check(CLI::ExistingFile);
  ed->add_option("--truth", ed_truth, "Truth detections CSV")->required()->check(CLI::ExistingFile);
  ed->add_flag("--only-predicted-frames", ed_only, "Ignore truth on frames without predictions");
  ed->add_option("-o,--out", ed_out, "Report path stem")->required();

  // eval-severity
  std::string es_pred, es_truth, es_out;
  double es_cutoff = angio::kReportObstructivePercent;
  bool es_no_ci = false;
  ConfigFlags es_flags;
  auto* es = app.add_subcommand("eval-severity", "Stenosis diagnostics and agreement");
  es->add_option("--pred", es_pred, "Predictions CSV (study_id, segment, percent)")->required()->check(CLI::ExistingFile);
  es->add_option("--truth", es_truth, "Reference CSV (study_id, segment, percent)")->required()->check(CLI::ExistingFile);
  es->add_option("--report-cutoff", es_cutoff, "Reference percent defining obstructive");
  es->add_flag("--no-ci", es_no_ci, "Skip the bootstrap interval");
  es->add_option("-o,--out", es_out, "Report path stem")->required();
  es_flags.attach(es);

  // calibrate
  std::string cal_pred, cal_truth, cal_out;
  double cal_cutoff = angio::kReportObstructivePercent;
  auto* cal = app.add_subcommand("calibrate", "F1-optimal obstructive threshold");
  cal->add_option("--pred", cal_pred, "Predictions CSV")->required()->check(CLI::ExistingFile);
  cal->add_option("--truth", cal_truth, "Reference CSV")->required()->check(CLI::ExistingFile);
  cal->add_option("--report-cutoff", cal_cutoff, "Reference percent defining obstructive");
  cal->add_option("-o,--out", cal_out, "Report path stem")->required();

  // overlay
  std::string ov_study, ov_dets, ov_out, ov_video;
  int ov_thickness = 1;
  auto* ov = app.add_subcommand("overlay", "Draw detection boxes onto frames");
  ov->add_option("--study", ov_study, "Study directory")->required()->check(CLI::ExistingDirectory);
  ov->add_option("--detections", ov_dets, "Detections CSV (native coordinates)")->required()->check(CLI::ExistingFile);
  ov->add_option("--video", ov_video, "Only this video");
  ov->add_option("--thickness", ov_thickness, "Line width")->check(CLI::Range(1, 16));
  ov->add_option("-o,--out", ov_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (*run) return cmd_run(run_studies, run_out, run_flags);
    if (*synth) return cmd_synth(synth_flags);
    if (*pr) return cmd_parse_reports(pr_in, pr_out, pr_diag, pr_flags);
    if (*ec) {
      const auto stage = ec_kind == "anatomy" ? angio::Stage::Anatomy : angio::Stage::Projection;
      angio::write_report(angio::eval_classify(angio::Table::read(ec_pred),
                                               angio::Table::read(ec_truth), stage, ec_key),
                          ec_out);
      return kOk;
    }
    if (*ed) {
      angio::write_report(angio::eval_detect(angio::Table::read(ed_pred),
                                             angio::Table::read(ed_truth), ed_only),
                          ed_out);
      return kOk;
    }
    if (*es) {
      const auto cfg = es_flags.resolve();
      const auto join = angio::join_severity(angio::Table::read(es_pred), angio::Table::read(es_truth));
      std::optional<angio::BootstrapOptions> ci;
      if (!es_no_ci) ci = cfg.bootstrap;
      angio::write_report(angio::eval_severity(join, cfg.obstructive_threshold, es_cutoff, ci),
                          es_out);
      return kOk;
    }
    if (*cal) {
      const auto join = angio::join_severity(angio::Table::read(cal_pred), angio::Table::read(cal_truth));
      angio::write_report(angio::calibrate_json(join, cal_cutoff), cal_out);
      return kOk;
    }
    if (*ov) return cmd_overlay(ov_study, ov_dets, ov_out, ov_video, ov_thickness);
  } catch (const angio::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
