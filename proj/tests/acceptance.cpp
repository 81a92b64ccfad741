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
// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "angio/classify/projection.hpp"
#include "angio/detect/eval_map.hpp"
#include "angio/detect/postprocess.hpp"
#include "angio/ingest/frames.hpp"
#include "angio/metrics/agreement.hpp"
#include "angio/metrics/bootstrap.hpp"
#include "angio/metrics/diagnostics.hpp"
#include "angio/metrics/roc.hpp"
#include "angio/pipeline/run.hpp"
#include "angio/report/parser.hpp"
#include "angio/severity/severity.hpp"
#include "angio/synth/synthgen.hpp"
#include "angio/vesselmask/vesselmask.hpp"
#include "oracles.hpp"
#include "report_corpus.hpp"
#include "tables.hpp"
#include "test_support.hpp"

namespace {

using namespace angio;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using D = DetectionClass;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << "  " << detail << std::endl;
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void projection_binning() {
  const auto t0 = Clock::now();
  std::size_t mismatches = 0, pairs = 0;
  for (int i = -360; i <= 360; ++i)
    for (int j = -100; j <= 100; ++j) {
      const double p = i * 0.5, s = j * 0.5;
      std::size_t hits = 0;
      ProjectionClass want = ProjectionClass::Other;
      for (const auto& row : tables::projection_rows())
        if (row.primary.contains(p) && row.secondary.contains(s)) ++hits, want = row.cls;
      ++pairs;
      if (hits > 1 || bin_projection_angles(p, s) != want) ++mismatches;
    }
  const double secs = seconds_since(t0);
  std::size_t interior = 0;
  std::set<ProjectionClass> classes;
  for (const auto& pt : tables::interior_points()) {
    interior += bin_projection_angles(pt.primary, pt.secondary) == pt.expected;
    classes.insert(pt.expected);
  }
  report(mismatches == 0 && interior == 12 && classes.size() == 12 && secs < 5.0,
         "projection_binning",
         std::to_string(pairs) + " pairs, " + std::to_string(mismatches) + " mismatches, " +
             std::to_string(interior) + "/12 interior, " + fmt("%.3f s (< 5 s)", secs));
}

void exclusion_table() {
  std::vector<Detection> all;
  for (auto c : all_values<DetectionClass>()) all.push_back({1, c, {0, 0, 10, 10}, 1.0});
  std::size_t matched = 0;
  for (const auto& row : tables::exclusion_rows()) {
    const auto kept = apply_projection_exclusion(all, row.artery, row.projection);
    std::set<D> removed;
    for (const auto& d : all)
      if (std::none_of(kept.begin(), kept.end(), [&](const auto& k) { return k.cls == d.cls; }))
        removed.insert(d.cls);
    matched += removed == row.excluded;
  }
  const auto n = tables::exclusion_rows().size();
  report(matched == n && n == 24, "exclusion_table",
         std::to_string(matched) + "/" + std::to_string(n) + " rows");
}

void detection_eval_oracle() {
  double worst = 0.0;
  std::size_t bad = 0;
  const auto classes = all_values<DetectionClass>();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = oracle::random_detection_instance(seed);
    const auto got = eval_map(inst.preds, inst.truth, classes);
    const auto want = oracle::brute_force_map(inst.preds, inst.truth, classes);
    if (got.weighted_map.has_value() != want.weighted.has_value()) {
      ++bad;
      continue;
    }
    if (want.weighted) worst = std::max(worst, std::abs(*got.weighted_map - *want.weighted));
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (got.per_class[i].ap.has_value() != want.per_class[i].has_value()) ++bad;
      else if (want.per_class[i])
        worst = std::max(worst, std::abs(*got.per_class[i].ap - *want.per_class[i]));
    }
  }
  report(bad == 0 && worst <= 1e-9, "detection_eval_oracle",
         "200 instances, max |diff| " + fmt("%.3g (tol 1e-9)", worst));
}

void metrics_oracles() {
  double auc_worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed + 1000);
    const auto n = std::size_t(rng.integer(2, 200));
    std::vector<double> s(n);
    std::vector<int> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      l[i] = rng.uniform01() < 0.4;
      s[i] = rng.uniform01() + 0.3 * l[i];
      if (seed % 2) s[i] = std::floor(s[i] * 6) / 6;
    }
    l[0] = 1, l[1] = 0;
    auc_worst = std::max(auc_worst, std::abs(roc_auc(s, l) - oracle::pairwise_auc(s, l)));
  }
  report(auc_worst <= 1e-12, "metrics_auc_oracle",
         "100 seeds, max |diff| " + fmt("%.3g (tol 1e-12)", auc_worst));

  std::size_t otsu_bad = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const std::size_t levels = seed % 3 == 0 ? 256 : std::size_t(rng.integer(2, 40));
    std::vector<std::uint64_t> h(levels, 0);
    h.front() = rng.index(50) + 1;
    h.back() = rng.index(50) + 1;
    const auto extra = rng.index(levels);
    for (std::size_t i = 0; i < extra; ++i) h[rng.index(levels)] += rng.index(1000) + 1;
    otsu_bad += otsu_threshold(h) != oracle::exhaustive_otsu(h);
  }
  report(otsu_bad == 0, "metrics_otsu_oracle",
         std::to_string(300 - otsu_bad) + "/300 histograms exact");

  std::size_t cal_bad = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed + 77);
    const auto n = std::size_t(rng.integer(2, 120));
    std::vector<double> s(n);
    std::vector<int> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = seed % 2 ? double(rng.integer(0, 20)) * 5.0 : rng.uniform(0, 100);
      l[i] = rng.uniform01() < 0.1 + 0.008 * s[i];
    }
    l[0] = 1, l[1] = 0;
    const auto got = calibrate_threshold(s, l);
    const auto want = oracle::exhaustive_calibrate(s, l);
    cal_bad += got.threshold.value != want.threshold || got.f1 != want.f1;
  }
  report(cal_bad == 0, "metrics_calibrate_oracle",
         std::to_string(100 - cal_bad) + "/100 scans exact (threshold and F1)");

  const std::vector<double> a = {9, 6, 8, 7, 10, 6}, b = {2, 1, 4, 1, 5, 2};
  const auto icc = icc_2_1(a, b);
  const double hand = oracle::anova_icc(a, b);
  const double diff = icc ? std::abs(*icc - hand) : INFINITY;
  report(diff <= 1e-9 && std::abs(hand - 24.0 / 191.0) <= 1e-12, "metrics_icc_fixture",
         fmt("icc %.12f", icc.value_or(NAN)) + fmt(" vs ANOVA %.12f", hand) +
             fmt(" (|diff| %.3g, tol 1e-9)", diff));
}

void numeric_anchors() {
  // 260/349 obstructive and 1082/1385 non-obstructive called correctly.
  std::vector<double> s;
  std::vector<int> l;
  auto add = [&](std::size_t n, double score, int label) {
    for (std::size_t i = 0; i < n; ++i) s.push_back(score), l.push_back(label);
  };
  add(260, 100, 1);
  add(89, 0, 1);
  add(1082, 0, 0);
  add(303, 100, 0);
  const auto r = binary_diagnostics(s, l, kDefaultObstructiveThreshold);
  const auto c = diagnostics_from_counts({260, 303, 1082, 89});
  const bool ok = r.sensitivity && r.specificity && std::abs(*r.sensitivity - 0.745) <= 0.001 &&
                  std::abs(*r.specificity - 0.781) <= 0.001 &&
                  *c.sensitivity == *r.sensitivity && *c.specificity == *r.specificity;
  report(ok, "anchor_sensitivity_specificity",
         fmt("sensitivity %.4f", r.sensitivity.value_or(NAN)) +
             fmt(", specificity %.4f (targets 0.745, 0.781 +/- 0.001)",
                 r.specificity.value_or(NAN)));

  const auto band = icc_interpretation(0.72);
  report(band == IccBand::Substantial, "anchor_icc_band", "0.72 -> " + to_string(band));
}

void end_to_end(const fs::path& work) {
  constexpr std::size_t kStudies = 50;
  std::vector<fs::path> dirs;
  std::vector<GroundTruth> truths;
  for (std::size_t i = 0; i < kStudies; ++i) {
    SynthConfig cfg;
    char id[16];
    std::snprintf(id, sizeof id, "E%03zu", i + 1);
    cfg.study_id = id;
    cfg.n_videos = 3;
    cfg.frames_per_video = 14;
    cfg.frame_side = 96;
    cfg.base_width = 6;
    cfg.seed = 9000 + i;
    Rng pick(cfg.seed);
    cfg.stenoses = random_stenoses(pick, 1 + pick.index(3));
    const auto study = generate_study(cfg);
    write_study(study, work / id);
    dirs.push_back(work / id);
    truths.push_back(study.truth);
  }
  auto cfg = PipelineConfig::oracle_defaults();
  cfg.analysis_side = 128;
  const auto result = run_pipeline(cfg, dirs);

  std::size_t exact = 0, lesions = 0, peaks = 0, videos = 0, obstructive_agree = 0;
  std::vector<double> scores;
  std::vector<int> labels;
  const auto t54 = ObstructiveThreshold::of(kDefaultObstructiveThreshold);
  for (std::size_t i = 0; i < kStudies; ++i) {
    const auto& s = result.studies[i];
    const auto& t = truths[i];
    std::map<D, double> pred;
    for (const auto& a : s.arteries) pred[a.segment] = a.percent;
    std::map<D, int> want;
    for (const auto& a : t.stenoses) want[a.segment] = a.percent;
    lesions += want.size();
    bool all_match = pred.size() == want.size();
    for (const auto& [seg, pct] : want) {
      const bool hit = pred.count(seg) && pred[seg] == double(pct);
      exact += hit;
      all_match = all_match && hit;
    }
    for (auto seg : kSegments) {
      const double p = pred.count(seg) ? pred[seg] : 0.0;
      const int w = want.count(seg) ? want[seg] : 0;
      scores.push_back(p);
      labels.push_back(w >= 54);
      obstructive_agree += classify_obstructive(p, t54) == (w >= 54);
    }
    bool study_peaks = true;
    for (std::size_t v = 0; v < s.videos.size(); ++v) {
      ++videos;
      study_peaks = study_peaks && s.videos[v].peak_frame == t.videos[v].peak_frame;
    }
    peaks += study_peaks;
  }
  report(exact == lesions && result.counts.videos_failed == 0, "e2e_artery_exact",
         std::to_string(exact) + "/" + std::to_string(lesions) + " injected lesions over " +
             std::to_string(kStudies) + " studies");
  const double auc = roc_auc(scores, labels);
  report(auc == 1.0 && obstructive_agree == scores.size(), "e2e_obstructive_auc",
         fmt("AUC %.6f", auc) + ", threshold 54 agrees on " + std::to_string(obstructive_agree) +
             "/" + std::to_string(scores.size()) + " segments");
  report(peaks == kStudies, "e2e_peak_recovery",
         std::to_string(peaks) + "/" + std::to_string(kStudies) + " studies (" +
             std::to_string(videos) + " videos)");
}

void parser_corpus() {
  const auto& corpus = corpus::snippets();
  std::size_t matched = 0;
  std::set<D> covered;
  for (const auto& s : corpus) {
    std::vector<std::pair<D, int>> got;
    for (const auto& r : parse_report(s.text)) got.emplace_back(r.segment, r.percent);
    matched += got == s.expected;
    for (const auto& [seg, pct] : s.expected) covered.insert(seg);
  }
  report(matched == corpus.size() && corpus.size() >= 30 && covered.size() == kSegmentCount,
         "parser_corpus",
         std::to_string(matched) + "/" + std::to_string(corpus.size()) + " snippets, " +
             std::to_string(covered.size()) + "/" + std::to_string(kSegmentCount) + " segments");
}

int cli(const std::string& args) {
  const std::string cmd = std::string(ANGIO_CLI) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string all_bytes(const fs::path& dir, bool with_manifest = true) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && (with_manifest || e.path().filename() != kManifestFile))
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string out;
  for (const auto& f : files)
    out += fs::relative(f, dir).string() + "\n" + testing_support::slurp(f);
  return out;
}

void determinism(const fs::path& work) {
  const std::string root = work.string();
  bool ok = cli("synth -o " + root + "/data -n 3 --videos 3 --frames 12 --side 96 --width 6 "
                "--seed 31") == 0;
  const std::string studies =
      root + "/data/S0001 " + root + "/data/S0002 " + root + "/data/S0003";
  ok = ok && cli("run " + studies + " -o " + root + "/run1 --side 128") == 0;
  ok = ok && cli("run " + studies + " -o " + root + "/run2 --side 128") == 0;
  ok = ok && cli("run " + studies + " -o " + root + "/run3 --side 128 -j 3") == 0;
  // The parallel run's manifest records a different config; its tables must match.
  const bool same = ok && all_bytes(work / "run1") == all_bytes(work / "run2") &&
                    all_bytes(work / "run1", false) == all_bytes(work / "run3", false);
  report(same, "determinism_cli_runs",
         ok ? (same ? "two runs byte-identical incl. manifest; -j 3 tables identical"
                    : "outputs differ")
            : "CLI invocation failed");

  Rng rng(5);
  std::vector<std::pair<double, int>> data(300);
  for (auto& [s, l] : data) {
    l = rng.uniform01() < 0.3;
    s = rng.uniform(0, 100) + 20 * l;
  }
  auto auc = [](std::span<const std::pair<double, int>> d) -> std::optional<double> {
    std::vector<double> s;
    std::vector<int> l;
    for (const auto& [a, b] : d) s.push_back(a), l.push_back(b);
    if (std::count(l.begin(), l.end(), 1) == 0 || std::count(l.begin(), l.end(), 0) == 0)
      return std::nullopt;
    return roc_auc(s, l);
  };
  const BootstrapOptions opts{0.8, 1000, 20210101};
  const auto first = bootstrap_ci<std::pair<double, int>>(data, auc, opts);
  bool repro = true;
  for (int i = 0; i < 2; ++i) {
    const auto again = bootstrap_ci<std::pair<double, int>>(data, auc, opts);
    repro = repro && again.lower == first.lower && again.upper == first.upper &&
            again.redraws == first.redraws;
  }
  report(repro, "determinism_bootstrap",
         "3 runs identical, AUC 90% CI " + fmt("[%.6f, ", first.lower) + fmt("%.6f]", first.upper));
}

void throughput(const fs::path& work) {
  SynthConfig sc;
  sc.study_id = "T1";
  sc.n_videos = 1;
  sc.frames_per_video = 60;
  sc.frame_side = 512;
  sc.base_width = 14;
  sc.stenoses = {{D::ProxLAD, 0.6, 0.5}};
  sc.seed = 2;
  write_study(generate_study(sc), work / "T1");

  auto cfg = config_from_json(nlohmann::json::parse(R"({
    "backends": {
      "projection": {"kind": "constant", "value": "LAO_Cranial"},
      "anatomy": {"kind": "constant", "value": "LeftCoronary"},
      "detect_3a": {"kind": "constant", "value": [
        {"class": "ProxLAD", "x_min": 140, "y_min": 120, "x_max": 260, "y_max": 220, "score": 0.9},
        {"class": "Stenosis", "x_min": 170, "y_min": 140, "x_max": 230, "y_max": 200, "score": 0.8}
      ]},
      "detect_3b": {"kind": "constant", "value": []},
      "severity": {"kind": "constant", "value": 54},
      "vesselseg": {"kind": "constant", "value": 0.8}
    },
    "analysis_side": 512})"));
  const auto t0 = Clock::now();
  const auto r = run_pipeline(cfg, {work / "T1"});
  const double secs = seconds_since(t0);
  const bool ok = r.counts.videos_failed == 0 && r.studies[0].arteries.size() == 1;
  report(ok && secs < 2.0, "throughput_60x512",
         fmt("%.3f s for one 60-frame 512x512 video incl. PNG decode (< 2 s)", secs));
}

}  // namespace

int main() {
  testing_support::TempDir work("angio_acceptance");
  try {
    projection_binning();
    exclusion_table();
    detection_eval_oracle();
    metrics_oracles();
    numeric_anchors();
    fs::create_directories(work / "e2e");
    end_to_end(work / "e2e");
    parser_corpus();
    fs::create_directories(work / "det");
    determinism(work / "det");
    fs::create_directories(work / "tp");
    throughput(work / "tp");
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance_harness  uncaught error: " << e.what() << std::endl;
    ++failures;
  }
  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " failing" :
                           std::string("acceptance: all criteria pass")) << std::endl;
  return failures ? 1 : 0;
}
