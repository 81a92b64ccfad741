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
#include <sstream>

#include <gtest/gtest.h>

#include "angio/detect/crop.hpp"
#include "angio/detect/eval_map.hpp"
#include "angio/detect/postprocess.hpp"
#include "angio/detect/records.hpp"
#include "oracles.hpp"
#include "tables.hpp"

namespace angio {
namespace {

using D = DetectionClass;

Detection det(D cls, BoundingBox b, std::size_t frame = 1, double score = 1.0) {
  return {frame, cls, b, score};
}

std::vector<Detection> one_of_each() {
  std::vector<Detection> out;
  for (auto c : all_values<DetectionClass>()) out.push_back(det(c, {0, 0, 10, 10}));
  return out;
}

TEST(Exclusion, MatchesEveryTableRow) {
  const auto all = one_of_each();
  for (const auto& row : tables::exclusion_rows()) {
    const auto kept = apply_projection_exclusion(all, row.artery, row.projection);
    std::set<D> removed;
    for (const auto& d : all)
      if (std::none_of(kept.begin(), kept.end(), [&](const auto& k) { return k.cls == d.cls; }))
        removed.insert(d.cls);
    EXPECT_EQ(removed, row.excluded) << to_string(row.projection) << "/" << to_string(row.artery);
  }
  EXPECT_EQ(tables::exclusion_rows().size(), 24u);
}

TEST(Exclusion, IdempotentAndLeavesNonSegmentsAlone) {
  const auto all = one_of_each();
  for (auto p : all_values<ProjectionClass>())
    for (auto a : all_values<AnatomyClass>()) {
      const auto once = apply_projection_exclusion(all, a, p);
      EXPECT_EQ(apply_projection_exclusion(once, a, p), once);
      for (const auto& d : all)
        if (!is_segment(d.cls)) {
          EXPECT_TRUE(std::any_of(once.begin(), once.end(),
                                  [&](const auto& k) { return k.cls == d.cls; }));
        }
      if (a != AnatomyClass::LeftCoronary && a != AnatomyClass::RightCoronary) {
        EXPECT_EQ(once.size(), all.size());
      }
    }
}

TEST(Exclusion, Examples) {
  const std::vector<Detection> rca = {det(D::ProxRCA, {0, 0, 5, 5}), det(D::MidRCA, {0, 0, 5, 5})};
  const auto kept =
      apply_projection_exclusion(rca, AnatomyClass::RightCoronary, ProjectionClass::RAO_Straight);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].cls, D::MidRCA);
}

TEST(Routing, OnlyRightLaoStraightUsesDedicatedDetector) {
  for (auto p : all_values<ProjectionClass>()) {
    EXPECT_EQ(route_detector(AnatomyClass::LeftCoronary, p), DetectorId::General);
    EXPECT_EQ(route_detector(AnatomyClass::RightCoronary, p),
              p == ProjectionClass::LAO_Straight ? DetectorId::RcaLao : DetectorId::General);
  }
  EXPECT_THROW(route_detector(AnatomyClass::Catheter, ProjectionClass::AP), Error);
}

TEST(Iou, HandValues) {
  EXPECT_DOUBLE_EQ(iou({0, 0, 10, 10}, {0, 0, 10, 10}), 1.0);
  EXPECT_DOUBLE_EQ(iou({0, 0, 10, 10}, {5, 0, 15, 10}), 50.0 / 150.0);
  EXPECT_DOUBLE_EQ(iou({0, 0, 10, 10}, {10, 0, 20, 10}), 0.0);
  EXPECT_DOUBLE_EQ(iou({0, 0, 10, 10}, {2, 2, 4, 4}), 4.0 / 100.0);
}

TEST(Assign, PicksHighestOverlapSegment) {
  const std::vector<Detection> dets = {
      det(D::ProxLAD, {0, 0, 10, 10}), det(D::MidLAD, {4, 0, 14, 10}),
      det(D::Stenosis, {5, 0, 12, 10}), det(D::Catheter, {5, 0, 12, 10})};
  const auto a = assign_stenoses(dets);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].segment, D::MidLAD);
  EXPECT_DOUBLE_EQ(a[0].overlap, 70.0 / 100.0);
}

TEST(Assign, HonoursMinimumAndFrame) {
  const std::vector<Detection> dets = {det(D::ProxLAD, {0, 0, 10, 10}, 1),
                                       det(D::Stenosis, {0, 0, 10, 10}, 2),
                                       det(D::Obstruction, {8, 8, 12, 12}, 1)};
  // Different frame for the stenosis, IoU 4/112 for the obstruction.
  EXPECT_TRUE(assign_stenoses(dets).empty());
  const std::vector<Detection> edge = {det(D::ProxLAD, {0, 0, 10, 10}),
                                       det(D::Stenosis, {0, 0, 10, 2})};
  ASSERT_EQ(assign_stenoses(edge).size(), 1u);
  EXPECT_TRUE(assign_stenoses(edge, 0.21).empty());
}

TEST(Assign, TieGoesToEarlierSegment) {
  const std::vector<Detection> dets = {det(D::MidLAD, {0, 0, 10, 10}),
                                       det(D::ProxLAD, {0, 0, 10, 10}),
                                       det(D::Stenosis, {0, 0, 10, 10})};
  EXPECT_EQ(assign_stenoses(dets)[0].segment, D::ProxLAD);
}

TEST(ScoreFilter, Inclusive) {
  const std::vector<Detection> dets = {det(D::ProxLAD, {0, 0, 1, 1}, 1, 0.5),
                                       det(D::MidLAD, {0, 0, 1, 1}, 1, 0.49)};
  const auto kept = filter_by_score(dets, 0.5);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].cls, D::ProxLAD);
}

TEST(Crop, ExpandsByMarginAndClamps) {
  const auto r = expand_and_clamp({20.2, 30.7, 40.1, 50}, 100, 100);
  EXPECT_EQ(r, (BoundingBox{8, 18, 53, 62}));
  const auto c = expand_and_clamp({2, 3, 95, 99}, 100, 100);
  EXPECT_EQ(c, (BoundingBox{0, 0, 100, 100}));
}

TEST(Crop, AspectRatioChoice) {
  EXPECT_EQ(nearest_aspect_ratio(100, 100), AspectRatio::Square);
  EXPECT_EQ(nearest_aspect_ratio(200, 90), AspectRatio::Wide);
  EXPECT_EQ(nearest_aspect_ratio(90, 200), AspectRatio::Tall);
  EXPECT_EQ(nearest_aspect_ratio(1.4, 1.0), AspectRatio::Square);
  EXPECT_EQ(nearest_aspect_ratio(1.45, 1.0), AspectRatio::Wide);
  const std::array<AspectRatio, 2> no_square = {AspectRatio::Wide, AspectRatio::Tall};
  EXPECT_EQ(nearest_aspect_ratio(100, 100, no_square), AspectRatio::Wide);
  const std::array<AspectRatio, 1> tall = {AspectRatio::Tall};
  EXPECT_EQ(nearest_aspect_ratio(300, 10, tall), AspectRatio::Tall);
}

TEST(Crop, OutputSizes) {
  Frame f(128, 128, 50);
  const auto wide = crop_for_severity(f, {20, 40, 90, 60});
  EXPECT_EQ(wide.ratio, AspectRatio::Wide);
  EXPECT_EQ(wide.pixels.width(), 256);
  EXPECT_EQ(wide.pixels.height(), 128);
  for (auto p : wide.pixels.pixels()) ASSERT_EQ(p, 50);
  const auto tall = crop_for_severity(f, {60, 10, 70, 110});
  EXPECT_EQ(tall.ratio, AspectRatio::Tall);
  EXPECT_EQ(tall.pixels.width(), 128);
  EXPECT_EQ(tall.pixels.height(), 256);
  EXPECT_THROW(aspect_from_id(4), Error);
  EXPECT_EQ(aspect_from_id(2), AspectRatio::Wide);
}

TEST(Crop, CopiesTheRightPixels) {
  Frame f(64, 64);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) f.at(x, y) = std::uint8_t(x + 2 * y);
  const Frame c = crop_region(f, {10, 20, 14, 23});
  ASSERT_EQ(c.width(), 4);
  ASSERT_EQ(c.height(), 3);
  EXPECT_EQ(c.at(0, 0), 10 + 40);
  EXPECT_EQ(c.at(3, 2), 13 + 44);
}

TEST(Map, PerfectPredictionsScoreOne) {
  const std::vector<Detection> truth = {det(D::ProxLAD, {0, 0, 10, 10}),
                                        det(D::Stenosis, {3, 3, 6, 6})};
  const auto r = eval_map(truth, truth);
  EXPECT_DOUBLE_EQ(*r.weighted_map, 1.0);
  EXPECT_DOUBLE_EQ(*r.weighted_ap50, 1.0);
}

TEST(Map, HandComputedRanking) {
  // Ranked hits: TP, FP, TP with two truth boxes. Interpolated precision
  // is 1 at the first hit and 2/3 at the second: AP = 0.5 + 0.5 * 2/3.
  const std::vector<Detection> truth = {det(D::ProxLAD, {0, 0, 10, 10}),
                                        det(D::ProxLAD, {20, 20, 30, 30})};
  const std::vector<Detection> preds = {det(D::ProxLAD, {0, 0, 10, 10}, 1, 0.9),
                                        det(D::ProxLAD, {50, 50, 60, 60}, 1, 0.8),
                                        det(D::ProxLAD, {20, 20, 30, 30}, 1, 0.7)};
  const auto r = eval_map(preds, truth);
  EXPECT_NEAR(*r.weighted_ap50, 0.5 + 0.5 * 2.0 / 3.0, 1e-12);
}

TEST(Map, ClassesWithoutTruthHaveNoAp) {
  const std::vector<Detection> preds = {det(D::Valve, {0, 0, 5, 5})};
  const std::vector<Detection> truth = {det(D::ProxLAD, {0, 0, 5, 5})};
  const auto r = eval_map(preds, truth);
  for (const auto& c : r.per_class) {
    if (c.cls == D::ProxLAD) {
      EXPECT_EQ(*c.ap, 0.0);
    } else {
      EXPECT_FALSE(c.ap.has_value());
    }
  }
  EXPECT_EQ(*r.weighted_map, 0.0);
  EXPECT_FALSE(eval_map(preds, {}).weighted_map.has_value());
}

TEST(Map, MatchesBruteForceOracle) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = oracle::random_detection_instance(seed);
    const auto classes = all_values<DetectionClass>();
    const auto got = eval_map(inst.preds, inst.truth, classes);
    const auto want = oracle::brute_force_map(inst.preds, inst.truth, classes);
    ASSERT_EQ(got.weighted_map.has_value(), want.weighted.has_value()) << seed;
    if (want.weighted) {
      EXPECT_NEAR(*got.weighted_map, *want.weighted, 1e-9) << seed;
    }
    for (std::size_t i = 0; i < classes.size(); ++i) {
      ASSERT_EQ(got.per_class[i].ap.has_value(), want.per_class[i].has_value());
      if (want.per_class[i]) {
        EXPECT_NEAR(*got.per_class[i].ap, *want.per_class[i], 1e-9);
      }
    }
  }
}

TEST(Records, RoundTrip) {
  const std::vector<Detection> dets = {det(D::ProxLAD, {0.5, 1, 10.25, 12}, 3, 0.875),
                                       det(D::Guidewire, {1, 2, 3, 4}, 0, 1.0)};
  std::stringstream ss;
  write_detections(ss, dets);
  EXPECT_EQ(read_detections(ss), dets);
}

TEST(Records, RejectsBadRows) {
  for (const char* bad : {"1,ProxLAD,0,0,10\n", "1,Nope,0,0,10,10,1\n",
                          "1,ProxLAD,10,0,0,10,1\n", "1,ProxLAD,0,0,10,10,1.5\n",
                          "-1,ProxLAD,0,0,10,10,1\n", "x,ProxLAD,0,0,10,10,1\n"}) {
    std::stringstream ss(bad);
    EXPECT_THROW(read_detections(ss), Error) << bad;
  }
}

}  // namespace
}  // namespace angio
