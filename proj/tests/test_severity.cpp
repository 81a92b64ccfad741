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
#include <gtest/gtest.h>

#include "angio/core/rng.hpp"
#include "angio/severity/severity.hpp"
#include "oracles.hpp"

namespace angio {
namespace {

using D = DetectionClass;

std::vector<Detection> wires_in(std::initializer_list<std::size_t> frames) {
  std::vector<Detection> out;
  for (auto f : frames) out.push_back({f, D::Guidewire, {0, 0, 4, 4}, 1.0});
  return out;
}

TEST(Guidewire, MoreThanFourDistinctFrames) {
  EXPECT_FALSE(guidewire_excluded(wires_in({})));
  EXPECT_FALSE(guidewire_excluded(wires_in({1, 2, 3, 4})));
  EXPECT_FALSE(guidewire_excluded(wires_in({1, 1, 2, 2, 3, 4, 4})));
  EXPECT_TRUE(guidewire_excluded(wires_in({1, 2, 3, 4, 5})));
  auto mixed = wires_in({1, 2, 3, 4});
  for (std::size_t f = 5; f < 10; ++f) mixed.push_back({f, D::Stenosis, {0, 0, 4, 4}, 1.0});
  EXPECT_FALSE(guidewire_excluded(mixed));
}

TEST(Aggregate, MeanIsOrderIndependentAndBounded) {
  std::vector<double> v = {0.1, 0.2, 0.7, 33.3, 99.9};
  const double m = mean_percent(v);
  std::reverse(v.begin(), v.end());
  EXPECT_EQ(mean_percent(v), m);
  EXPECT_NEAR(m, (0.1 + 0.2 + 0.7 + 33.3 + 99.9) / 5, 1e-12);
  const std::vector<double> same(7, 0.1);
  EXPECT_EQ(mean_percent(same), 0.1);
  EXPECT_THROW(mean_percent({}), Error);
}

TEST(Aggregate, VideoAndArteryLevels) {
  const std::vector<double> frames = {60, 70, 80};
  EXPECT_DOUBLE_EQ(aggregate_video(frames), 70.0);
  const std::map<D, std::vector<double>> videos = {{D::ProxLAD, {70, 50}}, {D::MidRCA, {40}}};
  const auto artery = aggregate_artery(videos);
  EXPECT_DOUBLE_EQ(artery.at(D::ProxLAD), 60.0);
  EXPECT_DOUBLE_EQ(artery.at(D::MidRCA), 40.0);
  EXPECT_THROW(aggregate_artery({{D::ProxLAD, {}}}), Error);
}

TEST(Obstructive, InclusiveThreshold) {
  const auto t = ObstructiveThreshold::of(kDefaultObstructiveThreshold);
  EXPECT_TRUE(classify_obstructive(54.0, t));
  EXPECT_FALSE(classify_obstructive(53.999, t));
  EXPECT_TRUE(classify_obstructive(100.0, t));
  EXPECT_THROW(ObstructiveThreshold::of(101), Error);
  EXPECT_THROW(ObstructiveThreshold::of(-1), Error);
}

TEST(Calibrate, HandExample) {
  const std::vector<double> s = {10, 40, 60, 80};
  const std::vector<int> l = {0, 0, 1, 1};
  const auto c = calibrate_threshold(s, l);
  EXPECT_DOUBLE_EQ(c.threshold.value, 60.0);
  EXPECT_DOUBLE_EQ(c.f1, 1.0);
}

TEST(Calibrate, TiesGoToLowestThreshold) {
  // Cuts at 0 and 20 both call everything positive: F1 = 0.8.
  const std::vector<double> s = {20, 25, 30};
  const std::vector<int> l = {1, 0, 1};
  const auto c = calibrate_threshold(s, l);
  EXPECT_DOUBLE_EQ(c.threshold.value, 0.0);
  EXPECT_NEAR(c.f1, 0.8, 1e-12);
}

TEST(Calibrate, MatchesExhaustiveScan) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const auto n = std::size_t(rng.integer(2, 60));
    std::vector<double> s(n);
    std::vector<int> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = double(rng.integer(0, 20)) * 5.0;
      l[i] = rng.uniform01() < 0.1 + 0.008 * s[i] ? 1 : 0;
    }
    l[0] = 1;
    l[1] = 0;
    const auto got = calibrate_threshold(s, l);
    const auto want = oracle::exhaustive_calibrate(s, l);
    EXPECT_EQ(got.threshold.value, want.threshold) << seed;
    EXPECT_EQ(got.f1, want.f1) << seed;
  }
}

TEST(Calibrate, NeedsBothClasses) {
  const std::vector<double> s = {1, 2};
  EXPECT_THROW(calibrate_threshold(s, std::vector<int>{1, 1}), Error);
  EXPECT_THROW(calibrate_threshold(s, std::vector<int>{1}), Error);
}

TEST(MatchRecords, SameSegmentFirstComeFirstServed) {
  const std::vector<StenosisPrediction> preds = {
      {PredictionLevel::Artery, D::ProxLAD, 70, {}},
      {PredictionLevel::Artery, D::MidRCA, 30, {}},
      {PredictionLevel::Artery, D::ProxLAD, 20, {}}};
  const std::vector<StenosisRecord> recs = {{D::ProxLAD, 80, "", 0}, {D::DistLAD, 50, "", 0}};
  const auto m = match_records(preds, recs);
  ASSERT_EQ(m.matched.size(), 1u);
  EXPECT_EQ(m.matched[0].first.percent, 70);
  EXPECT_EQ(m.matched[0].second.percent, 80);
  EXPECT_EQ(m.unmatched_predictions.size(), 2u);
  ASSERT_EQ(m.unmatched_records.size(), 1u);
  EXPECT_EQ(m.unmatched_records[0].segment, D::DistLAD);
}

TEST(HealthyCrop, InsideSegmentAndDeterministic) {
  const BoundingBox seg{10, 20, 110, 60};
  const std::vector<BoxSize> sizes = {{30, 20}, {50, 50}, {200, 10}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto b = healthy_crop_box(seg, sizes, seed);
    EXPECT_TRUE(b.valid());
    EXPECT_TRUE(seg.contains(b)) << seed;
    EXPECT_EQ(b, healthy_crop_box(seg, sizes, seed));
    const bool known = std::any_of(sizes.begin(), sizes.end(), [&](const BoxSize& s) {
      return std::abs(b.width() - std::min(s.width, seg.width())) < 1e-9 &&
             std::abs(b.height() - std::min(s.height, seg.height())) < 1e-9;
    });
    EXPECT_TRUE(known) << seed;
  }
  EXPECT_THROW(healthy_crop_box(seg, {}, 1), Error);
}

}  // namespace
}  // namespace angio
