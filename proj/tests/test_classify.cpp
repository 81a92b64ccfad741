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

#include "angio/classify/projection.hpp"
#include "angio/classify/vote.hpp"
#include "tables.hpp"

namespace angio {
namespace {

ProjectionClass table_lookup(double p, double s) {
  std::size_t hits = 0;
  ProjectionClass out = ProjectionClass::Other;
  for (const auto& row : tables::projection_rows())
    if (row.primary.contains(p) && row.secondary.contains(s)) {
      ++hits;
      out = row.cls;
    }
  EXPECT_LE(hits, 1u) << p << "," << s;
  return out;
}

TEST(Projection, InteriorPoints) {
  for (const auto& pt : tables::interior_points())
    EXPECT_EQ(bin_projection_angles(pt.primary, pt.secondary), pt.expected)
        << pt.primary << "," << pt.secondary;
}

TEST(Projection, SweepMatchesTable) {
  for (int i = -360; i <= 360; ++i)
    for (int j = -100; j <= 100; ++j) {
      const double p = i * 0.5, s = j * 0.5;
      ASSERT_EQ(bin_projection_angles(p, s), table_lookup(p, s)) << p << "," << s;
    }
}

TEST(Projection, Boundaries) {
  EXPECT_EQ(bin_projection_angles(-15, 0), ProjectionClass::AP);
  EXPECT_EQ(bin_projection_angles(15, 0), ProjectionClass::LAO_Straight);
  EXPECT_EQ(bin_projection_angles(45, 45), ProjectionClass::LAO_Cranial);
  EXPECT_EQ(bin_projection_angles(45.5, 0), ProjectionClass::Other);
  EXPECT_EQ(bin_projection_angles(-45, -45), ProjectionClass::RAO_Caudal);
  EXPECT_EQ(bin_projection_angles(110, 0), ProjectionClass::LAO_Lateral);
  EXPECT_EQ(bin_projection_angles(90, 30), ProjectionClass::Other);
  EXPECT_EQ(bin_projection_angles(180, 0), ProjectionClass::Other);
}

TEST(Projection, OutOfDomainRejected) {
  EXPECT_THROW(bin_projection_angles(181, 0), Error);
  EXPECT_THROW(bin_projection_angles(0, -51), Error);
  EXPECT_THROW(bin_projection_angles(std::nan(""), 0), Error);
}

ProjectionPrediction scores(std::initializer_list<std::pair<ProjectionClass, double>> s) {
  ProjectionPrediction p;
  for (auto [c, v] : s) p.scores[ordinal(c)] = v;
  return p;
}

TEST(Vote, MajorityWins) {
  using P = ProjectionClass;
  std::vector<ProjectionPrediction> preds = {
      ProjectionPrediction::one_hot(P::AP), ProjectionPrediction::one_hot(P::LAO_Cranial),
      ProjectionPrediction::one_hot(P::AP)};
  EXPECT_EQ(vote_projection(preds), P::AP);
}

TEST(Vote, CountTieGoesToHigherMeanProbability) {
  using P = ProjectionClass;
  std::vector<ProjectionPrediction> preds = {
      scores({{P::AP, 0.6}, {P::RAO_Caudal, 0.4}}),
      scores({{P::AP, 0.45}, {P::RAO_Caudal, 0.55}}),
  };
  // One vote each; AP has mean probability 0.525 against 0.475.
  EXPECT_EQ(vote_projection(preds), P::AP);
  std::reverse(preds.begin(), preds.end());
  EXPECT_EQ(vote_projection(preds), P::AP);
}

TEST(Vote, FullTieGoesToEnumerationOrder) {
  using P = ProjectionClass;
  std::vector<ProjectionPrediction> preds = {ProjectionPrediction::one_hot(P::AP),
                                             ProjectionPrediction::one_hot(P::RAO_Cranial)};
  EXPECT_EQ(vote_projection(preds), P::RAO_Cranial);
}

TEST(Vote, FrameArgmaxTieUsesEarlierClass) {
  using P = ProjectionClass;
  EXPECT_EQ(scores({{P::Other, 0.5}, {P::AP, 0.5}}).argmax(), P::AP);
}

TEST(Vote, EmptyRejected) {
  EXPECT_THROW(vote_projection({}), Error);
}

TEST(Vote, AnatomyAndGate) {
  using A = AnatomyClass;
  std::vector<AnatomyPrediction> preds = {AnatomyPrediction::one_hot(A::FemoralArtery),
                                          AnatomyPrediction::one_hot(A::FemoralArtery),
                                          AnatomyPrediction::one_hot(A::LeftCoronary)};
  EXPECT_EQ(vote_anatomy(preds), A::FemoralArtery);
  EXPECT_FALSE(gate_coronary(A::FemoralArtery));
  EXPECT_TRUE(gate_coronary(A::LeftCoronary));
  EXPECT_TRUE(gate_coronary(A::RightCoronary));
  for (auto a : all_values<AnatomyClass>())
    if (a != A::LeftCoronary && a != A::RightCoronary) {
      EXPECT_FALSE(gate_coronary(a));
    }
}

TEST(Vote, Normalization) {
  EXPECT_TRUE(is_normalized(ProjectionPrediction::one_hot(ProjectionClass::AP)));
  EXPECT_FALSE(is_normalized(scores({{ProjectionClass::AP, 0.7}})));
  EXPECT_FALSE(is_normalized(scores({{ProjectionClass::AP, 1.2}, {ProjectionClass::Other, -0.2}})));
}

}  // namespace
}  // namespace angio
