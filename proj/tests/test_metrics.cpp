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

#include "angio/classify/classes.hpp"
#include "angio/core/rng.hpp"
#include "angio/metrics/agreement.hpp"
#include "angio/metrics/bootstrap.hpp"
#include "angio/metrics/classification.hpp"
#include "angio/metrics/diagnostics.hpp"
#include "angio/metrics/roc.hpp"
#include "oracles.hpp"

namespace angio {
namespace {

struct Scored {
  std::vector<double> scores;
  std::vector<int> labels;
};

Scored random_scored(std::uint64_t seed, std::size_t max_n = 200) {
  Rng rng(seed);
  Scored s;
  const auto n = std::size_t(rng.integer(2, std::int64_t(max_n)));
  const bool coarse = seed % 2 == 0;  // coarse scores produce many ties
  for (std::size_t i = 0; i < n; ++i) {
    const int label = rng.uniform01() < 0.4 ? 1 : 0;
    double v = rng.uniform01() + 0.3 * label;
    if (coarse) v = std::floor(v * 8) / 8;
    s.scores.push_back(v);
    s.labels.push_back(label);
  }
  s.labels[0] = 1;
  s.labels[1] = 0;
  return s;
}

TEST(Auc, HandValues) {
  const std::vector<double> s = {0.1, 0.4, 0.35, 0.8};
  const std::vector<int> l = {0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(roc_auc(s, l), 0.75);
  const std::vector<double> tied = {0.5, 0.5};
  EXPECT_DOUBLE_EQ(roc_auc(tied, std::vector<int>{1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(roc_auc(s, std::vector<int>{0, 1, 1, 1}), 1.0);
}

TEST(Auc, MatchesPairwiseOracle) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto d = random_scored(seed);
    EXPECT_NEAR(roc_auc(d.scores, d.labels), oracle::pairwise_auc(d.scores, d.labels), 1e-12)
        << seed;
  }
}

TEST(Auc, RejectsDegenerateInputs) {
  const std::vector<double> s = {0.1, 0.2};
  EXPECT_THROW(roc_auc(s, std::vector<int>{1, 1}), Error);
  EXPECT_THROW(roc_auc(s, std::vector<int>{1}), Error);
  EXPECT_THROW(roc_auc(std::vector<double>{std::nan(""), 1}, std::vector<int>{1, 0}), Error);
}

TEST(PrAuc, HandValue) {
  // Ranked labels 1, 0, 1: precision 1 at recall 0.5, 2/3 at recall 1.
  const std::vector<double> s = {0.9, 0.8, 0.7};
  const std::vector<int> l = {1, 0, 1};
  EXPECT_NEAR(pr_auc(s, l), 0.5 + 0.5 * 2.0 / 3.0, 1e-12);
}

TEST(Diagnostics, PublishedCounts) {
  // 260 of 349 obstructive and 1082 of 1385 non-obstructive called correctly.
  const auto r = diagnostics_from_counts({260, 1385 - 1082, 1082, 349 - 260});
  EXPECT_NEAR(*r.sensitivity, 0.745, 0.001);
  EXPECT_NEAR(*r.specificity, 0.781, 0.001);
  EXPECT_NEAR(*r.ppv, 260.0 / 563.0, 1e-12);
  EXPECT_NEAR(*r.npv, 1082.0 / 1171.0, 1e-12);
  EXPECT_NEAR(*r.diagnostic_odds_ratio, (260.0 * 1082.0) / (303.0 * 89.0), 1e-9);
}

TEST(Diagnostics, UndefinedRatesAreAbsent) {
  const auto r = diagnostics_from_counts({0, 0, 5, 0});
  EXPECT_FALSE(r.sensitivity);
  EXPECT_FALSE(r.ppv);
  EXPECT_EQ(*r.specificity, 1.0);
  EXPECT_FALSE(r.diagnostic_odds_ratio);
}

TEST(Diagnostics, InclusiveThresholdCounting) {
  const std::vector<double> s = {54, 53.9, 80, 10};
  const std::vector<int> l = {1, 1, 0, 0};
  const auto c = confusion_at(s, l, 54);
  EXPECT_EQ(c.tp, 1u);
  EXPECT_EQ(c.fn, 1u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.tn, 1u);
  const auto r = binary_diagnostics(s, l, 54, BootstrapOptions{0.8, 50, 1});
  EXPECT_DOUBLE_EQ(*r.auc, 0.5);
  ASSERT_TRUE(r.auc_ci);
  EXPECT_LE(r.auc_ci->lower, r.auc_ci->upper);
}

TEST(Agreement, IccHandAnova) {
  const std::vector<double> a = {9, 6, 8, 7, 10, 6};
  const std::vector<double> b = {2, 1, 4, 1, 5, 2};
  // MSR = 4.6833, MSC = 80.0833, MSE = 0.6833 from the two-way table.
  EXPECT_NEAR(*icc_2_1(a, b), 24.0 / 191.0, 1e-9);
  EXPECT_NEAR(*icc_2_1(a, b), oracle::anova_icc(a, b), 1e-9);
}

TEST(Agreement, IccMatchesAnovaOnRandomData) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto n = std::size_t(rng.integer(3, 80));
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform(0, 100);
      b[i] = 0.7 * a[i] + rng.uniform(-20, 30);
    }
    EXPECT_NEAR(*icc_2_1(a, b), oracle::anova_icc(a, b), 1e-9) << seed;
  }
}

TEST(Agreement, PerfectAndConstant) {
  const std::vector<double> a = {10, 20, 30, 40};
  const auto r = agreement(a, a);
  EXPECT_DOUBLE_EQ(*r.pearson_r, 1.0);
  EXPECT_DOUBLE_EQ(*r.icc, 1.0);
  EXPECT_EQ(r.mse, 0.0);
  const std::vector<double> flat = {5, 5, 5, 5};
  EXPECT_FALSE(agreement(a, flat).pearson_r);
  EXPECT_THROW(agreement(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
}

TEST(Agreement, SummaryStatistics) {
  const std::vector<double> a = {10, 20, 30, 40};
  const std::vector<double> b = {12, 18, 33, 40};
  const auto r = agreement(a, b);
  // Differences -2, 2, -3, 0.
  EXPECT_DOUBLE_EQ(r.bland_altman.bias, -0.75);
  EXPECT_DOUBLE_EQ(r.mean_abs_diff, 1.75);
  EXPECT_DOUBLE_EQ(r.mse, 17.0 / 4.0);
  const double sd = std::sqrt((1.25 * 1.25 + 2.75 * 2.75 + 2.25 * 2.25 + 0.75 * 0.75) / 3.0);
  EXPECT_NEAR(r.bland_altman.upper, -0.75 + 1.96 * sd, 1e-12);
  EXPECT_NEAR(r.bland_altman.lower, -0.75 - 1.96 * sd, 1e-12);
  EXPECT_EQ(r.n, 4u);
}

TEST(IccBands, Boundaries) {
  EXPECT_EQ(icc_interpretation(0.72), IccBand::Substantial);
  EXPECT_EQ(to_string(icc_interpretation(0.72)), "substantial");
  EXPECT_EQ(icc_interpretation(-0.3), IccBand::Slight);
  EXPECT_EQ(icc_interpretation(0.20), IccBand::Slight);
  EXPECT_EQ(icc_interpretation(0.21), IccBand::Fair);
  EXPECT_EQ(icc_interpretation(0.40), IccBand::Fair);
  EXPECT_EQ(icc_interpretation(0.60), IccBand::Moderate);
  EXPECT_EQ(icc_interpretation(0.61), IccBand::Substantial);
  EXPECT_EQ(icc_interpretation(0.80), IccBand::Substantial);
  EXPECT_EQ(icc_interpretation(0.81), IccBand::Excellent);
}

TEST(Bootstrap, PercentilesInterpolate) {
  const std::vector<double> v = {1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(percentile_sorted(v, 0.05), 1.2);
  EXPECT_DOUBLE_EQ(percentile_sorted(v, 0.95), 4.8);
  EXPECT_DOUBLE_EQ(percentile_sorted(v, 0.5), 3.0);
}

TEST(Bootstrap, ReproducibleAndSeedSensitive) {
  std::vector<double> data(100);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = double(i);
  auto mean = [](std::span<const double> s) -> std::optional<double> {
    double t = 0;
    for (double v : s) t += v;
    return t / double(s.size());
  };
  const BootstrapOptions opts{0.8, 200, 42};
  const auto a = bootstrap_ci<double>(data, mean, opts);
  for (int run = 0; run < 3; ++run) {
    const auto b = bootstrap_ci<double>(data, mean, opts);
    EXPECT_EQ(a.lower, b.lower);
    EXPECT_EQ(a.upper, b.upper);
  }
  auto other = opts;
  // Iteration i uses seed + i, so neighbouring seeds share streams.
  other.seed = 42 + opts.iterations;
  const auto c = bootstrap_ci<double>(data, mean, other);
  EXPECT_TRUE(c.lower != a.lower || c.upper != a.upper);
  EXPECT_LT(a.lower, 49.5);
  EXPECT_GT(a.upper, 49.5);
}

TEST(Bootstrap, ConstantDataGivesPointInterval) {
  const std::vector<double> data(10, 3.0);
  auto first = [](std::span<const double> s) -> std::optional<double> { return s[0]; };
  const auto ci = bootstrap_ci<double>(data, first);
  EXPECT_EQ(ci.lower, 3.0);
  EXPECT_EQ(ci.upper, 3.0);
}

TEST(Bootstrap, UndefinedMetricEventuallyFails) {
  const std::vector<double> data(10, 1.0);
  auto never = [](std::span<const double>) -> std::optional<double> { return std::nullopt; };
  EXPECT_THROW(bootstrap_ci<double>(data, never, BootstrapOptions{0.8, 10, 1}), Error);
  EXPECT_THROW(bootstrap_ci<double>(std::vector<double>{}, never), Error);
}

TEST(Classification, WeightedReport) {
  using P = ProjectionClass;
  const std::vector<P> truth = {P::AP, P::AP, P::AP, P::LAO_Cranial};
  const std::vector<P> pred = {P::AP, P::AP, P::LAO_Cranial, P::LAO_Cranial};
  const auto classes = all_values<P>();
  const auto r = classification_report<P>(pred, truth, classes);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.75);
  const auto& ap = r.per_class[ordinal(P::AP)];
  EXPECT_DOUBLE_EQ(ap.precision, 1.0);
  EXPECT_DOUBLE_EQ(ap.recall, 2.0 / 3.0);
  const auto& lc = r.per_class[ordinal(P::LAO_Cranial)];
  EXPECT_DOUBLE_EQ(lc.precision, 0.5);
  EXPECT_DOUBLE_EQ(lc.recall, 1.0);
  EXPECT_NEAR(r.weighted.f1, 0.75 * 0.8 + 0.25 * (2.0 / 3.0), 1e-12);
  EXPECT_EQ(r.weighted.support, 4u);
  EXPECT_EQ(r.confusion[ordinal(P::AP)][ordinal(P::LAO_Cranial)], 1u);
}

}  // namespace
}  // namespace angio
