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

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "angio/core/enum.hpp"
#include "angio/core/error.hpp"

namespace angio {

struct BlandAltman {
  double bias = 0.0;   // mean(a - b)
  double lower = 0.0;  // bias - 1.96 sd
  double upper = 0.0;  // bias + 1.96 sd
};

struct AgreementReport {
  std::optional<double> pearson_r;  // undefined for constant inputs
  std::optional<double> icc;        // ICC(2,1)
  double mean_abs_diff = 0.0;
  double mean_abs_diff_sd = 0.0;
  double mse = 0.0;
  double mse_sd = 0.0;
  BlandAltman bland_altman;
  std::size_t n = 0;
};

namespace detail {

inline double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

inline double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / double(v.size() - 1));
}

inline bool is_constant(std::span<const double> v) {
  for (double x : v)
    if (x != v.front()) return false;
  return true;
}

}  // namespace detail

inline std::optional<double> pearson(std::span<const double> a,
                                     std::span<const double> b) {
  require(a.size() == b.size() && a.size() >= 2, "pearson: bad input sizes");
  if (detail::is_constant(a) || detail::is_constant(b)) return std::nullopt;
  const double ma = detail::mean(a), mb = detail::mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

/// ICC(2,1): two-way random effects, absolute agreement, single rater, with
/// the two inputs as raters and positions as subjects.
inline std::optional<double> icc_2_1(std::span<const double> a,
                                     std::span<const double> b) {
  require(a.size() == b.size() && a.size() >= 2, "icc: bad input sizes");
  if (detail::is_constant(a) || detail::is_constant(b)) return std::nullopt;
  const double n = double(a.size());
  const double k = 2.0;
  const double ca = detail::mean(a), cb = detail::mean(b);
  const double grand = (ca + cb) / 2.0;
  double ss_rows = 0.0, ss_err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double row = (a[i] + b[i]) / 2.0;
    ss_rows += k * (row - grand) * (row - grand);
    const double ea = a[i] - row - ca + grand;
    const double eb = b[i] - row - cb + grand;
    ss_err += ea * ea + eb * eb;
  }
  const double ss_cols = n * ((ca - grand) * (ca - grand) + (cb - grand) * (cb - grand));
  const double ms_rows = ss_rows / (n - 1.0);
  const double ms_cols = ss_cols / (k - 1.0);
  const double ms_err = ss_err / ((n - 1.0) * (k - 1.0));
  const double denom = ms_rows + (k - 1.0) * ms_err + k * (ms_cols - ms_err) / n;
  if (denom == 0.0) return std::nullopt;
  return (ms_rows - ms_err) / denom;
}

inline AgreementReport agreement(std::span<const double> a,
                                 std::span<const double> b) {
  require(a.size() == b.size(), "agreement: length mismatch");
  require(a.size() >= 3, "agreement: need at least 3 pairs");
  AgreementReport r;
  r.n = a.size();
  r.pearson_r = pearson(a, b);
  r.icc = icc_2_1(a, b);
  std::vector<double> diff(a.size()), absdiff(a.size()), sq(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff[i] = a[i] - b[i];
    absdiff[i] = std::abs(diff[i]);
    sq[i] = diff[i] * diff[i];
  }
  r.mean_abs_diff = detail::mean(absdiff);
  r.mean_abs_diff_sd = detail::sample_sd(absdiff);
  r.mse = detail::mean(sq);
  r.mse_sd = detail::sample_sd(sq);
  const double bias = detail::mean(diff);
  const double sd = detail::sample_sd(diff);
  r.bland_altman = {bias, bias - 1.96 * sd, bias + 1.96 * sd};
  return r;
}

enum class IccBand { Slight, Fair, Moderate, Substantial, Excellent };

template <>
struct EnumNames<IccBand> {
  static constexpr std::array<std::string_view, 5> names = {
      "slight", "fair", "moderate", "substantial", "excellent"};
};

/// Reliability bands: slight <= 0.20 < fair <= 0.40 < moderate <= 0.60 <
/// substantial <= 0.80 < excellent. Negative values are slight.
constexpr IccBand icc_interpretation(double icc) noexcept {
  if (icc <= 0.20) return IccBand::Slight;
  if (icc <= 0.40) return IccBand::Fair;
  if (icc <= 0.60) return IccBand::Moderate;
  if (icc <= 0.80) return IccBand::Substantial;
  return IccBand::Excellent;
}

}  // namespace angio
