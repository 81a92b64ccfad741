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
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "angio/core/error.hpp"
#include "angio/detect/crop.hpp"
#include "angio/ingest/frame.hpp"
#include "angio/metrics/roc.hpp"

namespace angio {

/// Binary artery mask; 1 = artery pixel.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  Mask() = default;
  Mask(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {
    require(w >= 1 && h >= 1, "mask dimensions must be >= 1");
  }

  std::uint8_t at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return bits[static_cast<std::size_t>(y) * width + x];
  }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto b : bits) n += b ? 1 : 0;
    return n;
  }

  /// 0/255 image for PNG/PGM output.
  Frame to_frame() const {
    std::vector<std::uint8_t> px(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) px[i] = bits[i] ? 255 : 0;
    return Frame(width, height, std::move(px));
  }

  static Mask from_frame(const Frame& f) {
    Mask m(f.width(), f.height());
    for (std::size_t i = 0; i < m.bits.size(); ++i)
      m.bits[i] = f.pixels()[i] >= 128 ? 1 : 0;
    return m;
  }

  bool operator==(const Mask&) const = default;
};

/// Per-pixel artery probability in [0, 1].
struct ProbabilityMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  bool operator==(const ProbabilityMap&) const = default;
};

inline constexpr int kOtsuLevels = 256;

/// Otsu cut over a histogram: class 0 is levels < cut, class 1 levels >=
/// cut, cut in [1, L-1]. Maximises between-class variance; near-equal
/// variances (relative 1e-12) resolve to the lowest cut.
inline std::size_t otsu_threshold(std::span<const std::uint64_t> histogram) {
  std::size_t distinct = 0;
  for (auto c : histogram) distinct += c ? 1 : 0;
  require(distinct >= 2, "otsu: histogram needs at least two occupied levels");

  long double n_total = 0, s_total = 0;
  for (std::size_t i = 0; i < histogram.size(); ++i) {
    n_total += histogram[i];
    s_total += static_cast<long double>(histogram[i]) * i;
  }
  long double n0 = 0, s0 = 0;
  long double best_var = -1;
  std::size_t best_cut = 1;
  for (std::size_t cut = 1; cut < histogram.size(); ++cut) {
    n0 += histogram[cut - 1];
    s0 += static_cast<long double>(histogram[cut - 1]) * (cut - 1);
    const long double n1 = n_total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const long double diff = s0 * n1 - (s_total - s0) * n0;
    // Proportional to w0 w1 (mu0 - mu1)^2.
    const long double var = diff * diff / (n0 * n1);
    if (var > best_var * (1 + 1e-12L) || best_var < 0) {
      best_var = var;
      best_cut = cut;
    }
  }
  return best_cut;
}

inline int quantize_probability(double p) {
  return static_cast<int>(std::lround(std::clamp(p, 0.0, 1.0) * (kOtsuLevels - 1)));
}

/// Quantises the map to 256 levels, finds the Otsu cut and keeps pixels at
/// or above it.
inline Mask otsu_binarize(const ProbabilityMap& map) {
  std::vector<std::uint64_t> hist(kOtsuLevels, 0);
  for (double v : map.values) ++hist[quantize_probability(v)];
  const std::size_t cut = otsu_threshold(hist);
  Mask m(map.width, map.height);
  for (std::size_t i = 0; i < map.values.size(); ++i)
    m.bits[i] = quantize_probability(map.values[i]) >= static_cast<int>(cut);
  return m;
}

inline CroppedImage apply_mask(const CroppedImage& img, const Mask& m) {
  require(img.pixels.width() == m.width && img.pixels.height() == m.height,
          "apply_mask: dimension mismatch");
  CroppedImage out = img;
  auto& px = out.pixels.pixels();
  for (std::size_t i = 0; i < px.size(); ++i)
    if (!m.bits[i]) px[i] = 0;
  return out;
}

/// 2|A n B| / (|A| + |B|); two empty masks agree perfectly.
inline double dice(const Mask& a, const Mask& b) {
  require(a.width == b.width && a.height == b.height,
          "dice: dimension mismatch");
  std::size_t inter = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    na += a.bits[i] ? 1 : 0;
    nb += b.bits[i] ? 1 : 0;
    inter += (a.bits[i] && b.bits[i]) ? 1 : 0;
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * double(inter) / double(na + nb);
}

struct SegQuality {
  double auc = 0.0;
  double pr_auc = 0.0;
  double sum = 0.0;  // 2.0 is perfect
};

inline SegQuality seg_quality(const ProbabilityMap& map, const Mask& truth) {
  require(map.width == truth.width && map.height == truth.height,
          "seg_quality: dimension mismatch");
  std::vector<int> labels(truth.bits.begin(), truth.bits.end());
  SegQuality q;
  q.auc = roc_auc(map.values, labels);
  q.pr_auc = pr_auc(map.values, labels);
  q.sum = q.auc + q.pr_auc;
  return q;
}

}  // namespace angio
