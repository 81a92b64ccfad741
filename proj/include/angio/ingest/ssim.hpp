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
#include <cstddef>
#include <vector>

#include "angio/core/error.hpp"
#include "angio/ingest/frame.hpp"

namespace angio {

/// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, L = 255, mean over the valid (unpadded) map. Frames smaller
/// than the window use a window of min(width, height) taps.
struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
};

namespace detail {

struct SsimGeometry {
  int width;
  int height;
  int taps;
  int out_w;
  int out_h;
  std::vector<double> kernel;
};

inline SsimGeometry ssim_geometry(int width, int height, const SsimParams& p) {
  SsimGeometry g;
  g.width = width;
  g.height = height;
  g.taps = std::min({p.window, width, height});
  g.out_w = width - g.taps + 1;
  g.out_h = height - g.taps + 1;
  g.kernel.resize(g.taps);
  const double c = (g.taps - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < g.taps; ++i) {
    g.kernel[i] = std::exp(-(i - c) * (i - c) / (2.0 * p.sigma * p.sigma));
    sum += g.kernel[i];
  }
  for (auto& k : g.kernel) k /= sum;
  return g;
}

// Separable valid-mode Gaussian filter. scratch holds the horizontal pass.
inline void gaussian_valid(const SsimGeometry& g, const double* src,
                           std::vector<double>& scratch,
                           std::vector<double>& out) {
  const int w = g.width, h = g.height, ow = g.out_w, oh = g.out_h;
  const int k = g.taps;
  scratch.assign(static_cast<std::size_t>(h) * ow, 0.0);
  for (int y = 0; y < h; ++y) {
    const double* row = src + static_cast<std::size_t>(y) * w;
    double* dst = scratch.data() + static_cast<std::size_t>(y) * ow;
    for (int i = 0; i < k; ++i) {
      const double wgt = g.kernel[i];
      const double* s = row + i;
      for (int x = 0; x < ow; ++x) dst[x] += wgt * s[x];
    }
  }
  out.assign(static_cast<std::size_t>(oh) * ow, 0.0);
  for (int y = 0; y < oh; ++y) {
    double* dst = out.data() + static_cast<std::size_t>(y) * ow;
    for (int i = 0; i < k; ++i) {
      const double wgt = g.kernel[i];
      const double* s = scratch.data() + static_cast<std::size_t>(y + i) * ow;
      for (int x = 0; x < ow; ++x) dst[x] += wgt * s[x];
    }
  }
}

}  // namespace detail

/// Local statistics of one frame, reusable against many comparison frames.
class SsimReference {
 public:
  explicit SsimReference(const Frame& ref, SsimParams params = {})
      : params_(params),
        geom_(detail::ssim_geometry(ref.width(), ref.height(), params)),
        values_(ref.pixels().begin(), ref.pixels().end()) {
    std::vector<double> sq(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i)
      sq[i] = values_[i] * values_[i];
    detail::gaussian_valid(geom_, values_.data(), scratch_, mean_);
    detail::gaussian_valid(geom_, sq.data(), scratch_, mean_sq_);
  }

  int width() const noexcept { return geom_.width; }
  int height() const noexcept { return geom_.height; }

  double compare(const Frame& other) const {
    require(other.width() == geom_.width && other.height() == geom_.height,
            "ssim: frame dimension mismatch");
    const std::size_t n = values_.size();
    std::vector<double> b(other.pixels().begin(), other.pixels().end());
    std::vector<double> bb(n), ab(n);
    for (std::size_t i = 0; i < n; ++i) {
      bb[i] = b[i] * b[i];
      ab[i] = values_[i] * b[i];
    }
    std::vector<double> scratch, mu_b, e_bb, e_ab;
    detail::gaussian_valid(geom_, b.data(), scratch, mu_b);
    detail::gaussian_valid(geom_, bb.data(), scratch, e_bb);
    detail::gaussian_valid(geom_, ab.data(), scratch, e_ab);

    const double c1 = std::pow(params_.k1 * params_.dynamic_range, 2);
    const double c2 = std::pow(params_.k2 * params_.dynamic_range, 2);
    double total = 0.0;
    for (std::size_t i = 0; i < mu_b.size(); ++i) {
      const double ma = mean_[i];
      const double mb = mu_b[i];
      const double va = mean_sq_[i] - ma * ma;
      const double vb = e_bb[i] - mb * mb;
      const double cov = e_ab[i] - ma * mb;
      total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
               ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
    return total / static_cast<double>(mu_b.size());
  }

 private:
  SsimParams params_;
  detail::SsimGeometry geom_;
  std::vector<double> values_;
  std::vector<double> mean_;
  std::vector<double> mean_sq_;
  std::vector<double> scratch_;
};

inline double ssim(const Frame& a, const Frame& b, SsimParams params = {}) {
  require(a.same_shape(b), "ssim: frame dimension mismatch");
  return SsimReference(a, params).compare(b);
}

}  // namespace angio
