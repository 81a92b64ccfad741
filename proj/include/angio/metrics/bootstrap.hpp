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
#include <optional>
#include <span>
#include <vector>

#include "angio/core/error.hpp"
#include "angio/core/rng.hpp"

namespace angio {

struct BootstrapOptions {
  double fraction = 0.8;
  std::size_t iterations = 1000;
  std::uint64_t seed = 20210101;
};

struct ConfidenceInterval {
  double lower = 0.0;  // 5th percentile
  double upper = 0.0;  // 95th percentile
  std::size_t redraws = 0;
};

/// Linear-interpolated percentile of sorted values (q in [0, 1]).
inline double percentile_sorted(std::span<const double> sorted, double q) {
  require(!sorted.empty(), "percentile of an empty sample");
  const double pos = q * double(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - double(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

/// Resamples floor(fraction * n) items with replacement per iteration and
/// returns the 5th/95th percentiles of the metric. Iteration i draws from
/// Rng(seed + i), so iterations are independent and reproducible. Resamples
/// where the metric is undefined (nullopt) are redrawn from the same stream;
/// the call fails once redraws outnumber the requested iterations.
template <typename Sample, typename Metric>
ConfidenceInterval bootstrap_ci(std::span<const Sample> data, Metric&& metric,
                                const BootstrapOptions& opts = {}) {
  require(!data.empty(), "bootstrap: empty data");
  require(opts.iterations >= 1, "bootstrap: iterations must be >= 1");
  require(opts.fraction > 0.0 && opts.fraction <= 1.0,
          "bootstrap: fraction must be in (0, 1]");
  const std::size_t m = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(opts.fraction * double(data.size()))));

  ConfidenceInterval ci;
  std::vector<double> values;
  values.reserve(opts.iterations);
  std::vector<Sample> resample(m);
  for (std::size_t it = 0; it < opts.iterations; ++it) {
    Rng rng(opts.seed + it);
    while (true) {
      for (auto& s : resample) s = data[rng.index(data.size())];
      const std::optional<double> v = metric(std::span<const Sample>(resample));
      if (v) {
        values.push_back(*v);
        break;
      }
      ++ci.redraws;
      require(ci.redraws <= opts.iterations,
              "bootstrap: metric undefined on more than half of the resamples");
    }
  }
  std::sort(values.begin(), values.end());
  ci.lower = percentile_sorted(values, 0.05);
  ci.upper = percentile_sorted(values, 0.95);
  return ci;
}

}  // namespace angio
