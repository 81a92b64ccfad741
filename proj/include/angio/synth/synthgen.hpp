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
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "angio/classify/projection.hpp"
#include "angio/core/error.hpp"
#include "angio/core/rng.hpp"
#include "angio/detect/postprocess.hpp"
#include "angio/ingest/study.hpp"
#include "angio/synth/truth.hpp"

namespace angio {

struct StenosisSpec {
  DetectionClass segment = DetectionClass::ProxLAD;
  double narrowing = 0.5;  // fraction of lumen width removed, in [0, 1]
  double position = 0.5;   // along the host segment centerline, in [0, 1]
};

struct SynthConfig {
  std::string study_id = "S0001";
  std::string patient_id = "P0001";
  std::string acquisition_date = "2021-01-01";
  std::size_t n_videos = 4;
  std::size_t frames_per_video = 24;
  int frame_side = 128;
  double base_width = 8.0;  // vessel full width at half maximum, px
  std::vector<StenosisSpec> stenoses;
  std::optional<std::size_t> peak_index;  // random per video when unset
  double ramp_tau = 3.0;                  // opacity falloff in frames
  double noise = 3.0;                     // uniform noise amplitude, grey levels
  double jitter = 1.0;                    // scales geometric variation, 0 = canonical
  std::size_t non_coronary_videos = 0;    // appended FemoralArtery videos
  std::size_t guidewire_videos = 0;       // coronary videos carrying a guidewire
  std::uint64_t seed = 1;
};

inline constexpr double kBackground = 200.0;
inline constexpr double kContrastDepth = 120.0;
inline constexpr double kStenosisBoxScale = 0.55;
inline constexpr double kMaxForeignIou = 0.15;

/// Lesion narrowings are drawn on a whole-percent grid so percent = 100·s
/// holds exactly.
inline std::vector<StenosisSpec> random_stenoses(Rng& rng, std::size_t count) {
  std::vector<DetectionClass> pool(kSegments.begin(), kSegments.end());
  std::vector<StenosisSpec> out;
  for (std::size_t i = 0; i < count && !pool.empty(); ++i) {
    const auto pick = rng.index(pool.size());
    StenosisSpec s;
    s.segment = pool[pick];
    pool.erase(pool.begin() + std::ptrdiff_t(pick));
    s.narrowing = double(rng.integer(20, 100)) / 100.0;
    s.position = rng.uniform(0.4, 0.6);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return ordinal(a.segment) < ordinal(b.segment);
  });
  return out;
}

inline int narrowing_percent(double s) { return int(std::lround(s * 100.0)); }

namespace synth_detail {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Curve {
  DetectionClass segment;
  std::array<Point, 3> ctrl;  // quadratic Bezier control points, normalized
};

inline Point bezier(const std::array<Point, 3>& c, double t) {
  const double u = 1.0 - t;
  return {u * u * c[0].x + 2 * u * t * c[1].x + t * t * c[2].x,
          u * u * c[0].y + 2 * u * t * c[1].y + t * t * c[2].y};
}

inline bool is_right(DetectionClass s) {
  using D = DetectionClass;
  return s == D::ProxRCA || s == D::MidRCA || s == D::DistRCA || s == D::PDA ||
         s == D::Posterolateral;
}

inline AnatomyClass artery_of(DetectionClass s) {
  return is_right(s) ? AnatomyClass::RightCoronary : AnatomyClass::LeftCoronary;
}

inline std::vector<Curve> canonical_tree(AnatomyClass a) {
  using D = DetectionClass;
  if (a == AnatomyClass::LeftCoronary)
    return {{D::LeftMain, {{{0.20, 0.16}, {0.27, 0.18}, {0.34, 0.24}}}},
            {D::ProxLAD, {{{0.34, 0.24}, {0.43, 0.31}, {0.50, 0.42}}}},
            {D::MidLAD, {{{0.50, 0.42}, {0.57, 0.54}, {0.62, 0.66}}}},
            {D::DistLAD, {{{0.62, 0.66}, {0.67, 0.78}, {0.70, 0.90}}}},
            {D::ProxLCx, {{{0.34, 0.24}, {0.27, 0.33}, {0.22, 0.45}}}},
            {D::DistLCx, {{{0.22, 0.45}, {0.17, 0.58}, {0.16, 0.72}}}}};
  if (a == AnatomyClass::RightCoronary)
    return {{D::ProxRCA, {{{0.22, 0.14}, {0.38, 0.10}, {0.56, 0.18}}}},
            {D::MidRCA, {{{0.56, 0.18}, {0.74, 0.28}, {0.78, 0.48}}}},
            {D::DistRCA, {{{0.78, 0.48}, {0.78, 0.64}, {0.64, 0.72}}}},
            {D::PDA, {{{0.64, 0.72}, {0.52, 0.77}, {0.38, 0.86}}}},
            {D::Posterolateral, {{{0.64, 0.72}, {0.66, 0.82}, {0.76, 0.90}}}}};
  // Non-coronary views get a single large vessel with no segment labels.
  return {{D::Catheter, {{{0.30, 0.05}, {0.45, 0.50}, {0.55, 0.95}}}}};
}

/// Rotates, scales and shifts the whole tree, then nudges each control
/// point. Shared endpoints stay shared.
inline std::vector<Curve> jittered_tree(AnatomyClass a, Rng& rng, double amount) {
  auto tree = canonical_tree(a);
  const double angle = rng.uniform(-0.15, 0.15) * amount;
  const double scale = 1.0 + rng.uniform(-0.08, 0.04) * amount;
  const double dx = rng.uniform(-0.03, 0.03) * amount;
  const double dy = rng.uniform(-0.03, 0.03) * amount;
  const double ca = std::cos(angle), sa = std::sin(angle);
  auto place = [&](Point p) {
    const double x = p.x - 0.5, y = p.y - 0.5;
    return Point{std::clamp(0.5 + scale * (ca * x - sa * y) + dx, 0.04, 0.96),
                 std::clamp(0.5 + scale * (sa * x + ca * y) + dy, 0.04, 0.96)};
  };
  for (auto& c : tree) {
    for (auto& p : c.ctrl) p = place(p);
    c.ctrl[1].x += rng.uniform(-0.015, 0.015) * amount;
    c.ctrl[1].y += rng.uniform(-0.015, 0.015) * amount;
  }
  return tree;
}

/// Smooth compact bump, 1 at the centre and 0 beyond half_width.
inline double bump(double t, double centre, double half_width) {
  const double u = (t - centre) / half_width;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

inline double curve_length(const Curve& c, int side) {
  double len = 0.0;
  Point prev = bezier(c.ctrl, 0.0);
  for (int i = 1; i <= 64; ++i) {
    const Point p = bezier(c.ctrl, i / 64.0);
    len += std::hypot(p.x - prev.x, p.y - prev.y);
    prev = p;
  }
  return len * side;
}

struct Sample {
  Point p;        // pixel coordinates
  double width;   // local full width at half maximum
};

struct Narrowing {
  double narrowing;
  double position;
  double half_width;  // in curve parameter units
};

inline std::vector<Sample> sample_curve(const Curve& c, int side, double base_width,
                                        const std::optional<Narrowing>& n) {
  const double len = curve_length(c, side);
  const int count = std::max(2, int(std::ceil(len * 4.0)));
  std::vector<Sample> out;
  out.reserve(std::size_t(count) + 1);
  for (int i = 0; i <= count; ++i) {
    const double t = double(i) / count;
    const Point q = bezier(c.ctrl, t);
    double w = base_width;
    if (n) w *= 1.0 - n->narrowing * bump(t, n->position, n->half_width);
    out.push_back({{q.x * side, q.y * side}, w});
  }
  return out;
}

/// Profile of the vessel tree: each pixel takes the Gaussian cross-section
/// of its nearest centerline sample, so the half-maximum contour sits
/// exactly at half the local width from the centerline.
inline std::vector<double> render_profile(const std::vector<std::vector<Sample>>& curves,
                                          int side, double base_width) {
  const std::size_t n = std::size_t(side) * std::size_t(side);
  std::vector<double> best_d2(n, INFINITY);
  std::vector<double> best_w(n, 0.0);
  const double radius = 3.0 * base_width / 2.3548 + 1.0;
  for (const auto& samples : curves)
    for (const auto& s : samples) {
      const int x0 = std::max(0, int(std::floor(s.p.x - radius)));
      const int x1 = std::min(side - 1, int(std::ceil(s.p.x + radius)));
      const int y0 = std::max(0, int(std::floor(s.p.y - radius)));
      const int y1 = std::min(side - 1, int(std::ceil(s.p.y + radius)));
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
          const double ddx = x + 0.5 - s.p.x, ddy = y + 0.5 - s.p.y;
          const double d2 = ddx * ddx + ddy * ddy;
          const std::size_t i = std::size_t(y) * side + x;
          if (d2 < best_d2[i]) {
            best_d2[i] = d2;
            best_w[i] = s.width;
          }
        }
    }
  std::vector<double> profile(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(best_w[i] > 1e-9) || !std::isfinite(best_d2[i])) continue;
    const double sigma = best_w[i] / 2.3548;
    profile[i] = std::exp(-best_d2[i] / (2.0 * sigma * sigma));
  }
  return profile;
}

inline BoundingBox curve_box(const std::vector<Sample>& samples, double base_width,
                             int side) {
  BoundingBox b{INFINITY, INFINITY, -INFINITY, -INFINITY};
  for (const auto& s : samples) {
    b.x_min = std::min(b.x_min, s.p.x);
    b.y_min = std::min(b.y_min, s.p.y);
    b.x_max = std::max(b.x_max, s.p.x);
    b.y_max = std::max(b.y_max, s.p.y);
  }
  const double r = base_width / 2.0;
  return {std::clamp(b.x_min - r, 0.0, double(side)), std::clamp(b.y_min - r, 0.0, double(side)),
          std::clamp(b.x_max + r, 0.0, double(side)), std::clamp(b.y_max + r, 0.0, double(side))};
}

/// A box of kStenosisBoxScale times the host extent, centred on the lesion
/// and shifted to lie inside the host box.
inline BoundingBox stenosis_box(const BoundingBox& host, Point centre) {
  const double w = host.width() * kStenosisBoxScale;
  const double h = host.height() * kStenosisBoxScale;
  const double x0 = std::clamp(centre.x - w / 2.0, host.x_min, host.x_max - w);
  const double y0 = std::clamp(centre.y - h / 2.0, host.y_min, host.y_max - h);
  return {x0, y0, x0 + w, y0 + h};
}

struct AngleRange {
  double lo;
  double hi;
};

// Interiors of the projection bands, well clear of every boundary.
inline std::pair<AngleRange, AngleRange> projection_interior(ProjectionClass p) {
  constexpr AngleRange rao{-40, -20}, ap{-10, 10}, lao{20, 40};
  constexpr AngleRange rao_lat{-105, -75}, lao_lat{75, 105}, other{130, 170};
  constexpr AngleRange caudal{-40, -20}, straight{-10, 10}, cranial{20, 40};
  using P = ProjectionClass;
  switch (p) {
    case P::RAO_Cranial: return {rao, cranial};
    case P::AP_Cranial: return {ap, cranial};
    case P::LAO_Cranial: return {lao, cranial};
    case P::RAO_Straight: return {rao, straight};
    case P::AP: return {ap, straight};
    case P::RAO_Caudal: return {rao, caudal};
    case P::AP_Caudal: return {ap, caudal};
    case P::LAO_Caudal: return {lao, caudal};
    case P::LAO_Straight: return {lao, straight};
    case P::LAO_Lateral: return {lao_lat, straight};
    case P::RAO_Lateral: return {rao_lat, straight};
    case P::Other: break;
  }
  return {other, straight};
}

inline double draw_angle(Rng& rng, AngleRange r) {
  return std::round(rng.uniform(r.lo, r.hi) * 10.0) / 10.0;
}

inline bool shows_all(ProjectionClass p, AnatomyClass a,
                      const std::vector<DetectionClass>& segments) {
  const auto ex = excluded_segments(p, a);
  for (auto s : segments)
    if (std::find(ex.begin(), ex.end(), s) != ex.end()) return false;
  return true;
}

inline void validate(const SynthConfig& cfg) {
  auto check = [](bool ok, const std::string& what) {
    require(ok, "synth config: " + what, ErrorKind::kConfig);
  };
  check(!cfg.study_id.empty() && !cfg.patient_id.empty(), "ids must be non-empty");
  check(is_calendar_date(cfg.acquisition_date), "acquisition_date must be YYYY-MM-DD");
  check(cfg.frames_per_video >= 2, "frames_per_video must be >= 2");
  check(cfg.frame_side >= 32 && cfg.frame_side <= 4096, "frame_side must be in [32, 4096]");
  check(cfg.base_width > 0.0 && cfg.base_width <= cfg.frame_side / 8.0,
        "base_width must be in (0, frame_side/8]");
  check(cfg.ramp_tau > 0.0, "ramp_tau must be positive");
  check(cfg.noise >= 0.0 && cfg.noise <= 50.0, "noise must be in [0, 50]");
  check(cfg.jitter >= 0.0 && cfg.jitter <= 2.0, "jitter must be in [0, 2]");
  if (cfg.peak_index)
    check(*cfg.peak_index >= 1 && *cfg.peak_index < cfg.frames_per_video,
          "peak_index must be in [1, frames_per_video)");
  check(cfg.non_coronary_videos + cfg.guidewire_videos <= cfg.n_videos,
        "non_coronary_videos + guidewire_videos exceeds n_videos");
  std::vector<DetectionClass> seen;
  bool left = false, right = false;
  for (const auto& s : cfg.stenoses) {
    check(is_segment(s.segment), "stenosis segment must be a coronary segment");
    check(s.narrowing >= 0.0 && s.narrowing <= 1.0, "narrowing must be in [0, 1]");
    check(std::abs(s.narrowing * 100.0 - std::round(s.narrowing * 100.0)) < 1e-9,
          "narrowing must be a whole percent");
    check(s.position >= 0.0 && s.position <= 1.0, "position must be in [0, 1]");
    check(std::find(seen.begin(), seen.end(), s.segment) == seen.end(),
          "at most one stenosis per segment");
    seen.push_back(s.segment);
    (is_right(s.segment) ? right : left) = true;
  }
  const std::size_t plain =
      cfg.n_videos - cfg.non_coronary_videos - cfg.guidewire_videos;
  check(plain >= std::size_t(left) + std::size_t(right),
        "need one guidewire-free coronary video per stenosed artery");
}

}  // namespace synth_detail

struct SynthStudy {
  Study study;
  GroundTruth truth;
};

/// Renders a deterministic study. Coronary videos come first, guidewire
/// videos after them, non-coronary videos last; the first video of each
/// stenosed artery uses a projection that shows all of its lesions.
inline SynthStudy generate_study(const SynthConfig& cfg) {
  using namespace synth_detail;
  validate(cfg);
  Rng rng(cfg.seed);
  const int side = cfg.frame_side;
  const std::size_t nf = cfg.frames_per_video;

  std::vector<DetectionClass> left_lesions, right_lesions;
  for (const auto& s : cfg.stenoses)
    (is_right(s.segment) ? right_lesions : left_lesions).push_back(s.segment);

  const std::size_t coronary = cfg.n_videos - cfg.non_coronary_videos;
  const std::size_t plain = coronary - cfg.guidewire_videos;
  std::vector<AnatomyClass> anatomy(cfg.n_videos, AnatomyClass::FemoralArtery);
  {
    // Alternate arteries over the plain videos, starting with whichever
    // carries lesions so each stenosed artery appears at least once.
    std::vector<AnatomyClass> order;
    if (!left_lesions.empty() || right_lesions.empty()) order.push_back(AnatomyClass::LeftCoronary);
    if (!right_lesions.empty()) order.push_back(AnatomyClass::RightCoronary);
    if (order.size() == 1)
      order.push_back(order[0] == AnatomyClass::LeftCoronary ? AnatomyClass::RightCoronary
                                                             : AnatomyClass::LeftCoronary);
    for (std::size_t i = 0; i < coronary; ++i)
      anatomy[i] = i < plain ? order[i % order.size()]
                             : order[rng.index(order.size())];
  }

  SynthStudy out;
  out.study.study_id = cfg.study_id;
  out.study.patient_id = cfg.patient_id;
  out.truth.study_id = cfg.study_id;
  for (const auto& s : cfg.stenoses)
    out.truth.stenoses.push_back({s.segment, narrowing_percent(s.narrowing)});

  bool first_left = true, first_right = true;
  for (std::size_t vi = 0; vi < cfg.n_videos; ++vi) {
    const AnatomyClass a = anatomy[vi];
    const bool is_coronary = vi < coronary;
    char vid[64];
    std::snprintf(vid, sizeof vid, "%s_v%02zu", cfg.study_id.c_str(), vi + 1);

    // Projection.
    ProjectionClass proj;
    if (!is_coronary) {
      proj = from_ordinal<ProjectionClass>(rng.index(enum_count<ProjectionClass>));
    } else {
      const auto& lesions = a == AnatomyClass::LeftCoronary ? left_lesions : right_lesions;
      bool& first = a == AnatomyClass::LeftCoronary ? first_left : first_right;
      std::vector<ProjectionClass> allowed;
      for (auto p : all_values<ProjectionClass>())
        if (p != ProjectionClass::Other && (!first || vi >= plain || shows_all(p, a, lesions)))
          allowed.push_back(p);
      if (vi < plain) first = false;
      proj = allowed[rng.index(allowed.size())];
    }
    const auto [prim_range, sec_range] = projection_interior(proj);
    VideoMetadata meta;
    meta.primary_angle_deg = draw_angle(rng, prim_range);
    meta.secondary_angle_deg = draw_angle(rng, sec_range);
    meta.study_id = cfg.study_id;
    meta.patient_id = cfg.patient_id;
    meta.video_id = vid;
    meta.acquisition_date = cfg.acquisition_date;

    VideoTruth vt;
    vt.video_id = vid;
    vt.projection = proj;
    vt.anatomy = a;
    vt.frame_count = nf;
    vt.frame_width = side;
    vt.frame_height = side;
    vt.peak_frame = cfg.peak_index
                        ? *cfg.peak_index
                        : std::size_t(nf >= 5 ? rng.integer(2, std::int64_t(nf) - 2)
                                              : std::int64_t(nf) - 1);
    vt.mask_file = std::string(vid) + "/mask.png";

    // Geometry, retried until every lesion box overlaps its host clearly
    // better than any other segment.
    std::vector<std::vector<Sample>> samples;
    bool placed = false;
    for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
      const auto tree = jittered_tree(is_coronary ? a : AnatomyClass::FemoralArtery, rng,
                                      attempt == 0 ? cfg.jitter : cfg.jitter * 0.5);
      samples.clear();
      vt.segments.clear();
      vt.stenoses.clear();
      for (const auto& c : tree) {
        std::optional<Narrowing> n;
        const StenosisSpec* spec = nullptr;
        if (is_coronary)
          for (const auto& s : cfg.stenoses)
            if (s.segment == c.segment) spec = &s;
        if (spec) {
          const double len = curve_length(c, side);
          n = Narrowing{spec->narrowing, spec->position,
                        std::min(0.3, 3.0 * cfg.base_width / std::max(len, 1.0))};
        }
        samples.push_back(sample_curve(c, side, cfg.base_width, n));
        if (!is_coronary) continue;
        const BoundingBox host = curve_box(samples.back(), cfg.base_width, side);
        vt.segments.push_back({c.segment, host});
        if (spec) {
          const Point q = bezier(c.ctrl, spec->position);
          vt.stenoses.push_back({c.segment, stenosis_box(host, {q.x * side, q.y * side}),
                                 narrowing_percent(spec->narrowing)});
        }
      }
      placed = true;
      for (const auto& st : vt.stenoses)
        for (const auto& sg : vt.segments)
          if (sg.segment != st.segment && iou(st.box, sg.box) > kMaxForeignIou) placed = false;
    }
    require(placed, "synth: could not place stenosis boxes in video " + std::string(vid),
            ErrorKind::kPrecondition);

    auto profile = render_profile(samples, side, cfg.base_width);
    vt.mask = Mask(side, side);
    for (std::size_t i = 0; i < profile.size(); ++i) vt.mask.bits[i] = profile[i] >= 0.5;

    // Guidewire: a thin straight wire present from the first frame on.
    std::vector<double> wire;
    if (is_coronary && vi >= plain) {
      const Curve c{DetectionClass::Guidewire, {{{0.08, 0.04}, {0.25, 0.30}, {0.45, 0.62}}}};
      const auto ws = sample_curve(c, side, 2.0, std::nullopt);
      wire = render_profile({ws}, side, 2.0);
      vt.guidewire_box = curve_box(ws, 2.0, side);
      for (std::size_t k = 0; k < nf; ++k) vt.guidewire_frames.push_back(k);
    }

    Video video;
    video.metadata = meta;
    for (std::size_t k = 0; k < nf; ++k) {
      const double opacity =
          k == 0 ? 0.0
                 : std::exp(-std::abs(double(k) - double(vt.peak_frame)) / cfg.ramp_tau);
      Frame f(side, side, 0, k);
      auto& px = f.pixels();
      for (std::size_t i = 0; i < px.size(); ++i) {
        double v = kBackground - opacity * kContrastDepth * profile[i];
        if (!wire.empty()) v -= 60.0 * wire[i];
        if (cfg.noise > 0.0) v += rng.uniform(-cfg.noise, cfg.noise);
        px[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
      video.frames.push_back(std::move(f));
    }
    out.study.videos.push_back(std::move(video));
    out.truth.videos.push_back(std::move(vt));
  }
  return out;
}

/// Study layout plus truth.json and one mask PNG per video.
inline void write_study(const SynthStudy& s, const std::filesystem::path& dir) {
  write_study_layout(s.study, dir);
  write_truth(s.truth, dir);
}

}  // namespace angio
