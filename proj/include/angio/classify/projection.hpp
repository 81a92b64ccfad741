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

#include <array>
#include <optional>

#include "angio/classify/classes.hpp"
#include "angio/core/error.hpp"

namespace angio {

namespace detail {

// Angle bands of the projection table. Each band is [lo, hi); hi is also
// included when no neighbouring band starts there.
struct AngleBand {
  double lo;
  double hi;
  bool hi_closed;

  constexpr bool contains(double a) const noexcept {
    return a >= lo && (a < hi || (hi_closed && a == hi));
  }
};

enum class PrimaryBand { RaoLateral, Rao, Ap, Lao, LaoLateral };
enum class SecondaryBand { Caudal, Straight, Cranial };

inline constexpr std::array<std::pair<PrimaryBand, AngleBand>, 5> kPrimaryBands{{
    {PrimaryBand::RaoLateral, {-110.0, -70.0, true}},
    {PrimaryBand::Rao, {-45.0, -15.0, false}},
    {PrimaryBand::Ap, {-15.0, 15.0, false}},
    {PrimaryBand::Lao, {15.0, 45.0, true}},
    {PrimaryBand::LaoLateral, {70.0, 110.0, true}},
}};

inline constexpr std::array<std::pair<SecondaryBand, AngleBand>, 3>
    kSecondaryBands{{
        {SecondaryBand::Caudal, {-45.0, -15.0, false}},
        {SecondaryBand::Straight, {-15.0, 15.0, false}},
        {SecondaryBand::Cranial, {15.0, 45.0, true}},
    }};

template <typename Band, std::size_t N>
std::optional<Band> find_band(
    const std::array<std::pair<Band, AngleBand>, N>& bands, double a) {
  for (const auto& [band, range] : bands)
    if (range.contains(a)) return band;
  return std::nullopt;
}

}  // namespace detail

/// Maps acquisition angles to one of the 12 projection classes. Angles
/// outside the metadata domain are rejected rather than clamped.
inline ProjectionClass bin_projection_angles(double primary_deg,
                                             double secondary_deg) {
  require(primary_deg >= -180.0 && primary_deg <= 180.0,
          "primary angle outside [-180, 180]", ErrorKind::kInvalidInput);
  require(secondary_deg >= -50.0 && secondary_deg <= 50.0,
          "secondary angle outside [-50, 50]", ErrorKind::kInvalidInput);
  using detail::PrimaryBand;
  using detail::SecondaryBand;
  const auto p = detail::find_band(detail::kPrimaryBands, primary_deg);
  const auto s = detail::find_band(detail::kSecondaryBands, secondary_deg);
  if (!p || !s) return ProjectionClass::Other;

  switch (*p) {
    case PrimaryBand::Rao:
      switch (*s) {
        case SecondaryBand::Cranial: return ProjectionClass::RAO_Cranial;
        case SecondaryBand::Straight: return ProjectionClass::RAO_Straight;
        case SecondaryBand::Caudal: return ProjectionClass::RAO_Caudal;
      }
      break;
    case PrimaryBand::Ap:
      switch (*s) {
        case SecondaryBand::Cranial: return ProjectionClass::AP_Cranial;
        case SecondaryBand::Straight: return ProjectionClass::AP;
        case SecondaryBand::Caudal: return ProjectionClass::AP_Caudal;
      }
      break;
    case PrimaryBand::Lao:
      switch (*s) {
        case SecondaryBand::Cranial: return ProjectionClass::LAO_Cranial;
        case SecondaryBand::Straight: return ProjectionClass::LAO_Straight;
        case SecondaryBand::Caudal: return ProjectionClass::LAO_Caudal;
      }
      break;
    case PrimaryBand::LaoLateral:
      if (*s == SecondaryBand::Straight) return ProjectionClass::LAO_Lateral;
      break;
    case PrimaryBand::RaoLateral:
      if (*s == SecondaryBand::Straight) return ProjectionClass::RAO_Lateral;
      break;
  }
  return ProjectionClass::Other;
}

}  // namespace angio
