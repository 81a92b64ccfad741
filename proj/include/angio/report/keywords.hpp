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
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "angio/core/csv.hpp"
#include "angio/core/enum.hpp"
#include "angio/core/error.hpp"
#include "angio/detect/types.hpp"

namespace angio {

enum class Vessel { LeftMain, LAD, LCx, RCA, PDA, Posterolateral };

template <>
struct EnumNames<Vessel> {
  static constexpr std::array<std::string_view, 6> names = {
      "LeftMain", "LAD", "LCx", "RCA", "PDA", "Posterolateral"};
};

enum class SegmentPosition { Ostial, Proximal, Mid, Distal };

template <>
struct EnumNames<SegmentPosition> {
  static constexpr std::array<std::string_view, 4> names = {
      "ostial", "proximal", "mid", "distal"};
};

/// What a surface form denotes.
///   vessel    - a coronary vessel whose segment comes from a position word
///   segment   - one of the 11 segments directly (e.g. "pLAD")
///   position  - ostial / proximal / mid / distal
///   exclude   - a branch or graft that is never reported (diagonal, OM...)
///   occlusion - a word that implies a 100% lesion
enum class KeywordKind { Vessel, Segment, Position, Exclude, Occlusion };

template <>
struct EnumNames<KeywordKind> {
  static constexpr std::array<std::string_view, 5> names = {
      "vessel", "segment", "position", "exclude", "occlusion"};
};

struct Keyword {
  std::vector<std::string> tokens;  // lower-case
  KeywordKind kind = KeywordKind::Vessel;
  int value = 0;  // ordinal of Vessel / DetectionClass / SegmentPosition
  std::string surface;
};

/// Lower-cased alphanumeric tokens with their character spans.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!std::isalnum(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    Token t;
    t.begin = i;
    while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) {
      t.text += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
      ++i;
    }
    t.end = i;
    out.push_back(std::move(t));
  }
  return out;
}

// Standard names, abbreviations and spellings; editable as a CSV file with
// the same three columns.
inline constexpr std::string_view kDefaultKeywordsCsv = R"(surface_form,kind,value
left main,vessel,LeftMain
left main artery,vessel,LeftMain
left main coronary,vessel,LeftMain
left main coronary artery,vessel,LeftMain
left main stem,vessel,LeftMain
lm,vessel,LeftMain
lmca,vessel,LeftMain
lmain,vessel,LeftMain
lad,vessel,LAD
left anterior descending,vessel,LAD
left anterior descending artery,vessel,LAD
anterior descending,vessel,LAD
lad artery,vessel,LAD
plad,segment,ProxLAD
mlad,segment,MidLAD
dlad,segment,DistLAD
lcx,vessel,LCx
cx,vessel,LCx
circ,vessel,LCx
circumflex,vessel,LCx
left circumflex,vessel,LCx
left circumflex artery,vessel,LCx
circumflex artery,vessel,LCx
plcx,segment,ProxLCx
pcx,segment,ProxLCx
dlcx,segment,DistLCx
dcx,segment,DistLCx
rca,vessel,RCA
right coronary,vessel,RCA
right coronary artery,vessel,RCA
prca,segment,ProxRCA
mrca,segment,MidRCA
drca,segment,DistRCA
pda,vessel,PDA
rpda,vessel,PDA
posterior descending,vessel,PDA
posterior descending artery,vessel,PDA
right posterior descending,vessel,PDA
right posterior descending artery,vessel,PDA
posterolateral,vessel,Posterolateral
posterolateral artery,vessel,Posterolateral
posterolateral branch,vessel,Posterolateral
right posterolateral,vessel,Posterolateral
posterior lateral,vessel,Posterolateral
pl,vessel,Posterolateral
plb,vessel,Posterolateral
plv,vessel,Posterolateral
rpl,vessel,Posterolateral
rplb,vessel,Posterolateral
ostial,position,ostial
ostium,position,ostial
proximal,position,proximal
prox,position,proximal
mid,position,mid
middle,position,mid
distal,position,distal
dist,position,distal
diagonal,exclude,
diagonals,exclude,
diag,exclude,
d1,exclude,
d2,exclude,
d3,exclude,
marginal,exclude,
marginals,exclude,
obtuse marginal,exclude,
om,exclude,
om1,exclude,
om2,exclude,
om3,exclude,
acute marginal,exclude,
septal,exclude,
septals,exclude,
ramus,exclude,
ramus intermedius,exclude,
left posterior descending,exclude,
left posterior descending artery,exclude,
left pda,exclude,
lpda,exclude,
left posterolateral,exclude,
left posterolateral branch,exclude,
lpl,exclude,
lplb,exclude,
graft,exclude,
grafts,exclude,
bypass,exclude,
svg,exclude,
saphenous vein graft,exclude,
vein graft,exclude,
lima,exclude,
rima,exclude,
occlusion,occlusion,
occlusions,occlusion,
occluded,occlusion,
occlude,occlusion,
occludes,occlusion,
obstruction,occlusion,
obstructions,occlusion,
obstructed,occlusion,
thrombus,occlusion,
thrombi,occlusion,
thrombosed,occlusion,
thrombotic,occlusion,
cto,occlusion,
)";

/// Case-insensitive surface-form table. Matching is longest-first over
/// token sequences.
class KeywordTable {
 public:
  KeywordTable() = default;

  static KeywordTable from_csv(std::istream& in) {
    KeywordTable t;
    const auto rows = csv::read_all(in);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (i == 0 && !r.empty() && r[0] == "surface_form") continue;
      if (!r.empty() && !r[0].empty() && r[0][0] == '#') continue;
      const auto where = "keyword table row " + std::to_string(i + 1);
      require(r.size() >= 2, where + ": expected surface_form,kind[,value]",
              ErrorKind::kConfig);
      t.add(r[0], parse_enum_or_throw<KeywordKind>(r[1], "keyword kind"),
            r.size() > 2 ? r[2] : std::string());
    }
    return t;
  }

  static KeywordTable from_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    require(in.good(), "cannot open keyword table " + p.string(),
            ErrorKind::kConfig);
    return from_csv(in);
  }

  static const KeywordTable& defaults() {
    static const KeywordTable t = [] {
      std::istringstream in{std::string(kDefaultKeywordsCsv)};
      return from_csv(in);
    }();
    return t;
  }

  void add(std::string_view surface, KeywordKind kind, std::string_view value) {
    Keyword k;
    k.surface = std::string(surface);
    k.kind = kind;
    for (auto& tok : tokenize(surface)) k.tokens.push_back(tok.text);
    require(!k.tokens.empty(), "empty keyword surface form", ErrorKind::kConfig);
    switch (kind) {
      case KeywordKind::Vessel:
        k.value = int(ordinal(parse_enum_or_throw<Vessel>(value, "vessel")));
        break;
      case KeywordKind::Segment: {
        const auto seg = parse_enum_or_throw<DetectionClass>(value, "segment");
        require(is_segment(seg), "keyword segment must be a coronary segment",
                ErrorKind::kConfig);
        k.value = int(ordinal(seg));
        break;
      }
      case KeywordKind::Position:
        k.value = int(ordinal(parse_enum_or_throw<SegmentPosition>(value, "position")));
        break;
      case KeywordKind::Exclude:
      case KeywordKind::Occlusion:
        break;
    }
    auto& bucket = by_first_[k.tokens.front()];
    // Replace an existing identical surface form so user tables can override.
    std::erase_if(bucket, [&](const Keyword& e) { return e.tokens == k.tokens; });
    bucket.push_back(std::move(k));
    std::stable_sort(bucket.begin(), bucket.end(),
                     [](const Keyword& a, const Keyword& b) {
                       return a.tokens.size() > b.tokens.size();
                     });
  }

  /// Longest keyword starting at tokens[pos], if any.
  const Keyword* match(const std::vector<Token>& tokens, std::size_t pos) const {
    auto it = by_first_.find(tokens[pos].text);
    if (it == by_first_.end()) return nullptr;
    for (const auto& k : it->second) {
      if (pos + k.tokens.size() > tokens.size()) continue;
      bool ok = true;
      for (std::size_t i = 1; i < k.tokens.size() && ok; ++i)
        ok = tokens[pos + i].text == k.tokens[i];
      if (ok) return &k;
    }
    return nullptr;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [first, bucket] : by_first_) n += bucket.size();
    return n;
  }

 private:
  std::map<std::string, std::vector<Keyword>> by_first_;
};

/// Vessel + position to segment class. Ostial merges into proximal, every
/// left-main position into LeftMain, mid circumflex into distal LCx.
/// Returns nullopt when the vessel needs a position and none was given.
inline std::optional<DetectionClass> resolve_segment(
    Vessel v, std::optional<SegmentPosition> pos) {
  using D = DetectionClass;
  using P = SegmentPosition;
  switch (v) {
    case Vessel::LeftMain: return D::LeftMain;
    case Vessel::PDA: return D::PDA;
    case Vessel::Posterolateral: return D::Posterolateral;
    default: break;
  }
  if (!pos) return std::nullopt;
  const bool prox = *pos == P::Ostial || *pos == P::Proximal;
  switch (v) {
    case Vessel::LAD:
      return prox ? D::ProxLAD : (*pos == P::Mid ? D::MidLAD : D::DistLAD);
    case Vessel::LCx:
      return prox ? D::ProxLCx : D::DistLCx;
    case Vessel::RCA:
      return prox ? D::ProxRCA : (*pos == P::Mid ? D::MidRCA : D::DistRCA);
    default: break;
  }
  return std::nullopt;
}

}  // namespace angio
