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
#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "angio/core/enum.hpp"
#include "angio/detect/types.hpp"
#include "angio/report/keywords.hpp"
#include "angio/report/record.hpp"

namespace angio {

struct Clause {
  std::string text;
  std::size_t offset = 0;  // into the report

  bool operator==(const Clause&) const = default;
};

/// Splits on commas and periods. A period between two digits is a decimal
/// point, not a boundary. Clauses are whitespace-trimmed; empty ones dropped.
inline std::vector<Clause> split_clauses(std::string_view text) {
  std::vector<Clause> out;
  auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  auto flush = [&](std::size_t begin, std::size_t end) {
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (end > begin) out.push_back({std::string(text.substr(begin, end - begin)), begin});
  };
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool decimal = c == '.' && i > 0 && i + 1 < text.size() &&
                         is_digit(text[i - 1]) && is_digit(text[i + 1]);
    if ((c == ',' || c == '.') && !decimal) {
      flush(start, i);
      start = i + 1;
    }
  }
  flush(start, text.size());
  return out;
}

/// A "%" sign and the number chosen for it.
struct PercentMention {
  int value = 0;            // integer part (decimals truncated)
  std::size_t begin = 0;    // span of the number
  std::size_t end = 0;
  std::size_t sign = 0;     // position of '%'
  bool in_range = true;     // value <= 100
};

namespace detail {

struct NumberSpan {
  std::size_t begin;
  std::size_t end;
  int value;
};

// 1-3 digit integers, optionally with a decimal tail, not glued to a
// preceding letter (so "D1" and "OM2" are not numbers).
inline std::vector<NumberSpan> find_numbers(std::string_view s) {
  std::vector<NumberSpan> out;
  std::size_t i = 0;
  auto digit = [&](std::size_t k) {
    return k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]));
  };
  while (i < s.size()) {
    if (!digit(i)) {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    while (digit(i)) ++i;
    const std::size_t int_end = i;
    if (i + 1 < s.size() && s[i] == '.' && digit(i + 1)) {
      ++i;
      while (digit(i)) ++i;
    }
    const bool glued = begin > 0 && std::isalpha(static_cast<unsigned char>(s[begin - 1]));
    const std::size_t len = int_end - begin;
    if (!glued && len >= 1 && len <= 3)
      out.push_back({begin, i, std::atoi(std::string(s.substr(begin, len)).c_str())});
  }
  return out;
}

}  // namespace detail

/// For every '%' the nearest 1-3 digit number by character distance; a
/// number before the sign wins a distance tie.
inline std::vector<PercentMention> find_percents(std::string_view clause) {
  const auto numbers = detail::find_numbers(clause);
  std::vector<PercentMention> out;
  for (std::size_t p = 0; p < clause.size(); ++p) {
    if (clause[p] != '%') continue;
    const detail::NumberSpan* best = nullptr;
    std::size_t best_dist = 0;
    for (const auto& n : numbers) {
      std::size_t dist;
      if (n.end <= p)
        dist = p - n.end;
      else if (n.begin > p)
        dist = n.begin - p - 1;
      else
        continue;
      // Numbers are visited left to right, so on equal distance the
      // preceding one is already held.
      if (!best || dist < best_dist) {
        best = &n;
        best_dist = dist;
      }
    }
    if (best) out.push_back({best->value, best->begin, best->end, p, best->value <= 100});
  }
  return out;
}

inline std::optional<int> extract_percent(std::string_view clause) {
  for (const auto& m : find_percents(clause))
    if (m.in_range) return m.value;
  return std::nullopt;
}

struct Diagnostic {
  std::size_t clause_offset = 0;
  std::string clause;
  std::string message;
};

struct ParseResult {
  std::vector<StenosisRecord> records;  // one per segment, enumeration order
  std::vector<Diagnostic> diagnostics;
};

namespace detail {

// A vessel/segment/branch reference inside a clause.
struct Mention {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::optional<DetectionClass> segment;  // nullopt: excluded or unresolved
  bool excluded = false;
  std::string surface;
};

struct ClauseScan {
  std::vector<Mention> mentions;
  std::vector<std::size_t> occlusions;  // char offsets of occlusion words
};

inline constexpr std::size_t kPositionLookback = 4;

inline ClauseScan scan_clause(std::string_view clause, const KeywordTable& table) {
  const auto tokens = tokenize(clause);
  struct Hit {
    const Keyword* kw;
    std::size_t first;
    std::size_t last;  // inclusive token index
  };
  std::vector<Hit> hits;
  for (std::size_t i = 0; i < tokens.size();) {
    if (const Keyword* k = table.match(tokens, i)) {
      hits.push_back({k, i, i + k->tokens.size() - 1});
      i += k->tokens.size();
    } else {
      ++i;
    }
  }

  ClauseScan scan;
  std::vector<bool> position_used(hits.size(), false);
  for (std::size_t h = 0; h < hits.size(); ++h) {
    const auto& hit = hits[h];
    const auto kind = hit.kw->kind;
    if (kind == KeywordKind::Occlusion) {
      scan.occlusions.push_back(tokens[hit.first].begin);
      continue;
    }
    if (kind == KeywordKind::Position) continue;

    Mention m;
    m.begin = tokens[hit.first].begin;
    m.end = tokens[hit.last].end;
    m.surface = std::string(clause.substr(m.begin, m.end - m.begin));
    if (kind == KeywordKind::Exclude) {
      m.excluded = true;
    } else if (kind == KeywordKind::Segment) {
      m.segment = from_ordinal<DetectionClass>(std::size_t(hit.kw->value));
    } else {
      // Nearest unused position word shortly before the vessel, with no other
      // reference in between; else one directly after it.
      std::optional<SegmentPosition> pos;
      for (std::size_t b = h; b-- > 0;) {
        if (hit.first - hits[b].last > kPositionLookback) break;
        if (hits[b].kw->kind == KeywordKind::Position) {
          if (!position_used[b]) {
            pos = from_ordinal<SegmentPosition>(std::size_t(hits[b].kw->value));
            position_used[b] = true;
            m.begin = tokens[hits[b].first].begin;
          }
          break;
        }
        if (hits[b].kw->kind != KeywordKind::Occlusion) break;
      }
      if (!pos && h + 1 < hits.size() &&
          hits[h + 1].kw->kind == KeywordKind::Position &&
          hits[h + 1].first == hit.last + 1) {
        pos = from_ordinal<SegmentPosition>(std::size_t(hits[h + 1].kw->value));
        position_used[h + 1] = true;
        m.end = tokens[hits[h + 1].last].end;
      }
      m.segment = resolve_segment(from_ordinal<Vessel>(std::size_t(hit.kw->value)), pos);
      m.surface = std::string(clause.substr(m.begin, m.end - m.begin));
    }
    // Excluded branches swallow a position word right before them
    // ("proximal diagonal").
    if (m.excluded && h > 0 && hits[h - 1].kw->kind == KeywordKind::Position &&
        hit.first - hits[h - 1].last <= kPositionLookback)
      position_used[h - 1] = true;
    scan.mentions.push_back(std::move(m));
  }
  return scan;
}

inline std::size_t span_distance(std::size_t a_begin, std::size_t a_end,
                                 std::size_t b_begin, std::size_t b_end) {
  if (a_end <= b_begin) return b_begin - a_end;
  if (b_end <= a_begin) return a_begin - b_end;
  return 0;
}

// Unresolved vessel names are skipped; excluded branches still claim values.
inline const Mention* nearest_mention(const std::vector<Mention>& mentions,
                                      std::size_t begin, std::size_t end) {
  const Mention* best = nullptr;
  std::size_t best_d = 0;
  for (const auto& m : mentions) {
    if (!m.segment && !m.excluded) continue;
    const std::size_t d = span_distance(begin, end, m.begin, m.end);
    if (!best || d < best_d) {
      best = &m;
      best_d = d;
    }
  }
  return best;
}

}  // namespace detail

/// Resolves a phrase such as "ostial RCA" or "D1" with the same rules the
/// report parser applies to each mention; branches give nullopt.
inline std::optional<DetectionClass> normalize_segment(
    std::string_view surface,
    const KeywordTable& table = KeywordTable::defaults()) {
  const auto scan = detail::scan_clause(surface, table);
  if (scan.mentions.size() != 1) return std::nullopt;
  return scan.mentions.front().segment;
}

/// Per-segment maximal stenosis from free text. Never throws on text;
/// skipped or ambiguous clauses are reported as diagnostics.
inline ParseResult parse_report_detailed(
    std::string_view text, const KeywordTable& table = KeywordTable::defaults()) {
  ParseResult result;
  std::map<DetectionClass, StenosisRecord> best;
  auto diag = [&](const Clause& c, std::string msg) {
    result.diagnostics.push_back({c.offset, c.text, std::move(msg)});
  };
  auto offer = [&](DetectionClass seg, int percent, const Clause& c) {
    auto it = best.find(seg);
    if (it == best.end() || percent > it->second.percent)
      best[seg] = {seg, percent, c.text, c.offset};
  };

  for (const auto& clause : split_clauses(text)) {
    const auto scan = detail::scan_clause(clause.text, table);
    const auto percents = find_percents(clause.text);
    if (scan.mentions.empty()) {
      if (!percents.empty()) diag(clause, "percent without a coronary segment");
      continue;
    }
    bool rejected = false;
    for (const auto& p : percents) {
      if (!p.in_range) {
        diag(clause, "percent value " + std::to_string(p.value) + " above 100; clause skipped");
        rejected = true;
      }
    }
    if (rejected) continue;

    std::size_t resolved = 0;
    for (const auto& m : scan.mentions) {
      if (m.segment) ++resolved;
      else if (!m.excluded)
        diag(clause, "vessel '" + m.surface + "' without a segment position");
    }
    if (resolved > 1 && percents.size() + scan.occlusions.size() == 1)
      diag(clause, "several segments share one value; assigned to nearest mention");

    bool assigned = false;
    for (const auto& p : percents) {
      const auto* m = detail::nearest_mention(scan.mentions, p.begin, p.end);
      if (m && m->segment) {
        offer(*m->segment, p.value, clause);
        assigned = true;
      }
    }
    for (std::size_t pos : scan.occlusions) {
      const auto* m = detail::nearest_mention(scan.mentions, pos, pos + 1);
      if (m && m->segment) {
        offer(*m->segment, 100, clause);
        assigned = true;
      }
    }
    if (!assigned && resolved > 0 && percents.empty() && scan.occlusions.empty())
      diag(clause, "segment without a stenosis percentage");
  }
  for (auto& [seg, rec] : best) result.records.push_back(rec);
  return result;
}

inline std::vector<StenosisRecord> parse_report(
    std::string_view text, const KeywordTable& table = KeywordTable::defaults()) {
  return parse_report_detailed(text, table).records;
}

/// Canonical phrase for a segment; parses back to the same segment.
inline std::string segment_phrase(DetectionClass seg) {
  switch (seg) {
    case DetectionClass::LeftMain: return "left main";
    case DetectionClass::ProxLAD: return "proximal LAD";
    case DetectionClass::MidLAD: return "mid LAD";
    case DetectionClass::DistLAD: return "distal LAD";
    case DetectionClass::ProxLCx: return "proximal circumflex";
    case DetectionClass::DistLCx: return "distal circumflex";
    case DetectionClass::ProxRCA: return "proximal RCA";
    case DetectionClass::MidRCA: return "mid RCA";
    case DetectionClass::DistRCA: return "distal RCA";
    case DetectionClass::PDA: return "PDA";
    case DetectionClass::Posterolateral: return "posterolateral branch";
    default: break;
  }
  return to_string(seg);
}

}  // namespace angio
