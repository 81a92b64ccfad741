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

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "angio/core/csv.hpp"
#include "angio/core/error.hpp"

namespace angio {

/// A CSV file addressed by header names.
class Table {
 public:
  static Table read(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    require(in.good(), "cannot read " + p.string(), ErrorKind::kInvalidInput);
    return parse(in, p.string());
  }

  static Table parse(std::istream& in, const std::string& name = "table") {
    Table t;
    t.name_ = name;
    auto rows = csv::read_all(in);
    require(!rows.empty(), name + ": missing header row", ErrorKind::kInvalidInput);
    t.header_ = std::move(rows.front());
    t.rows_.assign(std::make_move_iterator(rows.begin() + 1),
                   std::make_move_iterator(rows.end()));
    for (std::size_t i = 0; i < t.rows_.size(); ++i)
      require(t.rows_[i].size() == t.header_.size(),
              name + ": row " + std::to_string(i + 2) + " has " +
                  std::to_string(t.rows_[i].size()) + " fields, header has " +
                  std::to_string(t.header_.size()),
              ErrorKind::kInvalidInput);
    return t;
  }

  std::optional<std::size_t> find(const std::string& column) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
      if (header_[i] == column) return i;
    return std::nullopt;
  }

  std::size_t column(const std::string& name) const {
    auto i = find(name);
    require(i.has_value(), name_ + ": missing column '" + name + "'", ErrorKind::kInvalidInput);
    return *i;
  }

  double number(std::size_t row, std::size_t col) const {
    auto v = csv::parse_double(rows_[row][col]);
    require(v.has_value(),
            name_ + ": row " + std::to_string(row + 2) + ", column '" + header_[col] +
                "' is not a number",
            ErrorKind::kInvalidInput);
    return *v;
  }

  const std::string& at(std::size_t row, std::size_t col) const { return rows_[row][col]; }
  std::size_t size() const noexcept { return rows_.size(); }
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  csv::Row header_;
  std::vector<csv::Row> rows_;
};

}  // namespace angio
