// Copyright 2026 The qsync Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qsync/sweep/config.hpp"

namespace qsync::sweep {

inline constexpr const char* kVersion = "1.0.0";

/// Long-format numeric table plus a per-row status flag. Cells are always
/// finite; degenerate rows carry zeros and say so in `status`.
struct ResultTable {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> status;
  Echo config;                 // resolved configuration
  Echo notes;                  // derived metadata (quadrature checks, families...)
  double wall_seconds = 0.0;   // reported on stderr, never serialized

  void add_row(std::vector<double> row, std::string flag = "ok") {
    if (row.size() != columns.size()) throw Error("row width does not match the column count");
    for (double& v : row) {
      if (!std::isfinite(v)) throw Error("non-finite cell in column '" + columns[&v - row.data()] + "'");
    }
    rows.push_back(std::move(row));
    status.push_back(std::move(flag));
  }

  std::size_t column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw Error("no column named '" + std::string(name) + "'");
  }

  std::vector<double> column(std::string_view name) const {
    const std::size_t c = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
  }
};

enum class Format { csv, json };

inline std::string to_csv(const ResultTable& t) {
  std::string out;
  out += "# qsync " + std::string(kVersion) + "\n";
  out += "# command = " + t.command + "\n";
  for (const auto& [k, v] : t.config) out += "#@ " + k + " = " + v + "\n";
  for (const auto& [k, v] : t.notes) out += "# " + k + " = " + v + "\n";
  for (const auto& c : t.columns) out += c + ",";
  out += "status\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (double v : t.rows[r]) out += format_number(v) + ",";
    out += t.status[r] + "\n";
  }
  return out;
}

inline std::string to_json(const ResultTable& t) {
  nlohmann::ordered_json doc;
  auto& meta = doc["meta"];
  meta["version"] = kVersion;
  meta["command"] = t.command;
  meta["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.config) meta["config"][k] = v;
  for (const auto& [k, v] : t.notes) meta[k] = v;
  auto& cols = doc["columns"];
  cols = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) arr.push_back(row[c] == 0.0 ? 0.0 : row[c]);
    cols[t.columns[c]] = std::move(arr);
  }
  doc["status"] = t.status;
  return doc.dump(2) + "\n";
}

inline std::string render(const ResultTable& t, Format f) { return f == Format::csv ? to_csv(t) : to_json(t); }

}  // namespace qsync::sweep
