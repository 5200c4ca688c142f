//
// Copyright 2026 The Sparse LDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef SPARSE_LDP_IO_FORMAT_H_
#define SPARSE_LDP_IO_FORMAT_H_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"
#include "json.hpp"

namespace sparse_ldp::io {

enum class OutputFormat { kCsv, kJson, kTable };

inline absl::StatusOr<OutputFormat> ParseOutputFormat(absl::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  if (name == "table") return OutputFormat::kTable;
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown format '%s' (expected csv, json or table)", name));
}

// Shortest decimal string that parses back to the same double.
inline std::string ShortestDecimal(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

// Four decimals, ties rounded away from zero.
inline std::string FixedFour(double value) {
  double rounded = std::round(value * 1e4) / 1e4;
  if (rounded == 0) rounded = 0;  // drop the sign of -0
  return absl::StrFormat("%.4f", rounded);
}

// A cell is null (absent optional), a flag, an integer or a real.
using Cell = std::variant<std::monostate, bool, int64_t, double>;
using Record = std::vector<std::pair<std::string, Cell>>;

namespace internal {

inline std::string CellText(const Cell& cell, OutputFormat format) {
  struct Visitor {
    OutputFormat format;
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const {
      return format == OutputFormat::kTable ? FixedFour(d)
                                            : ShortestDecimal(d);
    }
  };
  return std::visit(Visitor{format}, cell);
}

inline nlohmann::json CellJson(const Cell& cell) {
  struct Visitor {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(bool b) const { return b; }
    nlohmann::json operator()(int64_t i) const { return i; }
    nlohmann::json operator()(double d) const { return d; }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace internal

// Writes records with a shared column layout (taken from the first record).
// JSON output is a single object when `as_object` is set, else an array.
inline void WriteRecords(std::ostream& out, const std::vector<Record>& records,
                         OutputFormat format, bool as_object = false) {
  if (format == OutputFormat::kJson) {
    nlohmann::json doc = nlohmann::json::array();
    for (const Record& record : records) {
      nlohmann::json object = nlohmann::json::object();
      for (const auto& [key, cell] : record) {
        object[key] = internal::CellJson(cell);
      }
      doc.push_back(std::move(object));
    }
    if (as_object && doc.size() == 1) doc = doc[0];
    out << doc.dump(2) << "\n";
    return;
  }
  if (records.empty()) return;

  std::vector<std::string> header;
  for (const auto& [key, cell] : records.front()) header.push_back(key);
  std::vector<std::vector<std::string>> rows;
  for (const Record& record : records) {
    std::vector<std::string> row;
    for (const auto& [key, cell] : record) {
      row.push_back(internal::CellText(cell, format));
    }
    rows.push_back(std::move(row));
  }

  if (format == OutputFormat::kCsv) {
    for (size_t i = 0; i < header.size(); ++i) {
      out << (i ? "," : "") << header[i];
    }
    out << "\n";
    for (const auto& row : rows) {
      for (size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "") << row[i];
      }
      out << "\n";
    }
    return;
  }

  std::vector<size_t> widths(header.size());
  for (size_t i = 0; i < header.size(); ++i) {
    widths[i] = header[i].size();
    for (const auto& row : rows) widths[i] = std::max(widths[i], row[i].size());
  }
  auto emit = [&](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      out << (i ? "  " : "") << std::string(widths[i] - row[i].size(), ' ')
          << row[i];
    }
    out << "\n";
  };
  emit(header);
  for (const auto& row : rows) emit(row);
}

}  // namespace sparse_ldp::io

#endif  // SPARSE_LDP_IO_FORMAT_H_
