// Copyright 2026 The sdiscreen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sdiscreen/dataset.hpp"

namespace sdiscreen {

/// Malformed or unreadable input. The message is a one-line diagnostic.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
inline std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool is_missing_token(std::string_view s) {
  return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "nan" || s == "null" ||
         s == "NULL";
}

/// Parses a numeric cell; std::nullopt for a missing-value token.
inline std::optional<double> parse_cell(std::string_view raw, std::size_t line,
                                        const std::string& column) {
  const std::string_view s = trim(raw);
  if (is_missing_token(s)) return std::nullopt;
  std::string_view digits = s;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (res.ec != std::errc() || res.ptr != digits.data() + digits.size() || !std::isfinite(v)) {
    throw InputError("non-numeric value '" + std::string(s) + "' at line " +
                     std::to_string(line) + ", column '" + column + "'");
  }
  return v;
}

/// Numeric CSV with a header row. Missing cells are std::nullopt.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> columns;
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

inline CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw InputError("input has no header row");
  if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  for (auto& name : split_csv_record(line)) table.header.emplace_back(trim(name));
  table.columns.resize(table.header.size());

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_record(line);
    if (fields.size() != table.header.size()) {
      throw InputError("line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(table.header.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      table.columns[c].push_back(parse_cell(fields[c], line_no, table.header[c]));
    }
  }
  return table;
}

inline CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path.string() + "'");
  return parse_csv(in);
}

/// Resolves a target given as a header name, or failing that as a 0-based
/// column index.
inline std::size_t resolve_target(const CsvTable& table, const std::string& target) {
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == target) return c;
  }
  std::size_t idx = 0;
  const auto res = std::from_chars(target.data(), target.data() + target.size(), idx);
  if (res.ec == std::errc() && res.ptr == target.data() + target.size() &&
      idx < table.header.size()) {
    return idx;
  }
  throw InputError("target column '" + target + "' not found");
}

struct IngestResult {
  Dataset data;
  std::size_t dropped_rows = 0;
};

/// Builds a Dataset from a table: the target column is the response, every
/// other column a predictor. Rows with any missing cell are dropped.
inline IngestResult table_to_dataset(const CsvTable& table, const std::string& target,
                                     ResponseMode mode) {
  const std::size_t t = resolve_target(table, target);
  if (table.header.size() < 2) throw InputError("input needs at least one predictor column");
  IngestResult out;
  Dataset& d = out.data;
  d.mode = mode;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c != t) d.names.push_back(table.header[c]);
  }
  d.predictors.resize(d.names.size());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    bool complete = true;
    for (const auto& col : table.columns) complete = complete && col[r].has_value();
    if (!complete) {
      ++out.dropped_rows;
      continue;
    }
    std::size_t j = 0;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c == t) {
        d.response.push_back(*table.columns[c][r]);
      } else {
        d.predictors[j++].push_back(*table.columns[c][r]);
      }
    }
  }
  if (d.n() < 2) {
    throw InputError("need at least 2 complete rows, found " + std::to_string(d.n()));
  }
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return out;
}

/// Dataset as CSV: predictor columns in order, then the response as `y`.
inline std::string dataset_to_csv(const Dataset& d, const std::string& response_name = "y") {
  std::ostringstream out;
  for (std::size_t j = 0; j < d.p(); ++j) out << d.names[j] << ',';
  out << response_name << '\n';
  for (std::size_t i = 0; i < d.n(); ++i) {
    for (std::size_t j = 0; j < d.p(); ++j) out << format_double(d.predictors[j][i]) << ',';
    out << format_double(d.response[i]) << '\n';
  }
  return out.str();
}

/// Writes `content` to a sibling temp file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw InputError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot rename output to '" + path.string() + "': " + ec.message());
  }
}

}  // namespace sdiscreen
