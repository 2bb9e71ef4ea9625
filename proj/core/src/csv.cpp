// Copyright 2026 The foresttune Authors.
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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "foresttune/data.hpp"
#include "foresttune/error.hpp"
#include "text_util.hpp"

namespace foresttune {

namespace internal {

// Splits one CSV record. Double-quoted fields may contain commas and doubled
// quotes; everything else is taken verbatim.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::optional<double> parse_number(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string format_number(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

std::string quote_if_needed(const std::string& text) {
  if (text.find_first_of(",\"") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace internal

namespace {

using internal::format_number;
using internal::parse_number;
using internal::quote_if_needed;
using internal::split_record;

[[noreturn]] void fail(const std::string& message) {
  throw Error("data", message);
}

struct ParsedColumn {
  std::vector<double> values;
  ColumnType type;
};

ParsedColumn encode_column(const std::vector<std::string>& cells,
                           std::optional<TypeHint> hint) {
  ParsedColumn out;
  bool numeric = hint != TypeHint::kCategorical;
  if (numeric) {
    out.values.reserve(cells.size());
    for (const auto& cell : cells) {
      auto v = parse_number(cell);
      if (!v) {
        numeric = false;
        break;
      }
      out.values.push_back(*v);
    }
  }
  if (numeric) {
    out.type = ColumnType::numeric();
    return out;
  }
  if (hint == TypeHint::kNumeric) {
    for (const auto& cell : cells) {
      if (!parse_number(cell)) {
        fail("value '" + cell + "' is not numeric but the column is declared numeric");
      }
    }
  }
  out.values.clear();
  std::vector<std::string> levels;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& cell : cells) {
    auto [it, inserted] = index.emplace(cell, levels.size());
    if (inserted) levels.push_back(cell);
    out.values.push_back(static_cast<double>(it->second));
  }
  out.type = ColumnType::categorical(std::move(levels));
  return out;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::string& target,
                 const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) fail("cannot open file '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) fail("empty dataset: file has no header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_record(line);

  std::size_t target_index = header.size();
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == target) target_index = j;
  }
  if (target_index == header.size()) {
    fail("target column '" + target + "' not found");
  }
  for (const auto& [name, hint] : options.overrides) {
    if (std::find(header.begin(), header.end(), name) == header.end()) {
      fail("type override names unknown column '" + name + "'");
    }
  }

  std::vector<std::vector<std::string>> cells(header.size());
  std::size_t row = 0;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_record(line);
    if (fields.size() != header.size()) {
      fail("ragged row at line " + std::to_string(line_number) + ": expected " +
           std::to_string(header.size()) + " fields, got " +
           std::to_string(fields.size()));
    }
    ++row;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (fields[j].empty() || fields[j] == "NA") {
        fail("missing value at row " + std::to_string(row) + ", column " +
             header[j]);
      }
      cells[j].push_back(std::move(fields[j]));
    }
  }
  if (row == 0) fail("empty dataset: no data rows");

  Dataset data;
  data.name = path.stem().string();
  data.target_name = target;
  for (std::size_t j = 0; j < header.size(); ++j) {
    std::optional<TypeHint> hint;
    if (j == target_index) {
      hint = options.target_hint;
      if (!hint) {
        if (auto it = options.overrides.find(header[j]); it != options.overrides.end()) {
          hint = it->second;
        }
      }
    } else if (auto it = options.overrides.find(header[j]);
               it != options.overrides.end()) {
      hint = it->second;
    }
    ParsedColumn parsed = encode_column(cells[j], hint);
    if (j == target_index) {
      data.target = std::move(parsed.values);
      if (parsed.type.is_categorical()) {
        data.task = Task::kClassification;
        data.class_labels = std::move(parsed.type.levels);
      } else {
        data.task = Task::kRegression;
      }
    } else {
      data.columns.push_back(
          {header[j], std::move(parsed.type), std::move(parsed.values)});
    }
  }
  data.validate();
  return data;
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
  dataset.validate();
  std::ofstream out(path);
  if (!out) fail("cannot write file '" + path.string() + "'");

  auto cell = [](const ColumnType& type, double value) {
    if (type.is_categorical()) {
      return quote_if_needed(type.levels[static_cast<std::size_t>(value)]);
    }
    return format_number(value);
  };

  for (const auto& column : dataset.columns) out << quote_if_needed(column.name) << ',';
  out << quote_if_needed(dataset.target_name) << '\n';
  const ColumnType target_type =
      dataset.task == Task::kClassification
          ? ColumnType::categorical(dataset.class_labels)
          : ColumnType::numeric();
  for (std::size_t i = 0; i < dataset.n(); ++i) {
    for (const auto& column : dataset.columns) {
      out << cell(column.type, column.values[i]) << ',';
    }
    out << cell(target_type, dataset.target[i]) << '\n';
  }
  if (!out) fail("failed writing '" + path.string() + "'");
}

}  // namespace foresttune
