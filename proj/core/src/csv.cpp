// Copyright 2026 The sigrules authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sigrules/csv.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace sigrules {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == delimiter) {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

// Whole-token numeric parse: "1.5" and "2e3" yes, "v1" and "1.5x" no.
bool parses_as_number(const std::string& s, bool& fractional) {
  if (s.empty()) return false;
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  fractional = value != static_cast<long long>(value) ||
               s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
               s.find('E') != std::string::npos;
  return true;
}

[[noreturn]] void fail(const std::string& source, std::size_t row, std::size_t col,
                       const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << row;
  if (col > 0) msg << ":col " << col;
  msg << ": " << what;
  throw CsvError(msg.str());
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path.string());
  return load_csv(in, options, path.string());
}

Dataset load_csv(std::istream& in, const CsvOptions& options,
                 const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) fail(source_name, 1, 0, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header = split_line(line, options.delimiter);
  std::size_t class_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == options.class_column) {
      class_col = i;
      break;
    }
  }
  if (class_col == header.size()) {
    fail(source_name, 1, 0, "class column '" + options.class_column + "' not found");
  }

  const std::size_t n_cols = header.size();
  const std::size_t n_attrs = n_cols - 1;

  Dataset d;
  d.schema.resize(n_attrs);
  {
    std::size_t a = 0;
    for (std::size_t i = 0; i < n_cols; ++i) {
      if (i != class_col) d.schema[a++].name = header[i];
    }
  }

  // First-appearance value indexing per column, plus numeric tracking for the
  // continuous-column check on attribute columns.
  std::vector<std::unordered_map<std::string, std::uint32_t>> value_index(n_attrs);
  std::unordered_map<std::string, ClassId> class_index;
  std::vector<bool> all_numeric(n_attrs, true);
  std::vector<bool> any_fractional(n_attrs, false);
  std::vector<std::vector<std::uint32_t>> raw_cells;  // value indices per record
  std::vector<ClassId> labels;

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::istream::traits_type::eof()) break;  // trailing newline
    std::vector<std::string> fields = split_line(line, options.delimiter);
    if (fields.size() != n_cols) {
      fail(source_name, row, 0,
           "ragged row: expected " + std::to_string(n_cols) + " fields, got " +
               std::to_string(fields.size()));
    }
    std::vector<std::uint32_t> rec(n_attrs);
    std::size_t a = 0;
    for (std::size_t i = 0; i < n_cols; ++i) {
      if (fields[i].empty()) fail(source_name, row, i + 1, "blank cell");
      if (i == class_col) {
        auto [it, inserted] = class_index.try_emplace(
            fields[i], static_cast<ClassId>(class_index.size()));
        if (inserted) d.class_names.push_back(fields[i]);
        labels.push_back(it->second);
      } else {
        bool fractional = false;
        if (parses_as_number(fields[i], fractional)) {
          if (fractional) any_fractional[a] = true;
        } else {
          all_numeric[a] = false;
        }
        auto [it, inserted] = value_index[a].try_emplace(
            fields[i], static_cast<std::uint32_t>(value_index[a].size()));
        if (inserted) d.schema[a].values.push_back(fields[i]);
        rec[a] = it->second;
        ++a;
      }
    }
    raw_cells.push_back(std::move(rec));
  }
  if (raw_cells.empty()) fail(source_name, row, 0, "no data rows");

  for (std::size_t a = 0; a < n_attrs; ++a) {
    if (all_numeric[a] && any_fractional[a]) {
      fail(source_name, 1, 0,
           "column '" + d.schema[a].name +
               "' looks continuous (all-numeric with fractional values); "
               "discretize it before loading");
    }
  }

  d.labels = std::move(labels);
  d.cells.reserve(raw_cells.size() * n_attrs);
  // item ids are attribute-major: id = attr_offsets[a] + value index
  std::vector<ItemId> offsets(1, 0);
  for (std::size_t a = 0; a < n_attrs; ++a) {
    offsets.push_back(offsets.back() + static_cast<ItemId>(d.schema[a].values.size()));
  }
  for (const auto& rec : raw_cells) {
    for (std::size_t a = 0; a < n_attrs; ++a) d.cells.push_back(offsets[a] + rec[a]);
  }
  d.finalize();
  return d;
}

void save_csv(const Dataset& dataset, std::ostream& out,
              const std::string& class_column, char delimiter) {
  for (const auto& attr : dataset.schema) out << attr.name << delimiter;
  out << class_column << '\n';
  const std::size_t n = dataset.record_count();
  for (Tid r = 0; r < n; ++r) {
    for (std::size_t a = 0; a < dataset.attribute_count(); ++a) {
      const ItemInfo& info = dataset.items[dataset.cell(r, a)];
      out << dataset.schema[a].values[info.value] << delimiter;
    }
    out << dataset.class_names[dataset.labels[r]] << '\n';
  }
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path,
              const std::string& class_column, char delimiter) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot open " + path.string() + " for writing");
  save_csv(dataset, out, class_column, delimiter);
  if (!out) throw CsvError("write failed: " + path.string());
}

}  // namespace sigrules
