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

#ifndef SIGRULES_CSV_HPP
#define SIGRULES_CSV_HPP

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "sigrules/dataset.hpp"

namespace sigrules {

struct CsvOptions {
  std::string class_column = "class";
  char delimiter = ',';
};

/// Load error carrying the 1-based row/column position in the message.
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a delimited file with a header row into a Dataset. Cells are opaque
/// categorical tokens; no quoting, no missing values. A blank cell, a ragged
/// row, a missing class column, or an all-numeric column with fractional
/// values (continuous data must be discretized beforehand) is a CsvError.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset load_csv(std::istream& in, const CsvOptions& options = {},
                 const std::string& source_name = "<stream>");

/// Writes the dataset back out, attributes in schema order and the class
/// column last. Reloading the result yields an identical dataset.
void save_csv(const Dataset& dataset, std::ostream& out,
              const std::string& class_column = "class", char delimiter = ',');
void save_csv(const Dataset& dataset, const std::filesystem::path& path,
              const std::string& class_column = "class", char delimiter = ',');

}  // namespace sigrules

#endif  // SIGRULES_CSV_HPP
