// Copyright 2026 The sqzlev Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sqzlev {

/// Column-named numeric table; rows keep the order of the generating grid.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

/// Renders with 12 significant digits, independent
/// of the global locale ("nan"/"inf" for non-finite values).
std::string format_number(double value);

/// Strict locale-independent parse of a full string; throws InvalidArgument.
double parse_number(const std::string& text);

/// CSV with a header row, comma separators and LF line endings.
void write_csv(std::ostream& out, const Table& table);

}  // namespace sqzlev
