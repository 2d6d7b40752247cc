// Copyright 2026 The spinshield Authors
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

// Minimal CSV table used for result files. Cells are kept as text, so a
// read followed by a write reproduces a file byte for byte.

#include <iosfwd>
#include <string>
#include <vector>

namespace spinshield {

// Shortest round-trip representation, at most 17 significant digits.
std::string format_double(double v);
double parse_double(const std::string& s);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const;
  static CsvTable read(std::istream& is);
  std::size_t column_index(const std::string& name) const;
};

}  // namespace spinshield
