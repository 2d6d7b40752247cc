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

#include "spinshield/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "spinshield/error.hpp"

namespace spinshield {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan" || s == "NA") return std::nan("");
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("not a number: '" + s + "'");
  }
  return v;
}

namespace {

void write_cell(std::ostream& os, const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) {
    os << cell;
    return;
  }
  os << '"';
  for (char c : cell) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

void write_row(std::ostream& os, const std::vector<std::string>& row) {
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (k) os << ',';
    write_cell(os, row[k]);
  }
  os << '\n';
}

// Reads one record; returns false at end of input.
bool read_row(std::istream& is, std::vector<std::string>& row) {
  row.clear();
  if (is.peek() == std::char_traits<char>::eof()) return false;
  std::string cell;
  bool quoted = false;
  char c = 0;
  while (is.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          is.get(c);
          cell.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      row.push_back(std::move(cell));
      return true;
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  if (quoted) throw ParseError("csv: unterminated quoted field");
  row.push_back(std::move(cell));
  return true;
}

}  // namespace

void CsvTable::write(std::ostream& os) const {
  write_row(os, header);
  for (const auto& r : rows) write_row(os, r);
}

CsvTable CsvTable::read(std::istream& is) {
  CsvTable t;
  if (!read_row(is, t.header)) throw ParseError("csv: empty input");
  std::vector<std::string> row;
  while (read_row(is, row)) {
    if (row.size() != t.header.size()) {
      throw ParseError("csv: row has " + std::to_string(row.size()) + " cells, header has " +
                       std::to_string(t.header.size()));
    }
    t.rows.push_back(row);
  }
  return t;
}

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw std::out_of_range("csv: no column '" + name + "'");
}

}  // namespace spinshield
