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

#include "spinshield/time_series.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "spinshield/csv.hpp"
#include "spinshield/error.hpp"

namespace spinshield {

TimeSeries::TimeSeries(std::vector<std::string> names)
    : names_(std::move(names)), columns_(names_.size()) {}

void TimeSeries::append(double t, const std::vector<double>& row) {
  if (row.size() != names_.size()) throw std::invalid_argument("TimeSeries: row width mismatch");
  if (!times_.empty() && !(t > times_.back())) {
    throw std::invalid_argument("TimeSeries: times must be strictly increasing");
  }
  times_.push_back(t);
  for (std::size_t k = 0; k < row.size(); ++k) columns_[k].push_back(row[k]);
}

void TimeSeries::add_column(std::string name, std::vector<double> values) {
  if (values.size() != times_.size()) throw std::invalid_argument("TimeSeries: column length mismatch");
  if (has(name)) throw std::invalid_argument("TimeSeries: duplicate column " + name);
  names_.push_back(std::move(name));
  columns_.push_back(std::move(values));
}

bool TimeSeries::has(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& TimeSeries::column(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::out_of_range("TimeSeries: no column '" + std::string(name) + "'");
  return columns_[static_cast<std::size_t>(it - names_.begin())];
}

namespace {

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void TimeSeries::write_csv(std::ostream& os) const {
  os << 't';
  for (const auto& n : names_) os << ',' << n;
  os << '\n';
  for (std::size_t r = 0; r < times_.size(); ++r) {
    os << full_precision(times_[r]);
    for (const auto& col : columns_) os << ',' << full_precision(col[r]);
    os << '\n';
  }
}

TimeSeries TimeSeries::read_csv(std::istream& is) {
  const CsvTable table = CsvTable::read(is);
  if (table.header.empty() || table.header.front() != "t") {
    throw ParseError("time series csv must start with column 't'");
  }
  TimeSeries ts(std::vector<std::string>(table.header.begin() + 1, table.header.end()));
  std::vector<double> row(ts.names_.size());
  for (const auto& r : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = parse_double(r[k + 1]);
    ts.append(parse_double(r[0]), row);
  }
  return ts;
}

}  // namespace spinshield
