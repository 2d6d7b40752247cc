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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace spinshield {

// Observables sampled on a strictly increasing time grid. Columns keep the
// order in which they were added; that order is the CSV column order.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<std::string> names);

  void append(double t, const std::vector<double>& row);
  void add_column(std::string name, std::vector<double> values);

  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  bool has(std::string_view name) const;
  const std::vector<double>& column(std::string_view name) const;

  // Header `t,<name1>,<name2>,...`, 17 significant digits.
  void write_csv(std::ostream& os) const;
  static TimeSeries read_csv(std::istream& is);

 private:
  std::vector<double> times_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

}  // namespace spinshield
