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

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "spinshield/csv.hpp"
#include "spinshield/experiments.hpp"

namespace spinshield {

// I and III hold protection times, II and IV window means; I and II use the
// thermal channel, III and IV pure dephasing.
enum class TableId { I, II, III, IV };

std::string to_string(TableId id);
TableId parse_table_id(std::string_view s);
bool is_protection_table(TableId id);
NoiseChannel table_channel(TableId id);

inline constexpr std::array<int, 5> kTableClusterSizes{3, 4, 5, 6, 7};

// Published values. Column c holds table_metrics()[c / 2], empty geometry
// for even c and maximal for odd c; rows follow kTableClusterSizes.
struct ReferenceTable {
  TableId id;
  std::array<std::array<double, 8>, 5> values;

  double value(int n_total, std::size_t metric_index, Extreme which) const;
};

const ReferenceTable& reference_table(TableId id);

struct TableOptions {
  TableId id = TableId::I;
  ClusterSpec base;  // channel is taken from the table id
  IntegratorConfig integrator;
  // Unset means: calibrate against the reference before running.
  std::optional<PairConvention> pair_convention;
  double threshold = kDefaultThreshold;
  double t1 = kDefaultWindowStart;
  double t2 = kDefaultWindowEnd;
  int jobs = 1;
};

struct TableReport {
  TableId id = TableId::I;
  ClusterSpec base;
  IntegratorConfig integrator;
  std::optional<CalibrationResult> calibration;
  PairConvention convention = PairConvention::unordered_once;
  double threshold = kDefaultThreshold;
  CompareTable table;
};

// Runs both extreme geometries for N+1 = 3..7, recording protection times
// and window means for the four table metrics. Throws SimulationFault if a
// requested calibration finds no acceptable convention.
TableReport reproduce_table(const TableOptions& options);

// n_total plus eight value columns in the reference layout. Protection
// times are rounded to the sampling grid; undetected entries read NA.
CsvTable wide_table(const TableReport& report);

// n_total,geometry,metric,threshold,protection_time,confirmed_until
CsvTable protection_table(const CompareTable& table, double threshold);

// n_total,geometry,metric,t1,t2,mean
CsvTable window_table(const CompareTable& table);

}  // namespace spinshield
