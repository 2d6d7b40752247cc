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


#include "spinshield/tables.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "spinshield/error.hpp"

namespace spinshield {

namespace {

// clang-format off
const ReferenceTable kTable1{TableId::I, {{
    {20640, 24210, 20630, 23710, 38970, 46680, 41770, 50150},
    {17270, 29870, 16870, 29730, 32310, 58320, 34590, 62020},
    {14990, 32930, 14250, 32360, 27250, 64660, 29600, 66870},
    {13460, 25440, 12410, 24800, 24410, 48070, 25820, 52010},
    {12930, 19410, 11030, 17780, 23260, 35320, 23260, 37450},
}}};

const ReferenceTable kTable2{TableId::II, {{
    {1.13e-6, 1.46e-5, 1.12e-6, 1.33e-5, 4.60e-4, 1.80e-3, 9.17e-4, 3.54e-3},
    {9.60e-8, 1.12e-4, 9.35e-8, 1.07e-4, 1.36e-4, 5.07e-3, 2.68e-4, 1.01e-2},
    {8.26e-9, 2.54e-4, 6.73e-9, 2.14e-4, 3.89e-5, 7.38e-3, 7.25e-5, 1.42e-2},
    {1.83e-9, 2.47e-5, 5.04e-10, 2.07e-5, 1.54e-5, 2.29e-3, 1.94e-5, 4.41e-3},
    {1.35e-9, 9.41e-7, 5.32e-11, 4.35e-7, 1.17e-5, 3.89e-4, 6.32e-6, 6.39e-4},
}}};

const ReferenceTable kTable3{TableId::III, {{
    {6890, 9990, 6890, 9990, 13600, 20440, 15120, 22210},
    {6930, 13600, 6930, 13600, 13780, 27160, 15090, 29520},
    {7130, 16960, 7130, 16960, 13830, 33770, 15010, 36700},
    {7060, 13540, 7060, 13540, 13760, 27380, 14840, 29810},
    {6800, 13020, 6800, 13020, 13540, 26530, 14800, 28900},
}}};

const ReferenceTable kTable4{TableId::IV, {{
    {4.00e-14, 2.34e-11, 7.87e-15, 2.34e-11, 5.25e-8, 2.66e-6, 8.92e-8, 5.33e-6},
    {3.03e-11, 1.15e-8, 2.95e-11, 1.15e-8, 5.81e-5, 2.05e-6, 2.98e-6, 1.16e-4},
    {1.48e-11, 2.68e-7, 1.46e-11, 2.68e-7, 2.05e-6, 2.75e-4, 4.09e-6, 5.51e-4},
    {5.59e-15, 1.09e-8, 1.64e-15, 1.09e-8, 3.03e-8, 5.48e-5, 4.02e-8, 1.10e-4},
    {7.09e-16, 6.53e-9, 1.85e-16, 6.53e-9, 5.53e-9, 4.21e-5, 1.11e-8, 8.42e-5},
}}};
// clang-format on

std::string format_or_na(bool ok, double v) { return ok ? format_double(v) : "NA"; }

}  // namespace

std::string to_string(TableId id) {
  switch (id) {
    case TableId::I: return "I";
    case TableId::II: return "II";
    case TableId::III: return "III";
    case TableId::IV: return "IV";
  }
  return "?";
}

TableId parse_table_id(std::string_view s) {
  if (s == "I" || s == "1") return TableId::I;
  if (s == "II" || s == "2") return TableId::II;
  if (s == "III" || s == "3") return TableId::III;
  if (s == "IV" || s == "4") return TableId::IV;
  throw ParseError("unknown table '" + std::string(s) + "' (expected I, II, III or IV)");
}

bool is_protection_table(TableId id) { return id == TableId::I || id == TableId::III; }

NoiseChannel table_channel(TableId id) {
  return id == TableId::I || id == TableId::II ? NoiseChannel::thermal : NoiseChannel::dephasing;
}

double ReferenceTable::value(int n_total, std::size_t metric_index, Extreme which) const {
  for (std::size_t r = 0; r < kTableClusterSizes.size(); ++r) {
    if (kTableClusterSizes[r] == n_total) {
      return values[r].at(2 * metric_index + (which == Extreme::maximal ? 1 : 0));
    }
  }
  throw std::out_of_range("no reference row for N+1 = " + std::to_string(n_total));
}

const ReferenceTable& reference_table(TableId id) {
  switch (id) {
    case TableId::I: return kTable1;
    case TableId::II: return kTable2;
    case TableId::III: return kTable3;
    case TableId::IV: return kTable4;
  }
  return kTable1;
}

TableReport reproduce_table(const TableOptions& options) {
  TableReport report;
  report.id = options.id;
  report.base = options.base;
  report.base.noise.channel = table_channel(options.id);
  report.integrator = options.integrator;
  report.threshold = options.threshold;
  if (options.pair_convention) {
    report.convention = *options.pair_convention;
  } else {
    ClusterSpec calibration_base = report.base;
    calibration_base.noise.channel = NoiseChannel::thermal;
    report.calibration = calibrate_pair_convention(calibration_base, report.integrator, options.jobs);
    if (!report.calibration->chosen) {
      throw SimulationFault("pair-convention calibration failed: neither convention is within 15%");
    }
    report.convention = *report.calibration->chosen;
  }
  report.base.pair_convention = report.convention;

  CompareRequest request;
  request.base = report.base;
  request.integrator = report.integrator;
  request.n_buffers.clear();
  for (int n : kTableClusterSizes) request.n_buffers.push_back(n - 1);
  request.plan.metrics = table_metrics();
  request.plan.threshold = options.threshold;
  request.plan.t1 = options.t1;
  request.plan.t2 = options.t2;
  request.jobs = options.jobs;
  report.table = compare_extremes(request);
  return report;
}

CsvTable wide_table(const TableReport& report) {
  CsvTable out;
  out.header.push_back("n_total");
  const auto& metrics = report.table.metrics;
  for (const auto& m : metrics) {
    out.header.push_back(m.id() + ".empty");
    out.header.push_back(m.id() + ".maximal");
  }
  const bool protection = is_protection_table(report.id);
  for (const auto& row : report.table.rows) {
    std::vector<std::string> cells{std::to_string(row.n_total())};
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      for (const Measurement* m : {&row.empty, &row.maximal}) {
        if (protection) {
          const ProtectionTimeResult& r = m->protection.at(k);
          cells.push_back(
              format_or_na(r.detected, round_to_grid(r.time, report.integrator.sample_every)));
        } else {
          cells.push_back(format_double(m->window.at(k).mean));
        }
      }
    }
    out.rows.push_back(std::move(cells));
  }
  return out;
}

CsvTable protection_table(const CompareTable& table, double threshold) {
  CsvTable out;
  out.header = {"n_total", "geometry", "metric", "threshold", "protection_time", "confirmed_until"};
  for (const auto& row : table.rows) {
    for (const auto& [name, m] : {std::pair{"empty", &row.empty}, std::pair{"maximal", &row.maximal}}) {
      for (const auto& r : m->protection) {
        out.rows.push_back({std::to_string(row.n_total()), name, r.metric.id(),
                            format_double(threshold), format_or_na(r.detected, r.time),
                            format_or_na(r.detected, r.confirmed_until)});
      }
    }
  }
  return out;
}

CsvTable window_table(const CompareTable& table) {
  CsvTable out;
  out.header = {"n_total", "geometry", "metric", "t1", "t2", "mean"};
  for (const auto& row : table.rows) {
    for (const auto& [name, m] : {std::pair{"empty", &row.empty}, std::pair{"maximal", &row.maximal}}) {
      for (const auto& r : m->window) {
        out.rows.push_back({std::to_string(row.n_total()), name, r.metric.id(), format_double(r.t1),
                            format_double(r.t2), format_double(r.mean)});
      }
    }
  }
  return out;
}

}  // namespace spinshield
