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


#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "spinshield/csv.hpp"
#include "spinshield/error.hpp"
#include "spinshield/tables.hpp"
#include "spinshield/time_series.hpp"

namespace spinshield {
namespace {

TEST(Csv, DoubleRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(rng) * std::pow(10.0, (k % 40) - 20);
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(32930.0), "32930");
  EXPECT_TRUE(std::isnan(parse_double("NA")));
  EXPECT_TRUE(std::isinf(parse_double(format_double(-INFINITY))));
  EXPECT_THROW(parse_double("1.5x"), ParseError);
  EXPECT_THROW(parse_double(""), ParseError);
}

TEST(Csv, QuotingRoundTripsByteForByte) {
  CsvTable t;
  t.header = {"n_total", "geometry", "note"};
  t.rows = {{"3", "N=3; edges=(2,3),(2,4)", "say \"hi\""}, {"4", "empty", ""}};
  std::ostringstream first;
  t.write(first);
  EXPECT_EQ(first.str(), "n_total,geometry,note\n3,\"N=3; edges=(2,3),(2,4)\",\"say \"\"hi\"\"\"\n4,empty,\n");
  std::istringstream in(first.str());
  const CsvTable back = CsvTable::read(in);
  EXPECT_EQ(back.rows, t.rows);
  std::ostringstream second;
  back.write(second);
  EXPECT_EQ(second.str(), first.str());
  EXPECT_EQ(back.column_index("note"), 2u);
  EXPECT_THROW(back.column_index("missing"), std::out_of_range);

  std::istringstream ragged("a,b\n1\n");
  EXPECT_THROW(CsvTable::read(ragged), ParseError);
  std::istringstream open_quote("a\n\"x\n");
  EXPECT_THROW(CsvTable::read(open_quote), ParseError);
  std::istringstream empty("");
  EXPECT_THROW(CsvTable::read(empty), ParseError);
}

TEST(TimeSeries, CsvRoundTripsByteForByte) {
  TimeSeries s(std::vector<std::string>{"coh_l1", "purity@2-3"});
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n;
  for (int k = 0; k < 50; ++k) s.append(0.1 * k, {n(rng), std::exp(n(rng))});
  s.append(5.5, {std::nan(""), 1.0 / 3.0});
  std::ostringstream first;
  s.write_csv(first);
  EXPECT_EQ(first.str().substr(0, first.str().find('\n')), "t,coh_l1,purity@2-3");
  std::istringstream in(first.str());
  const TimeSeries back = TimeSeries::read_csv(in);
  EXPECT_EQ(back.times(), s.times());
  std::ostringstream second;
  back.write_csv(second);
  EXPECT_EQ(second.str(), first.str());

  std::istringstream no_t("x,y\n1,2\n");
  EXPECT_THROW(TimeSeries::read_csv(no_t), ParseError);
}

TEST(TimeSeries, Invariants) {
  TimeSeries s(std::vector<std::string>{"a"});
  s.append(0.0, {1.0});
  EXPECT_THROW(s.append(0.0, {1.0}), std::invalid_argument);
  EXPECT_THROW(s.append(1.0, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(s.add_column("b", {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(s.add_column("a", {1.0}), std::invalid_argument);
  s.add_column("b", {2.0});
  EXPECT_TRUE(s.has("b"));
  EXPECT_THROW(s.column("c"), std::out_of_range);
}

TEST(Tables, IdsAndChannels) {
  EXPECT_EQ(parse_table_id("III"), TableId::III);
  EXPECT_EQ(parse_table_id("2"), TableId::II);
  EXPECT_THROW(parse_table_id("V"), ParseError);
  for (TableId id : {TableId::I, TableId::II, TableId::III, TableId::IV}) {
    EXPECT_EQ(parse_table_id(to_string(id)), id);
  }
  EXPECT_TRUE(is_protection_table(TableId::I));
  EXPECT_FALSE(is_protection_table(TableId::IV));
  EXPECT_EQ(table_channel(TableId::I), NoiseChannel::thermal);
  EXPECT_EQ(table_channel(TableId::III), NoiseChannel::dephasing);
}

TEST(Tables, ReferenceValues) {
  const ReferenceTable& one = reference_table(TableId::I);
  EXPECT_EQ(one.value(5, 0, Extreme::maximal), 32930.0);
  EXPECT_EQ(one.value(5, 1, Extreme::maximal), 32360.0);
  EXPECT_EQ(one.value(5, 2, Extreme::maximal), 64660.0);
  EXPECT_EQ(one.value(5, 3, Extreme::maximal), 66870.0);
  EXPECT_EQ(one.value(3, 3, Extreme::empty), kCalibrationTarget);
  EXPECT_EQ(reference_table(TableId::III).value(5, 3, Extreme::maximal), 36700.0);
  EXPECT_NEAR(reference_table(TableId::II).value(5, 3, Extreme::maximal), 1.42e-2, 1e-12);
  EXPECT_THROW(one.value(8, 0, Extreme::empty), std::out_of_range);
}

TEST(Tables, WideLayout) {
  TableReport report;
  report.id = TableId::I;
  report.integrator.sample_every = 10.0;
  report.table.metrics = table_metrics();
  for (int n : {2, 3}) {
    CompareRow row;
    row.n_buffer = n;
    for (std::size_t k = 0; k < 4; ++k) {
      ProtectionTimeResult p;
      p.metric = table_metrics()[k];
      p.detected = !(n == 3 && k == 0);
      p.time = p.detected ? 1234.4 * (k + 1) : std::nan("");
      p.confirmed_until = p.time + 5000.0;
      row.empty.protection.push_back(p);
      row.maximal.protection.push_back(p);
    }
    report.table.rows.push_back(row);
  }
  const CsvTable wide = wide_table(report);
  ASSERT_EQ(wide.header.size(), 9u);
  EXPECT_EQ(wide.header[0], "n_total");
  EXPECT_EQ(wide.header[1], "rel_entropy_vs_thermal.empty");
  EXPECT_EQ(wide.header[8], "coh_l1.maximal");
  ASSERT_EQ(wide.rows.size(), 2u);
  EXPECT_EQ(wide.rows[0][0], "3");
  EXPECT_EQ(wide.rows[0][1], "1230");
  EXPECT_EQ(wide.rows[1][1], "NA");
  const CsvTable longform = protection_table(report.table, 1e-4);
  EXPECT_EQ(longform.header, (std::vector<std::string>{"n_total", "geometry", "metric", "threshold", "protection_time",
                                                       "confirmed_until"}));
  EXPECT_EQ(longform.rows.size(), 16u);
}

}  // namespace
}  // namespace spinshield
