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

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spinshield/dynamics.hpp"
#include "spinshield/metrics.hpp"
#include "spinshield/model.hpp"
#include "spinshield/time_series.hpp"
#include "spinshield/topology.hpp"

namespace spinshield {

inline constexpr double kDefaultThreshold = 1e-4;
inline constexpr double kDefaultWindowStart = 29000.0;
inline constexpr double kDefaultWindowEnd = 30000.0;

// max(5 * 2pi / (4g), 5000); 5000 when g = 0.
double confirmation_window(double g);

double round_to_grid(double t, double grid);

struct ProtectionTimeResult {
  MetricName metric;
  double threshold = kDefaultThreshold;
  bool detected = false;
  // Last downward crossing of the threshold, linearly interpolated.
  double time = std::numeric_limits<double>::quiet_NaN();
  // First sample at which the metric had stayed below the threshold for a
  // full confirmation window after `time`.
  double confirmed_until = std::numeric_limits<double>::quiet_NaN();
};

// Online detector fed one sample at a time. Once confirmed, the result is
// frozen and later samples are ignored.
class ProtectionTracker {
 public:
  ProtectionTracker(MetricName metric, double threshold, double window);

  void observe(double t, double value);
  bool confirmed() const noexcept { return confirmed_; }
  ProtectionTimeResult result() const;

 private:
  MetricName metric_;
  double threshold_;
  double window_;
  bool started_ = false;
  bool below_ = false;
  bool confirmed_ = false;
  double prev_t_ = 0.0;
  double prev_value_ = 0.0;
  double crossing_ = 0.0;
  double confirmed_at_ = 0.0;
};

// Offline detection over a recorded series.
ProtectionTimeResult detect_protection_time(const TimeSeries& series, const MetricName& metric,
                                            double threshold, double window);

struct WindowMeanResult {
  MetricName metric;
  double t1 = kDefaultWindowStart;
  double t2 = kDefaultWindowEnd;
  double mean = std::numeric_limits<double>::quiet_NaN();
  std::size_t samples = 0;
};

// Arithmetic mean over samples with t1 <= t <= t2. Throws ValidationError
// for t1 >= t2 or an empty window.
WindowMeanResult window_mean(const TimeSeries& series, const MetricName& metric, double t1,
                             double t2);

// What a single trajectory should measure.
struct MeasurementPlan {
  std::vector<MetricName> metrics = table_metrics();
  bool protection = true;
  double threshold = kDefaultThreshold;
  bool window = true;
  double t1 = kDefaultWindowStart;
  double t2 = kDefaultWindowEnd;
};

struct Measurement {
  std::vector<ProtectionTimeResult> protection;
  std::vector<WindowMeanResult> window;
  double final_time = 0.0;
  double max_trace_drift = 0.0;
  double max_hermiticity_drift = 0.0;
};

// One trajectory. Stops as soon as every protection time is confirmed and
// the window has been covered.
Measurement measure(const ClusterSpec& spec, const IntegratorConfig& cfg,
                    const MeasurementPlan& plan);

ProtectionTimeResult protection_time(const ClusterSpec& spec, const IntegratorConfig& cfg,
                                     const MetricName& metric,
                                     double threshold = kDefaultThreshold);

WindowMeanResult window_mean(const ClusterSpec& spec, const IntegratorConfig& cfg,
                             const MetricName& metric, double t1 = kDefaultWindowStart,
                             double t2 = kDefaultWindowEnd);

// Runs body(0..count-1) on up to `jobs` threads. Each index is its own
// output slot; the exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

struct CompareRequest {
  ClusterSpec base;  // n_buffer and graph are replaced per row
  IntegratorConfig integrator;
  std::vector<int> n_buffers{2, 3, 4, 5, 6};
  MeasurementPlan plan;
  int jobs = 1;
};

struct CompareRow {
  int n_buffer = 0;
  Measurement empty;
  Measurement maximal;
  int n_total() const noexcept { return n_buffer + 1; }
};

struct CompareTable {
  std::vector<MetricName> metrics;
  std::vector<CompareRow> rows;

  // N+1 of the maximal-connectivity row with the longest protection time for
  // metrics[metric_index]; empty when any row of that column is undetected.
  std::optional<int> argmax_maximal(std::size_t metric_index) const;
  std::optional<int> argmax_maximal_window(std::size_t metric_index) const;
};

CompareTable compare_extremes(const CompareRequest& request);

enum class SweepStatistic { window_mean_l1 };

struct SweepGrid {
  std::vector<double> g_values;
  std::vector<double> gamma_values;
  BufferGraph geometry{3};
  SweepStatistic statistic = SweepStatistic::window_mean_l1;
  double t1 = kDefaultWindowStart;
  double t2 = kDefaultWindowEnd;

  void validate() const;
};

struct SweepResult {
  std::vector<double> g_values;
  std::vector<double> gamma_values;
  // values[i][j] for g_values[i], gamma_values[j]; NaN for failed cells.
  std::vector<std::vector<double>> values;
  std::vector<std::string> errors;  // one entry per failed cell

  void write_csv(std::ostream& os) const;
};

// Cells run independently; a failing cell is recorded and the sweep goes on.
SweepResult sweep(const SweepGrid& grid, const ClusterSpec& base, const IntegratorConfig& cfg,
                  int jobs = 1);

// a - b cellwise; the grids must match.
SweepResult difference_map(const SweepResult& a, const SweepResult& b);

struct HeatCurve {
  BufferGraph geometry{1};
  TimeSeries series;  // heat_current, heat_integrated
  double final_heat = 0.0;
  bool converged = false;
  // First time Q reaches half the erasure cost; NaN when it never does.
  double half_time = std::numeric_limits<double>::quiet_NaN();
};

struct HeatComparison {
  int n_buffer = 0;
  double erasure_cost = 0.0;
  double tolerance = 0.02;
  HeatCurve empty;
  HeatCurve maximal;

  bool delayed() const { return maximal.half_time > empty.half_time; }
};

// First time the series crosses `level` from the side of its first sample,
// interpolated linearly; NaN when it never does.
double first_crossing(const TimeSeries& series, const std::string& column, double level);

HeatComparison heat_comparison(int n_buffer, const ClusterSpec& base, const IntegratorConfig& cfg,
                               int jobs = 1);

inline constexpr double kCalibrationTarget = 41770.0;
inline constexpr double kCalibrationTolerance = 0.15;

struct CalibrationResult {
  double time_once = std::numeric_limits<double>::quiet_NaN();
  double time_double = std::numeric_limits<double>::quiet_NaN();
  std::optional<PairConvention> chosen;

  double relative_error(PairConvention c) const;
};

// Runs N+1 = 3 without buffer couplings under both pair conventions, keeping
// every other setting of `base`, and picks the convention whose C_L1
// protection time lies within 15% of the reference, the closer one if both do.
CalibrationResult calibrate_pair_convention(const ClusterSpec& base, const IntegratorConfig& cfg,
                                            int jobs = 1);

}  // namespace spinshield
