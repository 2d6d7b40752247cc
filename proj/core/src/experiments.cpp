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


#include "spinshield/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "spinshield/csv.hpp"
#include "spinshield/error.hpp"

namespace spinshield {

namespace {

constexpr double kMinimumWindow = 5000.0;

double interpolate_crossing(double t0, double v0, double t1, double v1, double level) {
  if (!std::isfinite(v0) || !std::isfinite(v1) || v0 == v1) return t1;
  const double f = (v0 - level) / (v0 - v1);
  return t0 + std::clamp(f, 0.0, 1.0) * (t1 - t0);
}

ClusterSpec with_geometry(const ClusterSpec& base, const BufferGraph& graph) {
  ClusterSpec spec = base;
  spec.n_buffer = graph.n_buffer();
  spec.graph = graph;
  return spec;
}

}  // namespace

double confirmation_window(double g) {
  if (!(g > 0.0)) return kMinimumWindow;
  return std::max(5.0 * 2.0 * std::numbers::pi / (4.0 * g), kMinimumWindow);
}

double round_to_grid(double t, double grid) {
  if (!std::isfinite(t) || !(grid > 0.0)) return t;
  return std::round(t / grid) * grid;
}

ProtectionTracker::ProtectionTracker(MetricName metric, double threshold, double window)
    : metric_(std::move(metric)), threshold_(threshold), window_(window) {
  if (!(threshold > 0.0)) throw ValidationError("threshold must be > 0");
  if (!(window >= 0.0)) throw ValidationError("confirmation window must be >= 0");
}

void ProtectionTracker::observe(double t, double value) {
  if (confirmed_) return;
  const bool below = value < threshold_;
  if (!started_) {
    started_ = true;
    crossing_ = t;
  } else if (below && !below_) {
    crossing_ = interpolate_crossing(prev_t_, prev_value_, t, value, threshold_);
  }
  below_ = below;
  prev_t_ = t;
  prev_value_ = value;
  if (below_ && t - crossing_ >= window_) {
    confirmed_ = true;
    confirmed_at_ = t;
  }
}

ProtectionTimeResult ProtectionTracker::result() const {
  ProtectionTimeResult r;
  r.metric = metric_;
  r.threshold = threshold_;
  r.detected = confirmed_;
  if (confirmed_) {
    r.time = crossing_;
    r.confirmed_until = confirmed_at_;
  }
  return r;
}

ProtectionTimeResult detect_protection_time(const TimeSeries& series, const MetricName& metric,
                                            double threshold, double window) {
  ProtectionTracker tracker(metric, threshold, window);
  const auto& values = series.column(metric.id());
  const auto& times = series.times();
  for (std::size_t k = 0; k < times.size() && !tracker.confirmed(); ++k) {
    tracker.observe(times[k], values[k]);
  }
  return tracker.result();
}

WindowMeanResult window_mean(const TimeSeries& series, const MetricName& metric, double t1,
                             double t2) {
  if (!(t1 < t2)) throw ValidationError("window requires t1 < t2");
  const auto& values = series.column(metric.id());
  const auto& times = series.times();
  WindowMeanResult r{metric, t1, t2, 0.0, 0};
  double sum = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < t1 || times[k] > t2) continue;
    sum += values[k];
    ++r.samples;
  }
  if (r.samples == 0) throw ValidationError("no samples inside the averaging window");
  r.mean = sum / static_cast<double>(r.samples);
  return r;
}

Measurement measure(const ClusterSpec& spec, const IntegratorConfig& cfg,
                    const MeasurementPlan& plan) {
  if (plan.metrics.empty()) throw ValidationError("measurement needs at least one metric");
  if (plan.window) {
    if (!(plan.t1 < plan.t2)) throw ValidationError("window requires t1 < t2");
    if (plan.t2 > cfg.t_max) throw ValidationError("window end exceeds t_max");
  }
  for (const auto& m : plan.metrics) {
    if (!m.is_state_metric()) throw ValidationError("not a state metric: " + m.id());
  }
  std::vector<ProtectionTracker> trackers;
  if (plan.protection) {
    const double window = confirmation_window(spec.g);
    for (const auto& m : plan.metrics) trackers.emplace_back(m, plan.threshold, window);
  }
  std::vector<std::string> ids;
  for (const auto& m : plan.metrics) ids.push_back(m.id());

  std::size_t fed = 0;
  auto feed = [&](const TimeSeries& series) {
    const auto& times = series.times();
    for (; fed < times.size(); ++fed) {
      for (std::size_t k = 0; k < trackers.size(); ++k) {
        trackers[k].observe(times[fed], series.column(ids[k])[fed]);
      }
    }
  };
  auto observer = [&](const TimeSeries& series, const ComplexMatrix&) {
    feed(series);
    bool done = std::all_of(trackers.begin(), trackers.end(),
                            [](const ProtectionTracker& t) { return t.confirmed(); });
    if (plan.window && series.times().back() < plan.t2) done = false;
    return !done;
  };
  const EvolutionResult run = evolve(spec, cfg, plan.metrics, observer);
  feed(run.series);

  Measurement out;
  out.final_time = run.final_time;
  out.max_trace_drift = run.max_trace_drift;
  out.max_hermiticity_drift = run.max_hermiticity_drift;
  for (const auto& t : trackers) out.protection.push_back(t.result());
  if (plan.window) {
    for (const auto& m : plan.metrics) {
      out.window.push_back(window_mean(run.series, m, plan.t1, plan.t2));
    }
  }
  return out;
}

ProtectionTimeResult protection_time(const ClusterSpec& spec, const IntegratorConfig& cfg,
                                     const MetricName& metric, double threshold) {
  MeasurementPlan plan;
  plan.metrics = {metric};
  plan.threshold = threshold;
  plan.window = false;
  return measure(spec, cfg, plan).protection.front();
}

WindowMeanResult window_mean(const ClusterSpec& spec, const IntegratorConfig& cfg,
                             const MetricName& metric, double t1, double t2) {
  MeasurementPlan plan;
  plan.metrics = {metric};
  plan.protection = false;
  plan.t1 = t1;
  plan.t2 = t2;
  return measure(spec, cfg, plan).window.front();
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::optional<int> CompareTable::argmax_maximal(std::size_t metric_index) const {
  std::optional<int> best;
  double best_time = -1.0;
  for (const auto& row : rows) {
    const ProtectionTimeResult& r = row.maximal.protection.at(metric_index);
    if (!r.detected) return std::nullopt;
    if (r.time > best_time) {
      best_time = r.time;
      best = row.n_total();
    }
  }
  return best;
}

std::optional<int> CompareTable::argmax_maximal_window(std::size_t metric_index) const {
  std::optional<int> best;
  double best_mean = -std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    const WindowMeanResult& r = row.maximal.window.at(metric_index);
    if (!std::isfinite(r.mean)) return std::nullopt;
    if (r.mean > best_mean) {
      best_mean = r.mean;
      best = row.n_total();
    }
  }
  return best;
}

CompareTable compare_extremes(const CompareRequest& request) {
  for (int n : request.n_buffers) {
    if (n < 2 || n > kMaxEnumerationBuffer) {
      throw ValidationError("compare_extremes supports N in 2.." +
                            std::to_string(kMaxEnumerationBuffer));
    }
  }
  CompareTable table;
  table.metrics = request.plan.metrics;
  table.rows.resize(request.n_buffers.size());
  for (std::size_t i = 0; i < request.n_buffers.size(); ++i) {
    table.rows[i].n_buffer = request.n_buffers[i];
  }
  // Largest clusters first so the long runs start early.
  std::vector<std::size_t> order(2 * table.rows.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = order.size() - 1 - k;
  parallel_for(order.size(), request.jobs, [&](std::size_t slot) {
    const std::size_t item = order[slot];
    CompareRow& row = table.rows[item / 2];
    const Extreme which = item % 2 == 0 ? Extreme::empty : Extreme::maximal;
    const ClusterSpec spec = with_geometry(request.base, extreme_geometry(row.n_buffer, which));
    Measurement m = measure(spec, request.integrator, request.plan);
    (which == Extreme::empty ? row.empty : row.maximal) = std::move(m);
  });
  return table;
}

void SweepGrid::validate() const {
  if (g_values.empty() || gamma_values.empty()) throw ValidationError("sweep grid is empty");
  for (double v : g_values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("sweep g values must be > 0");
  }
  for (double v : gamma_values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("sweep gamma values must be > 0");
  }
  if (!(t1 < t2)) throw ValidationError("sweep window requires t1 < t2");
}

void SweepResult::write_csv(std::ostream& os) const {
  CsvTable table;
  table.header = {"g", "gamma", "statistic_value"};
  for (std::size_t i = 0; i < g_values.size(); ++i) {
    for (std::size_t j = 0; j < gamma_values.size(); ++j) {
      table.rows.push_back({format_double(g_values[i]), format_double(gamma_values[j]),
                            format_double(values[i][j])});
    }
  }
  table.write(os);
}

SweepResult sweep(const SweepGrid& grid, const ClusterSpec& base, const IntegratorConfig& cfg,
                  int jobs) {
  grid.validate();
  SweepResult result;
  result.g_values = grid.g_values;
  result.gamma_values = grid.gamma_values;
  const std::size_t cols = grid.gamma_values.size();
  result.values.assign(grid.g_values.size(),
                       std::vector<double>(cols, std::numeric_limits<double>::quiet_NaN()));
  std::vector<std::string> cell_errors(grid.g_values.size() * cols);
  IntegratorConfig cell_cfg = cfg;
  cell_cfg.t_max = grid.t2;
  MeasurementPlan plan;
  plan.metrics = {MetricName::central(MetricKind::coh_l1)};
  plan.protection = false;
  plan.t1 = grid.t1;
  plan.t2 = grid.t2;
  parallel_for(cell_errors.size(), jobs, [&](std::size_t k) {
    const std::size_t i = k / cols;
    const std::size_t j = k % cols;
    ClusterSpec spec = with_geometry(base, grid.geometry);
    spec.g = grid.g_values[i];
    spec.noise.gamma = grid.gamma_values[j];
    try {
      result.values[i][j] = measure(spec, cell_cfg, plan).window.front().mean;
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "g=" << format_double(spec.g) << " gamma=" << format_double(spec.noise.gamma) << ": "
         << e.what();
      cell_errors[k] = os.str();
    }
  });
  for (auto& e : cell_errors) {
    if (!e.empty()) result.errors.push_back(std::move(e));
  }
  return result;
}

SweepResult difference_map(const SweepResult& a, const SweepResult& b) {
  if (a.g_values != b.g_values || a.gamma_values != b.gamma_values) {
    throw ValidationError("difference map needs identical grids");
  }
  SweepResult out = a;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    for (std::size_t j = 0; j < a.values[i].size(); ++j) out.values[i][j] -= b.values[i][j];
  }
  out.errors.insert(out.errors.end(), b.errors.begin(), b.errors.end());
  return out;
}

double first_crossing(const TimeSeries& series, const std::string& column, double level) {
  const auto& v = series.column(column);
  const auto& t = series.times();
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (v[0] == level) return t[0];
  const bool start_above = v[0] > level;
  for (std::size_t k = 1; k < v.size(); ++k) {
    const bool reached = start_above ? v[k] <= level : v[k] >= level;
    if (reached) return interpolate_crossing(t[k - 1], v[k - 1], t[k], v[k], level);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

HeatComparison heat_comparison(int n_buffer, const ClusterSpec& base, const IntegratorConfig& cfg,
                               int jobs) {
  if (n_buffer < 2 || n_buffer > 5) throw ValidationError("heat comparison supports N in 2..5");
  if (base.noise.channel != NoiseChannel::thermal) {
    throw ValidationError("heat comparison needs the thermal channel");
  }
  HeatComparison out;
  out.n_buffer = n_buffer;
  out.erasure_cost =
      erasure_cost(base, plus_state().matrix(),
                   thermal_state(base.omega, base.noise.temperature).matrix());
  const std::vector<MetricName> observables{MetricName::central(MetricKind::heat_current),
                                            MetricName::central(MetricKind::heat_integrated)};
  const std::string q = to_string(MetricKind::heat_integrated);
  parallel_for(2, jobs, [&](std::size_t k) {
    const Extreme which = k == 0 ? Extreme::empty : Extreme::maximal;
    HeatCurve& curve = k == 0 ? out.empty : out.maximal;
    curve.geometry = extreme_geometry(n_buffer, which);
    curve.series = evolve(with_geometry(base, curve.geometry), cfg, observables).series;
    curve.final_heat = curve.series.column(q).back();
    curve.converged =
        std::abs(curve.final_heat - out.erasure_cost) <= out.tolerance * std::abs(out.erasure_cost);
    curve.half_time = first_crossing(curve.series, q, 0.5 * out.erasure_cost);
  });
  return out;
}

double CalibrationResult::relative_error(PairConvention c) const {
  const double t = c == PairConvention::unordered_once ? time_once : time_double;
  return std::abs(t - kCalibrationTarget) / kCalibrationTarget;
}

CalibrationResult calibrate_pair_convention(const ClusterSpec& base, const IntegratorConfig& cfg,
                                            int jobs) {
  CalibrationResult out;
  const MetricName metric = MetricName::central(MetricKind::coh_l1);
  parallel_for(2, jobs, [&](std::size_t k) {
    ClusterSpec spec = with_geometry(base, BufferGraph(2));
    spec.pair_convention = k == 0 ? PairConvention::unordered_once : PairConvention::ordered_double;
    const ProtectionTimeResult r = protection_time(spec, cfg, metric, kDefaultThreshold);
    (k == 0 ? out.time_once : out.time_double) = r.time;
  });
  double best = kCalibrationTolerance;
  for (PairConvention c : {PairConvention::unordered_once, PairConvention::ordered_double}) {
    const double err = out.relative_error(c);
    if (err <= best) {
      if (out.chosen && err == best) continue;
      best = err;
      out.chosen = c;
    }
  }
  return out;
}

}  // namespace spinshield
