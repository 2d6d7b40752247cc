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


// Acceptance suite. Prints one PASS/FAIL line per criterion followed by
// indented detail lines, and exits nonzero when any criterion fails.
//
//   spinshield_acceptance [--jobs N] [--only 1,6,7]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spinshield/dynamics.hpp"
#include "spinshield/experiments.hpp"
#include "spinshield/metrics.hpp"
#include "spinshield/tables.hpp"
#include "spinshield/topology.hpp"

namespace {

using namespace spinshield;

struct Verdict {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("info " + what); }
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

double rel_err(double value, double reference) { return std::abs(value - reference) / std::abs(reference); }

const char* short_name(std::size_t metric_index) {
  static const char* names[] = {"S", "T", "C_RE", "C_L1"};
  return names[metric_index];
}

// Lazily computed, shared between criteria.
struct Runs {
  int jobs = 0;
  std::optional<TableReport> table1_literal;
  std::optional<TableReport> table12_thermal;
  std::optional<TableReport> table3;

  TableOptions options(TableId id) const {
    TableOptions o;
    o.id = id;
    o.jobs = jobs;
    return o;
  }
  const TableReport& literal() {
    if (!table1_literal) {
      TableOptions o = options(TableId::I);
      o.base.initial_buffer = InitialBuffer::max_coherent;
      table1_literal = reproduce_table(o);
    }
    return *table1_literal;
  }
  const TableReport& thermal() {
    if (!table12_thermal) table12_thermal = reproduce_table(options(TableId::I));
    return *table12_thermal;
  }
  const TableReport& dephasing() {
    if (!table3) table3 = reproduce_table(options(TableId::III));
    return *table3;
  }
};

void describe_calibration(Verdict& v, const TableReport& r) {
  if (!r.calibration) return;
  v.note("calibration: once " + fmt(r.calibration->time_once) + ", double " + fmt(r.calibration->time_double) +
         " against " + fmt(kCalibrationTarget) + " -> " + to_string(r.convention));
}

const CompareRow& row_for(const CompareTable& t, int n_total) {
  for (const auto& row : t.rows) {
    if (row.n_total() == n_total) return row;
  }
  throw std::out_of_range("missing row");
}

double time_of(const Measurement& m, std::size_t k) {
  return m.protection.at(k).detected ? m.protection.at(k).time : std::nan("");
}

// Counts protection times within 15% of the reference; `column_of` maps a
// metric index onto a reference column.
int compare_against_table1(Verdict& v, const TableReport& r, const std::array<std::size_t, 4>& column_of,
                           bool gate) {
  const ReferenceTable& ref = reference_table(TableId::I);
  int within = 0;
  for (int n_total : kTableClusterSizes) {
    const CompareRow& row = row_for(r.table, n_total);
    std::ostringstream line;
    line << "N+1=" << n_total << ":";
    for (std::size_t k = 0; k < 4; ++k) {
      for (Extreme which : {Extreme::empty, Extreme::maximal}) {
        const double mine = time_of(which == Extreme::empty ? row.empty : row.maximal, k);
        const double theirs = ref.value(n_total, column_of[k], which);
        const bool ok = std::isfinite(mine) && rel_err(mine, theirs) <= 0.15;
        within += ok ? 1 : 0;
        line << " " << short_name(k) << (which == Extreme::empty ? ".e " : ".m ") << fmt(mine, 5) << "/"
             << fmt(theirs, 5) << (ok ? "" : "*");
      }
    }
    if (gate) v.details.push_back("     " + line.str());
    else v.note(line.str());
  }
  return within;
}

Verdict criterion1(Runs& runs) {
  Verdict v;
  const TableReport& r = runs.literal();
  describe_calibration(v, r);
  const int within = compare_against_table1(v, r, {0, 1, 2, 3}, true);
  v.require(within == 40, std::to_string(within) + "/40 protection times within 15% (* marks misses)");
  const CompareRow& best = row_for(r.table, 5);
  const std::array<double, 4> bold{32930, 32360, 64660, 66870};
  bool bold_ok = true;
  std::ostringstream line;
  for (std::size_t k = 0; k < 4; ++k) {
    const double mine = time_of(best.maximal, k);
    bold_ok = bold_ok && std::isfinite(mine) && rel_err(mine, bold[k]) <= 0.15;
    line << " " << short_name(k) << " " << fmt(mine, 5) << "/" << fmt(bold[k], 5);
  }
  v.require(bold_ok, "optimum row N+1=5 maximal within 15%:" + line.str());

  // Same table with thermal buffers, reading the reference T and C_RE columns
  // the other way round. Does not affect the verdict.
  const TableReport& th = runs.thermal();
  Verdict diag;
  const int swapped = compare_against_table1(diag, th, {0, 2, 1, 3}, false);
  v.note("thermal buffers, T and C_RE reference columns exchanged (non-gating): " + std::to_string(swapped) +
         "/40 within 15%");
  for (const auto& d : diag.details) v.details.push_back(d);
  v.summary = "Table I with max-coherent buffers: " + std::to_string(within) + "/40 within 15%";
  return v;
}

Verdict criterion2(Runs& runs) {
  Verdict v;
  const TableReport& r = runs.thermal();
  describe_calibration(v, r);
  for (std::size_t k = 0; k < 4; ++k) {
    bool max_gt_empty = true, decreasing = true;
    double prev = std::numeric_limits<double>::infinity();
    std::ostringstream line;
    for (const auto& row : r.table.rows) {
      const double e = time_of(row.empty, k), m = time_of(row.maximal, k);
      max_gt_empty = max_gt_empty && m > e;
      decreasing = decreasing && e < prev;
      prev = e;
      line << " " << row.n_total() << ":" << fmt(e, 5) << "/" << fmt(m, 5);
    }
    const auto best = r.table.argmax_maximal(k);
    v.require(max_gt_empty, std::string(short_name(k)) + " maximal > empty on every row (empty/maximal)" + line.str());
    v.require(decreasing, std::string(short_name(k)) + " empty times strictly decrease with N");
    v.require(best && *best == 5,
              std::string(short_name(k)) + " argmax over maximal rows at N+1=" + (best ? std::to_string(*best) : "?"));
  }
  v.summary = "orderings on the thermal-buffer Table I run";
  return v;
}

std::vector<int> rank_order(const std::vector<std::pair<int, double>>& values) {
  std::vector<std::pair<int, double>> sorted = values;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<int> out;
  for (const auto& p : sorted) out.push_back(p.first);
  return out;
}

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ">" : "") << v[k];
  return os.str();
}

Verdict criterion3(Runs& runs) {
  Verdict v;
  const TableReport& r = runs.thermal();
  const ReferenceTable& ref = reference_table(TableId::II);
  constexpr std::size_t l1 = 3;
  const double mean = row_for(r.table, 5).maximal.window.at(l1).mean;
  const double target = ref.value(5, l1, Extreme::maximal);
  v.require(mean >= target / 2.0 && mean <= target * 2.0,
            "N+1=5 maximal C_L1 mean " + fmt(mean) + " vs " + fmt(target) + " (factor 2)");
  std::vector<std::pair<int, double>> mine, theirs;
  for (int n_total : kTableClusterSizes) {
    mine.push_back({n_total, row_for(r.table, n_total).maximal.window.at(l1).mean});
    theirs.push_back({n_total, ref.value(n_total, l1, Extreme::maximal)});
  }
  const auto a = rank_order(mine), b = rank_order(theirs);
  v.require(a == b, "maximal C_L1 row ordering " + join(a) + " vs reference " + join(b));
  for (int n_total : kTableClusterSizes) {
    const CompareRow& row = row_for(r.table, n_total);
    std::ostringstream line;
    line << "N+1=" << n_total << ":";
    for (std::size_t k = 0; k < 4; ++k) {
      line << " " << short_name(k) << " " << fmt(row.empty.window.at(k).mean, 3) << "/"
           << fmt(row.maximal.window.at(k).mean, 3);
    }
    v.note(line.str());
  }
  v.summary = "Table II window mean and maximal-column ordering";
  return v;
}

Verdict criterion4(Runs& runs) {
  Verdict v;
  const TableReport& r = runs.dephasing();
  describe_calibration(v, r);
  constexpr std::size_t l1 = 3;
  const auto best = r.table.argmax_maximal(l1);
  v.require(best && *best == 5, "C_L1 argmax over maximal rows at N+1=" + (best ? std::to_string(*best) : "?"));
  const double t5 = time_of(row_for(r.table, 5).maximal, l1);
  v.require(std::isfinite(t5) && rel_err(t5, 36700.0) <= 0.15, "N+1=5 maximal C_L1 time " + fmt(t5, 5) + " vs 36700");
  bool ordered = true;
  std::ostringstream line;
  for (const auto& row : r.table.rows) {
    const double e = time_of(row.empty, l1), m = time_of(row.maximal, l1);
    ordered = ordered && m > e;
    line << " " << row.n_total() << ":" << fmt(e, 5) << "/" << fmt(m, 5);
  }
  v.require(ordered, "C_L1 maximal > empty on every row (empty/maximal)" + line.str());
  for (std::size_t k = 0; k < 3; ++k) {
    std::ostringstream other;
    other << short_name(k) << " (not gating):";
    for (const auto& row : r.table.rows) {
      other << " " << row.n_total() << ":" << fmt(time_of(row.empty, k), 5) << "/" << fmt(time_of(row.maximal, k), 5);
    }
    v.note(other.str());
  }
  v.summary = "dephasing channel, gamma_d = 0.00059";
  return v;
}

Verdict criterion5(int jobs) {
  Verdict v;
  const ClusterSpec base;
  const IntegratorConfig cfg;
  for (int n = 2; n <= 5; ++n) {
    const HeatComparison h = heat_comparison(n, base, cfg, jobs);
    const double ec = h.erasure_cost;
    v.require(h.empty.converged && h.maximal.converged,
              "N=" + std::to_string(n) + " Q(t_max) empty " + fmt(h.empty.final_heat) + ", maximal " +
                  fmt(h.maximal.final_heat) + " vs E_c " + fmt(ec) + " (2%)");
    v.require(h.delayed(), "N=" + std::to_string(n) + " E_c/2 reached at " + fmt(h.empty.half_time, 5) +
                               " (empty) and " + fmt(h.maximal.half_time, 5) + " (maximal)");
  }
  v.summary = "heat released by the central spin, N = 2..5";
  return v;
}

Verdict criterion6() {
  Verdict v;
  ClusterSpec spec;
  spec.n_buffer = 0;
  spec.graph = BufferGraph(0);
  spec.bath_on_central = true;
  IntegratorConfig cfg;
  cfg.t_max = 40000.0;
  const double n = planck_occupation(spec.omega, spec.noise.temperature);
  const double rate = 0.5 * spec.noise.gamma * (1.0 + 2.0 * n);
  const std::vector<MetricName> obs{MetricName::central(MetricKind::coh_l1)};
  const EvolutionResult r = evolve(spec, cfg, obs);
  double worst = 0.0;
  const auto& c = r.series.column("coh_l1");
  for (std::size_t k = 0; k < c.size(); ++k) worst = std::max(worst, std::abs(c[k] - std::exp(-rate * r.series.times()[k])));
  v.require(worst <= 1e-6, "max pointwise deviation " + fmt(worst, 3) + " over " + std::to_string(c.size()) +
                               " samples on [0, 40000]");
  IntegratorConfig long_cfg;
  const ProtectionTimeResult p = protection_time(spec, long_cfg, obs.front());
  const double expected = std::log(1e4) / rate;
  v.require(p.detected && rel_err(p.time, expected) <= 0.01 && rel_err(p.time, 31252.0) <= 0.01,
            "1e-4 crossing at " + fmt(p.time) + ", closed form " + fmt(expected));
  v.note("the 29000-30000 averaging window sits " + fmt(100.0 * (1.0 - 30000.0 / expected), 3) + "% to " +
         fmt(100.0 * (1.0 - 29000.0 / expected), 3) + "% before this crossing");
  v.summary = "single-spin thermal decay against the closed form";
  return v;
}

Verdict criterion7() {
  Verdict v;
  v.require(geometry_count(3) == 8 && geometry_count(4) == 64 && geometry_count(5) == 1023,
            "geometry_count(3,4,5) = " + geometry_count(3).str() + ", " + geometry_count(4).str() + ", " +
                geometry_count(5).str());
  std::vector<Edge> k5, k33;
  for (int u = 2; u <= 6; ++u) {
    for (int w = u + 1; w <= 6; ++w) k5.push_back({u, w});
  }
  for (int u : {2, 3, 4}) {
    for (int w : {5, 6, 7}) k33.push_back({u, w});
  }
  v.require(!is_planar(BufferGraph(5, k5)), "K5 rejected");
  v.require(!is_planar(BufferGraph(6, k33)), "K3,3 rejected");
  bool all_k4 = true;
  for (std::uint64_t mask = 0; mask < 64; ++mask) all_k4 = all_k4 && is_planar(BufferGraph::from_mask(4, mask));
  v.require(all_k4, "all 64 subgraphs of K4 accepted");
  for (int n = 1; n <= 4; ++n) {
    const auto graphs = enumerate_buffer_graphs(n, true, false);
    v.require(BigCount(graphs.size()) == geometry_count(n),
              "N=" + std::to_string(n) + " enumerated " + std::to_string(graphs.size()) + " = count " +
                  geometry_count(n).str());
  }
  v.note("N=6 enumerated " + std::to_string(enumerate_buffer_graphs(6, true, false).size()) + " planar of " +
         geometry_count(6).str() + " counted");
  v.summary = "graph layer";
  return v;
}

ClusterSpec cluster(int n_buffer, Extreme which) {
  ClusterSpec spec;
  spec.n_buffer = n_buffer;
  spec.graph = extreme_geometry(n_buffer, which);
  return spec;
}

IntegratorConfig integrator(double dt, double t_max, double sample_every, Frame frame) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.t_max = t_max;
  cfg.sample_every = sample_every;
  cfg.frame = frame;
  return cfg;
}

Verdict criterion8() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();

  // Frame equivalence on [0, 500].
  double frame_gap = 0.0;
  for (InitialBuffer init : {InitialBuffer::thermal, InitialBuffer::max_coherent}) {
    ClusterSpec spec = cluster(3, Extreme::maximal);
    spec.initial_buffer = init;
    const std::vector<MetricName> obs{MetricName::central(MetricKind::coh_l1)};
    const double lab_dt = init == InitialBuffer::thermal ? 0.005 : 0.002;
    const EvolutionResult lab = evolve(spec, integrator(lab_dt, 500.0, 50.0, Frame::lab), obs);
    const EvolutionResult rot = evolve(spec, integrator(1.0, 500.0, 50.0, Frame::rotating), obs);
    frame_gap = std::max(frame_gap, (lab.final_state - rot.final_state).cwiseAbs().maxCoeff());
  }
  v.require(frame_gap <= 1e-7, "lab vs rotating frame at t=500, max entry gap " + fmt(frame_gap, 3));

  // Trace, Hermiticity and positivity on the largest cluster.
  {
    ClusterSpec spec = cluster(6, Extreme::maximal);
    spec.initial_buffer = InitialBuffer::max_coherent;
    IntegratorConfig cfg = integrator(1.0, 5000.0, 50.0, Frame::rotating);
    cfg.check_positivity = true;
    const EvolutionResult r = evolve(spec, cfg, table_metrics());
    v.require(r.max_trace_drift <= 1e-8, "N+1=7 trace drift " + fmt(r.max_trace_drift, 3));
    v.require(r.max_hermiticity_drift <= 1e-9, "N+1=7 Hermiticity drift " + fmt(r.max_hermiticity_drift, 3));
    v.require(r.min_eigenvalue >= -1e-7, "N+1=7 minimum eigenvalue " + fmt(r.min_eigenvalue, 3));
  }

  // Step halving at t = 1000.
  double halving = 0.0;
  for (NoiseChannel channel : {NoiseChannel::thermal, NoiseChannel::dephasing}) {
    ClusterSpec spec = cluster(4, Extreme::maximal);
    spec.noise.channel = channel;
    const EvolutionResult a = evolve(spec, integrator(1.0, 1000.0, 10.0, Frame::rotating), table_metrics());
    const EvolutionResult b = evolve(spec, integrator(0.5, 1000.0, 10.0, Frame::rotating), table_metrics());
    for (const auto& m : table_metrics()) {
      halving = std::max(halving, std::abs(a.series.column(m.id()).back() - b.series.column(m.id()).back()));
    }
  }
  v.require(halving < 1e-8, "dt 1 -> 0.5 changes metrics at t=1000 by " + fmt(halving, 3));

  // Diagonal-unitary invariance.
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.141592653589793);
  double invariance = 0.0;
  const ComplexMatrix th = thermal_state(1.0, 0.4).matrix();
  for (int trial = 0; trial < 1000; ++trial) {
    ComplexMatrix g(2, 2);
    for (Eigen::Index k = 0; k < 4; ++k) g.data()[k] = Complex{normal(rng), normal(rng)};
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    ComplexMatrix u = ComplexMatrix::Zero(2, 2);
    u(0, 0) = std::polar(1.0, angle(rng));
    u(1, 1) = std::polar(1.0, angle(rng));
    const ComplexMatrix r2 = u * rho * u.adjoint();
    const ComplexMatrix t2 = u * th * u.adjoint();
    invariance = std::max({invariance, std::abs(relative_entropy(rho, th) - relative_entropy(r2, t2)),
                           std::abs(trace_distance(rho, th) - trace_distance(r2, t2)),
                           std::abs(coherence_rel_entropy(rho) - coherence_rel_entropy(r2)),
                           std::abs(coherence_l1(rho) - coherence_l1(r2))});
  }
  v.require(invariance <= 1e-12, "metrics under diagonal unitaries, max change " + fmt(invariance, 3));

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(seconds < 300.0, "suite finished in " + fmt(seconds, 3) + " s");
  v.summary = "numerical invariants";
  return v;
}

Verdict criterion9(int jobs) {
  Verdict v;
  SweepGrid grid;
  grid.g_values = {0.001, 0.00175, 0.0025, 0.00325, 0.004};
  grid.gamma_values = {0.00025, 0.0004375, 0.000625, 0.0008125, 0.001};
  const ClusterSpec base;
  const IntegratorConfig cfg;
  grid.geometry = extreme_geometry(4, Extreme::maximal);
  const SweepResult tetra = sweep(grid, base, cfg, jobs);
  grid.geometry = extreme_geometry(3, Extreme::maximal);
  const SweepResult triangle = sweep(grid, base, cfg, jobs);
  const SweepResult diff = difference_map(tetra, triangle);
  v.require(diff.errors.empty(), std::to_string(diff.errors.size()) + " failed cells");
  int positive = 0;
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < diff.values.size(); ++i) {
    std::ostringstream line;
    line << "g=" << fmt(grid.g_values[i]) << ":";
    for (std::size_t j = 0; j < diff.values[i].size(); ++j) {
      const double d = diff.values[i][j];
      positive += d > 0.0 ? 1 : 0;
      smallest = std::min(smallest, d);
      line << " " << fmt(d, 3);
    }
    v.note(line.str());
  }
  v.require(positive == 25, std::to_string(positive) + "/25 cells positive, smallest " + fmt(smallest, 3));
  v.summary = "K4 minus triangle window-mean map on the 5x5 grid";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  int jobs = 1;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--jobs" && i + 1 < argc) {
      jobs = std::atoi(argv[++i]);
    } else if (arg == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string item; std::getline(ss, item, ',');) only.insert(std::atoi(item.c_str()));
    } else {
      std::cerr << "usage: spinshield_acceptance [--jobs N] [--only 1,2,...]\n";
      return 2;
    }
  }

  Runs runs;
  runs.jobs = jobs;
  const std::vector<std::pair<int, std::function<Verdict()>>> criteria{
      {1, [&] { return criterion1(runs); }}, {2, [&] { return criterion2(runs); }},
      {3, [&] { return criterion3(runs); }}, {4, [&] { return criterion4(runs); }},
      {5, [&] { return criterion5(jobs); }}, {6, [&] { return criterion6(); }},
      {7, [&] { return criterion7(); }},     {8, [&] { return criterion8(); }},
      {9, [&] { return criterion9(jobs); }},
  };

  int failures = 0;
  std::vector<std::string> summary;
  for (const auto& [id, check] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.summary = std::string("error: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string line = std::string(v.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(id) + ": " +
                             v.summary + " [" + fmt(seconds, 3) + " s]";
    std::cout << line << "\n";
    for (const auto& d : v.details) std::cout << "    " << d << "\n";
    std::cout << std::flush;
    summary.push_back(line);
    failures += v.pass ? 0 : 1;
  }
  std::cout << "\nsummary\n";
  for (const auto& s : summary) std::cout << s << "\n";
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
