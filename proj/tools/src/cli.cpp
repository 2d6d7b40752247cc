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


#include "spinshield/cli.hpp"

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "spinshield/csv.hpp"
#include "spinshield/error.hpp"
#include "spinshield/version.hpp"

namespace spinshield::cli {

namespace {

using Json = nlohmann::ordered_json;

// Result files keyed by name; written only once every computation succeeded.
using FileSet = std::map<std::string, std::string>;

Json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

Json spec_json(const ClusterSpec& s, bool with_geometry) {
  Json j;
  j["n_buffer"] = s.n_buffer;
  if (with_geometry) j["geometry"] = to_edge_list(s.graph);
  j["omega"] = s.omega;
  j["g"] = s.g;
  j["pair_convention"] = to_string(s.pair_convention);
  j["initial_buffer"] = to_string(s.initial_buffer);
  j["bath_on_central"] = s.bath_on_central;
  j["noise"] = {{"channel", to_string(s.noise.channel)},
                {"temperature", s.noise.temperature},
                {"gamma", s.noise.gamma},
                {"gamma_d", s.noise.gamma_d}};
  return j;
}

Json integrator_json(const IntegratorConfig& c) {
  return {{"scheme", "rk4_fixed"},
          {"dt", c.dt},
          {"t_max", c.t_max},
          {"sample_every", c.sample_every},
          {"frame", to_string(c.frame)}};
}

Json summary_header(const RunConfig& c, bool with_geometry) {
  Json j;
  j["command"] = to_string(c.command);
  j["code_version"] = kVersion;
  j["seedless"] = true;
  j["spec"] = spec_json(c.spec, with_geometry);
  j["integrator"] = integrator_json(c.integrator);
  return j;
}

Json calibration_json(const CalibrationResult& r) {
  return {{"reference", kCalibrationTarget},
          {"tolerance", kCalibrationTolerance},
          {"time_unordered_once", number(r.time_once)},
          {"time_ordered_double", number(r.time_double)},
          {"chosen", r.chosen ? Json(to_string(*r.chosen)) : Json(nullptr)}};
}

std::string csv_text(const CsvTable& table) {
  std::ostringstream os;
  table.write(os);
  return os.str();
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

std::string fmt(double v) { return std::isfinite(v) ? format_double(v) : "NA"; }

std::string protection_text(const ProtectionTimeResult& r) {
  if (!r.detected) return "not detected";
  return fmt(r.time) + " (confirmed until " + fmt(r.confirmed_until) + ")";
}

bool calibrating(const RunConfig& c) {
  return c.calibrate || (!c.pair_convention && c.command == Command::reproduce_table);
}

// Applies a calibration when requested; returns the report for the summary.
std::optional<CalibrationResult> maybe_calibrate(const RunConfig& c, ClusterSpec& spec,
                                                 std::ostream& out) {
  if (!calibrating(c) || c.command == Command::reproduce_table) return std::nullopt;
  ClusterSpec base = spec;
  base.noise.channel = NoiseChannel::thermal;
  CalibrationResult r = calibrate_pair_convention(base, c.integrator, c.jobs);
  out << "calibration: once=" << fmt(r.time_once) << " double=" << fmt(r.time_double)
      << " chosen=" << (r.chosen ? to_string(*r.chosen) : "none") << "\n";
  if (!r.chosen) throw SimulationFault("pair-convention calibration failed");
  spec.pair_convention = *r.chosen;
  return r;
}

FileSet run_enumerate(const RunConfig& c, std::ostream& out) {
  const int n = c.spec.n_buffer;
  const auto graphs = enumerate_buffer_graphs(n, c.planar, c.up_to_isomorphism);
  CsvTable table;
  table.header = {"index", "k", "canonical_code", "edges"};
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto& g = graphs[i];
    table.rows.push_back({std::to_string(i), std::to_string(g.edge_count()),
                          std::to_string(canonical_code(g)), to_edge_list(g)});
    out << i << " k=" << g.edge_count() << " " << to_edge_list(g) << "\n";
  }
  const BigCount count = geometry_count(n);
  Json j;
  j["command"] = to_string(c.command);
  j["code_version"] = kVersion;
  j["n_buffer"] = n;
  j["planar_filter"] = c.planar;
  j["up_to_isomorphism"] = c.up_to_isomorphism;
  j["enumerated"] = graphs.size();
  j["geometry_count"] = count.str();
  if (c.planar && !c.up_to_isomorphism) {
    j["shortfall"] = (count - BigCount(graphs.size())).str();
  }
  out << "enumerated " << graphs.size() << " graphs for N=" << n
      << " (closed-form count " << count.str() << ")\n";
  return {{"graphs.csv", csv_text(table)}, {"summary.json", json_text(j)}};
}

FileSet run_simulate(const RunConfig& c, std::ostream& out) {
  ClusterSpec spec = c.spec;
  const auto calibration = maybe_calibrate(c, spec, out);
  const EvolutionResult r = evolve(spec, c.integrator, c.observables);
  std::ostringstream series;
  r.series.write_csv(series);
  RunConfig shown = c;
  shown.spec = spec;
  Json j = summary_header(shown, true);
  if (calibration) j["calibration"] = calibration_json(*calibration);
  j["results"] = {{"samples", r.series.size()},
                  {"final_time", r.final_time},
                  {"max_trace_drift", r.max_trace_drift},
                  {"max_hermiticity_drift", r.max_hermiticity_drift}};
  out << "simulate N+1=" << spec.total_spins() << " samples=" << r.series.size()
      << " t_final=" << fmt(r.final_time) << " max_trace_drift=" << fmt(r.max_trace_drift);
  for (const auto& name : r.series.names()) out << " " << name << "=" << fmt(r.series.column(name).back());
  out << "\n";
  return {{"timeseries.csv", series.str()}, {"summary.json", json_text(j)}};
}

FileSet run_protection_time(const RunConfig& c, std::ostream& out) {
  ClusterSpec spec = c.spec;
  const auto calibration = maybe_calibrate(c, spec, out);
  const ProtectionTimeResult r = protection_time(spec, c.integrator, c.metric, c.threshold);
  CsvTable table;
  table.header = {"n_total", "geometry", "metric", "threshold", "protection_time", "confirmed_until"};
  table.rows.push_back({std::to_string(spec.total_spins()), to_edge_list(spec.graph), r.metric.id(),
                        format_double(r.threshold), fmt(r.time), fmt(r.confirmed_until)});
  RunConfig shown = c;
  shown.spec = spec;
  Json j = summary_header(shown, true);
  if (calibration) j["calibration"] = calibration_json(*calibration);
  j["results"] = {{"metric", r.metric.id()},
                  {"threshold", r.threshold},
                  {"confirmation_window", confirmation_window(spec.g)},
                  {"detected", r.detected},
                  {"protection_time", number(r.time)},
                  {"confirmed_until", number(r.confirmed_until)}};
  out << "N+1=" << spec.total_spins() << " " << r.metric.id() << " protection_time "
      << protection_text(r) << "\n";
  return {{"protection_time.csv", csv_text(table)}, {"summary.json", json_text(j)}};
}

void print_compare_rows(const CompareTable& table, std::ostream& out) {
  for (const auto& row : table.rows) {
    for (const auto& [name, m] : {std::pair{"empty", &row.empty}, std::pair{"maximal", &row.maximal}}) {
      out << "N+1=" << row.n_total() << " " << name << ":";
      for (std::size_t k = 0; k < table.metrics.size(); ++k) {
        out << " " << table.metrics[k].id() << "=";
        if (k < m->protection.size()) {
          const auto& p = m->protection[k];
          out << (p.detected ? fmt(p.time) : "NA");
        }
        if (k < m->window.size()) out << "/mean=" << fmt(m->window[k].mean);
      }
      out << "\n";
    }
  }
}

Json argmax_json(const CompareTable& table) {
  Json j = Json::object();
  for (std::size_t k = 0; k < table.metrics.size(); ++k) {
    const auto best = table.argmax_maximal(k);
    j[table.metrics[k].id()] = best ? Json(*best) : Json(nullptr);
  }
  return j;
}

FileSet run_compare(const RunConfig& c, std::ostream& out) {
  ClusterSpec spec = c.spec;
  const auto calibration = maybe_calibrate(c, spec, out);
  CompareRequest request;
  request.base = spec;
  request.integrator = c.integrator;
  request.n_buffers = c.n_buffers;
  request.plan.threshold = c.threshold;
  request.plan.t1 = c.t1;
  request.plan.t2 = c.t2;
  request.jobs = c.jobs;
  const CompareTable table = compare_extremes(request);
  print_compare_rows(table, out);
  RunConfig shown = c;
  shown.spec = spec;
  Json j = summary_header(shown, false);
  if (calibration) j["calibration"] = calibration_json(*calibration);
  j["results"] = {{"argmax_maximal_n_total", argmax_json(table)}};
  return {{"protection_times.csv", csv_text(protection_table(table, c.threshold))},
          {"window_means.csv", csv_text(window_table(table))},
          {"summary.json", json_text(j)}};
}

FileSet run_sweep(const RunConfig& c, std::ostream& out) {
  ClusterSpec spec = c.spec;
  const auto calibration = maybe_calibrate(c, spec, out);
  SweepGrid grid{c.sweep_g, c.sweep_gamma, spec.graph, SweepStatistic::window_mean_l1, c.t1, c.t2};
  const SweepResult main = sweep(grid, spec, c.integrator, c.jobs);
  FileSet files;
  std::ostringstream os;
  main.write_csv(os);
  files["sweep.csv"] = os.str();
  RunConfig shown = c;
  shown.spec = spec;
  Json j = summary_header(shown, true);
  if (calibration) j["calibration"] = calibration_json(*calibration);
  j["grid"] = {{"g", c.sweep_g}, {"gamma", c.sweep_gamma}, {"t1", c.t1}, {"t2", c.t2},
               {"statistic", "window_mean_l1"}};
  const SweepResult* shown_map = &main;
  SweepResult diff;
  if (c.subtract_geometry) {
    grid.geometry = *c.subtract_geometry;
    const SweepResult other = sweep(grid, spec, c.integrator, c.jobs);
    diff = difference_map(main, other);
    std::ostringstream a, b;
    other.write_csv(a);
    diff.write_csv(b);
    files["sweep_subtracted.csv"] = a.str();
    files["sweep_difference.csv"] = b.str();
    j["subtract_geometry"] = to_edge_list(*c.subtract_geometry);
    shown_map = &diff;
  }
  std::size_t positive = 0;
  for (std::size_t i = 0; i < shown_map->g_values.size(); ++i) {
    for (std::size_t k = 0; k < shown_map->gamma_values.size(); ++k) {
      const double v = shown_map->values[i][k];
      if (v > 0.0) ++positive;
      out << "g=" << format_double(shown_map->g_values[i])
          << " gamma=" << format_double(shown_map->gamma_values[k])
          << (c.subtract_geometry ? " difference=" : " mean_coh_l1=") << fmt(v) << "\n";
    }
  }
  j["results"] = {{"cells", c.sweep_g.size() * c.sweep_gamma.size()},
                  {"positive_cells", positive},
                  {"errors", shown_map->errors}};
  files["summary.json"] = json_text(j);
  return files;
}

FileSet run_heat(const RunConfig& c, std::ostream& out) {
  ClusterSpec spec = c.spec;
  const auto calibration = maybe_calibrate(c, spec, out);
  const HeatComparison h = heat_comparison(spec.n_buffer, spec, c.integrator, c.jobs);
  FileSet files;
  Json results;
  results["erasure_cost"] = h.erasure_cost;
  results["tolerance"] = h.tolerance;
  for (const auto& [name, curve] : {std::pair{"empty", &h.empty}, std::pair{"maximal", &h.maximal}}) {
    std::ostringstream os;
    curve->series.write_csv(os);
    files[std::string("heat_") + name + ".csv"] = os.str();
    results[name] = {{"geometry", to_edge_list(curve->geometry)},
                     {"final_heat", curve->final_heat},
                     {"converged", curve->converged},
                     {"half_time", number(curve->half_time)}};
    out << "N+1=" << h.n_buffer + 1 << " " << name << ": Q(t_max)=" << fmt(curve->final_heat)
        << " E_c=" << fmt(h.erasure_cost) << " converged=" << (curve->converged ? "yes" : "no")
        << " t(E_c/2)=" << fmt(curve->half_time) << "\n";
  }
  results["delayed"] = h.delayed();
  RunConfig shown = c;
  shown.spec = spec;
  Json j = summary_header(shown, false);
  if (calibration) j["calibration"] = calibration_json(*calibration);
  j["results"] = results;
  files["summary.json"] = json_text(j);
  return files;
}

FileSet run_reproduce_table(const RunConfig& c, std::ostream& out) {
  TableOptions options;
  options.id = c.table;
  options.base = c.spec;
  options.integrator = c.integrator;
  if (!calibrating(c)) options.pair_convention = c.spec.pair_convention;
  options.threshold = c.threshold;
  options.t1 = c.t1;
  options.t2 = c.t2;
  options.jobs = c.jobs;
  const TableReport report = reproduce_table(options);
  if (report.calibration) {
    out << "calibration: once=" << fmt(report.calibration->time_once)
        << " double=" << fmt(report.calibration->time_double)
        << " chosen=" << to_string(report.convention) << "\n";
  }
  const CsvTable wide = wide_table(report);
  for (const auto& row : wide.rows) {
    out << "N+1=" << row[0] << ":";
    for (std::size_t k = 1; k < row.size(); ++k) out << " " << wide.header[k] << "=" << row[k];
    out << "\n";
  }
  RunConfig shown = c;
  shown.spec = report.base;
  Json j = summary_header(shown, false);
  j["table"] = to_string(report.id);
  j["pair_convention"] = to_string(report.convention);
  if (report.calibration) j["calibration"] = calibration_json(*report.calibration);
  j["threshold"] = report.threshold;
  j["window"] = {{"t1", c.t1}, {"t2", c.t2}};
  j["results"] = {{"argmax_maximal_n_total", argmax_json(report.table)}};
  const std::string id = to_string(report.id);
  return {{"table_" + id + ".csv", csv_text(wide)},
          {"table_" + id + "_protection_times.csv", csv_text(protection_table(report.table, report.threshold))},
          {"table_" + id + "_window_means.csv", csv_text(window_table(report.table))},
          {"table_" + id + "_summary.json", json_text(j)}};
}

std::string error_record(const std::string& kind, int code, const std::string& message) {
  Json j;
  j["error"] = {{"kind", kind}, {"exit_code", code}, {"message", message}};
  return j.dump();
}

}  // namespace

void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename '" + tmp + "': " + ec.message());
  }
}

long long estimated_steps(const RunConfig& c) {
  const long long per_run = c.integrator.total_steps();
  const long long calibration = calibrating(c) ? 2 * per_run : 0;
  switch (c.command) {
    case Command::enumerate: return 0;
    case Command::simulate:
    case Command::protection_time: return calibration + per_run;
    case Command::compare:
      return calibration + 2 * static_cast<long long>(c.n_buffers.size()) * per_run;
    case Command::sweep: {
      IntegratorConfig cell = c.integrator;
      cell.t_max = c.t2;
      const long long cells = static_cast<long long>(c.sweep_g.size() * c.sweep_gamma.size());
      return calibration + cells * cell.total_steps() * (c.subtract_geometry ? 2 : 1);
    }
    case Command::heat: return calibration + 2 * per_run;
    case Command::reproduce_table:
      return calibration + 2 * static_cast<long long>(kTableClusterSizes.size()) * per_run;
  }
  return 0;
}

int execute(const RunConfig& c, std::ostream& out) {
  if (c.dry_run) {
    out << "dry-run: " << to_string(c.command) << " configuration is valid; estimated steps "
        << estimated_steps(c) << "\n";
    return kExitOk;
  }
  FileSet files;
  switch (c.command) {
    case Command::enumerate: files = run_enumerate(c, out); break;
    case Command::simulate: files = run_simulate(c, out); break;
    case Command::protection_time: files = run_protection_time(c, out); break;
    case Command::compare: files = run_compare(c, out); break;
    case Command::sweep: files = run_sweep(c, out); break;
    case Command::heat: files = run_heat(c, out); break;
    case Command::reproduce_table: files = run_reproduce_table(c, out); break;
  }
  std::filesystem::create_directories(c.output_dir);
  for (const auto& [name, content] : files) {
    const std::string path = (std::filesystem::path(c.output_dir) / name).string();
    write_atomically(path, content);
    out << "wrote " << path << "\n";
  }
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    ParsedArgs parsed = parse_arguments(argc, argv);
    if (parsed.help_text) {
      out << *parsed.help_text;
      return kExitOk;
    }
    parsed.config.finalize();
    return execute(parsed.config, out);
  } catch (const ParseError& e) {
    err << error_record("parse", kExitParse, e.what()) << "\n";
    return kExitParse;
  } catch (const ValidationError& e) {
    err << error_record("validation", kExitValidation, e.what()) << "\n";
    return kExitValidation;
  } catch (const SimulationFault& e) {
    err << error_record("simulation", kExitSimulation, e.what()) << "\n";
    return kExitSimulation;
  } catch (const std::invalid_argument& e) {
    err << error_record("validation", kExitValidation, e.what()) << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << error_record("io", kExitIo, e.what()) << "\n";
    return kExitIo;
  }
}

}  // namespace spinshield::cli
