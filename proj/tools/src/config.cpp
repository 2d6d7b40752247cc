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


#include <yaml-cpp/yaml.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "spinshield/cli.hpp"
#include "spinshield/error.hpp"

namespace spinshield::cli {

namespace {

std::string where(const YAML::Node& node, const std::string& key) {
  std::ostringstream os;
  os << "'" << key << "'";
  if (!node.Mark().is_null()) os << " (line " << node.Mark().line + 1 << ")";
  return os.str();
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw ParseError("expected a scalar for " + where(node, key));
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ParseError("malformed value for " + where(node, key));
  }
}

template <typename T>
std::vector<T> sequence(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw ParseError("expected a list for " + where(node, key));
  std::vector<T> out;
  for (const auto& item : node) out.push_back(scalar<T>(item, key));
  return out;
}

// Iterates a mapping, rejecting keys without a handler.
template <typename Handler>
void for_each_key(const YAML::Node& node, const std::string& section, Handler&& handle) {
  if (!node.IsMap()) throw ParseError("expected a mapping for '" + section + "'");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    const std::string path = section.empty() ? key : section + "." + key;
    if (!handle(key, kv.second, path)) throw ParseError("unknown key '" + path + "'");
  }
}

void apply_pair_convention(const std::string& text, RunConfig& config) {
  if (text == "calibrate") {
    config.calibrate = true;
    config.pair_convention.reset();
    return;
  }
  config.calibrate = false;
  config.pair_convention = parse_pair_convention(text);
}

std::vector<MetricName> parse_metrics(const std::vector<std::string>& ids) {
  std::vector<MetricName> out;
  for (const auto& id : ids) out.push_back(MetricName::parse(id));
  return out;
}

void apply_cluster(const YAML::Node& node, RunConfig& c) {
  for_each_key(node, "cluster", [&](const std::string& key, const YAML::Node& v, const std::string& p) {
    if (key == "n_buffer") c.spec.n_buffer = scalar<int>(v, p);
    else if (key == "geometry") c.geometry = scalar<std::string>(v, p);
    else if (key == "omega") c.spec.omega = scalar<double>(v, p);
    else if (key == "g") c.spec.g = scalar<double>(v, p);
    else if (key == "pair_convention") apply_pair_convention(scalar<std::string>(v, p), c);
    else if (key == "initial_buffer") c.spec.initial_buffer = parse_initial_buffer(scalar<std::string>(v, p));
    else if (key == "bath_on_central") c.spec.bath_on_central = scalar<bool>(v, p);
    else return false;
    return true;
  });
}

void apply_noise(const YAML::Node& node, RunConfig& c) {
  for_each_key(node, "noise", [&](const std::string& key, const YAML::Node& v, const std::string& p) {
    if (key == "channel") c.spec.noise.channel = parse_noise_channel(scalar<std::string>(v, p));
    else if (key == "temperature") c.spec.noise.temperature = scalar<double>(v, p);
    else if (key == "gamma") c.spec.noise.gamma = scalar<double>(v, p);
    else if (key == "gamma_d") c.spec.noise.gamma_d = scalar<double>(v, p);
    else return false;
    return true;
  });
}

void apply_integrator(const YAML::Node& node, RunConfig& c) {
  for_each_key(node, "integrator", [&](const std::string& key, const YAML::Node& v, const std::string& p) {
    if (key == "dt") c.integrator.dt = scalar<double>(v, p);
    else if (key == "t_max") c.integrator.t_max = scalar<double>(v, p);
    else if (key == "sample_every") c.integrator.sample_every = scalar<double>(v, p);
    else if (key == "frame") c.integrator.frame = parse_frame(scalar<std::string>(v, p));
    else if (key == "scheme") {
      if (scalar<std::string>(v, p) != "rk4_fixed") throw ParseError("unknown scheme for '" + p + "'");
    } else if (key == "check_positivity") c.integrator.check_positivity = scalar<bool>(v, p);
    else return false;
    return true;
  });
}

void apply_experiment(const YAML::Node& node, RunConfig& c) {
  for_each_key(node, "experiment", [&](const std::string& key, const YAML::Node& v, const std::string& p) {
    if (key == "metric") c.metric = MetricName::parse(scalar<std::string>(v, p));
    else if (key == "observables") c.observables = parse_metrics(sequence<std::string>(v, p));
    else if (key == "threshold") c.threshold = scalar<double>(v, p);
    else if (key == "t1") c.t1 = scalar<double>(v, p);
    else if (key == "t2") c.t2 = scalar<double>(v, p);
    else if (key == "n_values") c.n_buffers = sequence<int>(v, p);
    else if (key == "planar") c.planar = scalar<bool>(v, p);
    else if (key == "up_to_isomorphism") c.up_to_isomorphism = scalar<bool>(v, p);
    else if (key == "table") c.table = parse_table_id(scalar<std::string>(v, p));
    else if (key == "sweep_g") c.sweep_g = sequence<double>(v, p);
    else if (key == "sweep_gamma") c.sweep_gamma = sequence<double>(v, p);
    else if (key == "subtract_geometry") c.subtract_geometry = parse_edge_list(scalar<std::string>(v, p));
    else return false;
    return true;
  });
}

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ParseError("malformed number '" + item + "' in " + flag);
    }
  }
  return out;
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::enumerate: return "enumerate";
    case Command::simulate: return "simulate";
    case Command::protection_time: return "protection-time";
    case Command::compare: return "compare";
    case Command::sweep: return "sweep";
    case Command::heat: return "heat";
    case Command::reproduce_table: return "reproduce-table";
  }
  return "?";
}

Command parse_command(std::string_view s) {
  for (Command c : {Command::enumerate, Command::simulate, Command::protection_time,
                    Command::compare, Command::sweep, Command::heat, Command::reproduce_table}) {
    if (s == to_string(c)) return c;
  }
  throw ParseError("unknown command '" + std::string(s) + "'");
}

void apply_config_text(const std::string& text, RunConfig& config) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("config is not valid YAML/JSON: ") + e.what());
  }
  if (root.IsNull()) return;
  for_each_key(root, "", [&](const std::string& key, const YAML::Node& v, const std::string& p) {
    if (key == "command") config.command = parse_command(scalar<std::string>(v, p));
    else if (key == "output_dir") config.output_dir = scalar<std::string>(v, p);
    else if (key == "jobs") config.jobs = scalar<int>(v, p);
    else if (key == "cluster") apply_cluster(v, config);
    else if (key == "noise") apply_noise(v, config);
    else if (key == "integrator") apply_integrator(v, config);
    else if (key == "experiment") apply_experiment(v, config);
    else return false;
    return true;
  });
}

void apply_config_file(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(buffer.str(), config);
}

void RunConfig::finalize() {
  if (geometry == "empty" || geometry == "maximal") {
    const Extreme which = parse_extreme(geometry);
    if (which == Extreme::empty) {
      if (spec.n_buffer < 0 || spec.n_buffer > 11) throw ValidationError("n out of range");
      spec.graph = BufferGraph(spec.n_buffer);
    } else {
      spec.graph = extreme_geometry(spec.n_buffer, which);
    }
  } else {
    BufferGraph g = parse_edge_list(geometry);
    spec.n_buffer = g.n_buffer();
    spec.graph = std::move(g);
  }
  if (pair_convention) spec.pair_convention = *pair_convention;
  if (jobs < 0) throw ValidationError("jobs must be >= 0");
  if (output_dir.empty()) throw ValidationError("output directory must not be empty");
  if (!(threshold > 0.0)) throw ValidationError("threshold must be > 0");
  if (!(t1 < t2)) throw ValidationError("window requires t1 < t2");

  switch (command) {
    case Command::enumerate:
      if (spec.n_buffer < 1 || spec.n_buffer > kMaxEnumerationBuffer) {
        throw ValidationError("enumerate supports n in 1.." + std::to_string(kMaxEnumerationBuffer));
      }
      return;
    case Command::simulate:
      if (observables.empty()) throw ValidationError("no observables requested");
      for (const auto& m : observables) m.validate(spec.total_spins());
      break;
    case Command::protection_time:
      metric.validate(spec.total_spins());
      if (!metric.is_state_metric()) throw ValidationError("protection time needs a state metric");
      break;
    case Command::compare:
      if (n_buffers.empty()) throw ValidationError("no cluster sizes to compare");
      for (int n : n_buffers) {
        if (n < 2 || n > kMaxEnumerationBuffer) throw ValidationError("compare supports n in 2..6");
      }
      if (t2 > integrator.t_max) throw ValidationError("window end exceeds t_max");
      break;
    case Command::sweep: {
      SweepGrid grid{sweep_g, sweep_gamma, spec.graph, SweepStatistic::window_mean_l1, t1, t2};
      grid.validate();
      break;
    }
    case Command::heat:
      if (spec.n_buffer < 2 || spec.n_buffer > 5) throw ValidationError("heat supports n in 2..5");
      if (spec.noise.channel != NoiseChannel::thermal) {
        throw ValidationError("heat needs the thermal channel");
      }
      break;
    case Command::reproduce_table:
      if (t2 > integrator.t_max) throw ValidationError("window end exceeds t_max");
      break;
  }
  ClusterSpec checked = spec;
  if (command == Command::compare || command == Command::reproduce_table) {
    checked.n_buffer = 2;
    checked.graph = BufferGraph(2);
  }
  checked.validate();
  integrator.validate(checked);
  if (command == Command::sweep) {
    for (double g : sweep_g) {
      checked.g = g;
      integrator.validate(checked);
    }
    if (subtract_geometry) {
      ClusterSpec other = spec;
      other.n_buffer = subtract_geometry->n_buffer();
      other.graph = *subtract_geometry;
      other.validate();
    }
  }
}

ParsedArgs parse_arguments(int argc, const char* const* argv) {
  CLI::App app{"Buffer-network coherence protection simulator", "spinshield"};
  app.set_help_flag("-h,--help", "Print this help message and exit");

  std::string command_text;
  std::string table_text;
  std::string config_path;
  app.add_option("command", command_text,
                 "enumerate | simulate | protection-time | compare | sweep | heat | reproduce-table");
  app.add_option("table", table_text, "Table id for reproduce-table: I, II, III or IV");
  app.add_option("--config", config_path, "YAML or JSON configuration file");

  int n = 0;
  std::string geometry, channel, frame, initial_buffer, pair_convention, output_dir;
  double g = 0, gamma = 0, gamma_d = 0, temp = 0, threshold = 0, t_max = 0, dt = 0, omega = 0;
  double sample_every = 0, t1 = 0, t2 = 0;
  int jobs = 0;
  std::string metric, observables, n_values, sweep_g, sweep_gamma, subtract;
  bool dry_run = false, planar = false, all_subsets = false, iso = false;

  auto* o_n = app.add_option("--n", n, "Number of buffer spins N");
  auto* o_geometry = app.add_option("--geometry", geometry, "empty | maximal | 'N=<n>; edges=(i,j),...'");
  auto* o_channel = app.add_option("--channel", channel, "thermal | dephasing");
  auto* o_g = app.add_option("--g", g, "Coupling strength");
  auto* o_gamma = app.add_option("--gamma", gamma, "Thermal dissipation rate");
  auto* o_gamma_d = app.add_option("--gamma-d", gamma_d, "Dephasing rate");
  auto* o_temp = app.add_option("--temp", temp, "Bath temperature");
  auto* o_omega = app.add_option("--omega", omega, "Spin frequency");
  auto* o_threshold = app.add_option("--threshold", threshold, "Protection-time threshold");
  auto* o_t_max = app.add_option("--t-max", t_max, "Integration horizon");
  auto* o_dt = app.add_option("--dt", dt, "Time step");
  auto* o_sample = app.add_option("--sample-every", sample_every, "Sampling interval");
  auto* o_frame = app.add_option("--frame", frame, "lab | rotating");
  auto* o_initial = app.add_option("--initial-buffer", initial_buffer, "thermal | max-coherent");
  auto* o_pair = app.add_option("--pair-convention", pair_convention, "once | double | calibrate");
  auto* o_jobs = app.add_option("--jobs", jobs, "Maximum parallel trajectories (0 = all cores)");
  auto* o_out = app.add_option("--output-dir", output_dir, "Result directory")->envname("SPINSHIELD_OUTPUT_DIR");
  auto* o_metric = app.add_option("--metric", metric, "Metric for protection-time");
  auto* o_obs = app.add_option("--observables", observables, "Comma-separated metric ids for simulate");
  auto* o_t1 = app.add_option("--t1", t1, "Averaging window start");
  auto* o_t2 = app.add_option("--t2", t2, "Averaging window end");
  auto* o_nvals = app.add_option("--n-values", n_values, "Comma-separated N values for compare");
  auto* o_sg = app.add_option("--sweep-g", sweep_g, "Comma-separated g values");
  auto* o_sgam = app.add_option("--sweep-gamma", sweep_gamma, "Comma-separated gamma values");
  auto* o_sub = app.add_option("--subtract-geometry", subtract, "Second geometry for a sweep difference map");
  app.add_flag("--dry-run", dry_run, "Validate and report the estimated step count");
  auto* o_planar = app.add_flag("--planar", planar, "Keep only planar graphs (default)");
  auto* o_all = app.add_flag("--all-subsets", all_subsets, "Skip the planarity filter");
  auto* o_iso = app.add_flag("--up-to-isomorphism", iso, "One representative per isomorphism class");

  ParsedArgs parsed;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    parsed.help_text = app.help();
    return parsed;
  } catch (const CLI::ParseError& e) {
    throw ParseError(e.what());
  }

  RunConfig& c = parsed.config;
  if (!config_path.empty()) apply_config_file(config_path, c);
  if (!command_text.empty()) c.command = parse_command(command_text);
  else if (config_path.empty()) throw ParseError("no command given");
  if (!table_text.empty()) {
    if (c.command != Command::reproduce_table) throw ParseError("unexpected argument '" + table_text + "'");
    c.table = parse_table_id(table_text);
  }

  if (o_n->count()) c.spec.n_buffer = n;
  if (o_geometry->count()) c.geometry = geometry;
  else if (o_n->count() && c.geometry != "empty" && c.geometry != "maximal") c.geometry = "empty";
  if (o_channel->count()) c.spec.noise.channel = parse_noise_channel(channel);
  if (o_g->count()) c.spec.g = g;
  if (o_gamma->count()) c.spec.noise.gamma = gamma;
  if (o_gamma_d->count()) c.spec.noise.gamma_d = gamma_d;
  if (o_temp->count()) c.spec.noise.temperature = temp;
  if (o_omega->count()) c.spec.omega = omega;
  if (o_threshold->count()) c.threshold = threshold;
  if (o_t_max->count()) c.integrator.t_max = t_max;
  if (o_dt->count()) c.integrator.dt = dt;
  if (o_sample->count()) c.integrator.sample_every = sample_every;
  if (o_frame->count()) c.integrator.frame = parse_frame(frame);
  if (o_initial->count()) c.spec.initial_buffer = parse_initial_buffer(initial_buffer);
  if (o_pair->count()) apply_pair_convention(pair_convention, c);
  if (o_jobs->count()) c.jobs = jobs;
  if (o_out->count()) c.output_dir = output_dir;
  if (o_metric->count()) c.metric = MetricName::parse(metric);
  if (o_obs->count()) {
    std::vector<std::string> ids;
    std::stringstream ss(observables);
    for (std::string id; std::getline(ss, id, ',');) ids.push_back(id);
    c.observables = parse_metrics(ids);
  }
  if (o_t1->count()) c.t1 = t1;
  if (o_t2->count()) c.t2 = t2;
  if (o_nvals->count()) {
    c.n_buffers.clear();
    for (double v : parse_number_list(n_values, "--n-values")) {
      if (v != std::floor(v)) throw ParseError("--n-values needs integers");
      c.n_buffers.push_back(static_cast<int>(v));
    }
  }
  if (o_sg->count()) c.sweep_g = parse_number_list(sweep_g, "--sweep-g");
  if (o_sgam->count()) c.sweep_gamma = parse_number_list(sweep_gamma, "--sweep-gamma");
  if (o_sub->count()) c.subtract_geometry = parse_edge_list(subtract);
  if (o_planar->count() && o_all->count()) throw ParseError("--planar and --all-subsets conflict");
  if (o_planar->count()) c.planar = true;
  if (o_all->count()) c.planar = false;
  if (o_iso->count()) c.up_to_isomorphism = iso;
  c.dry_run = dry_run;
  return parsed;
}

}  // namespace spinshield::cli
