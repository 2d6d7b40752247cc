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
#include <optional>
#include <string>
#include <vector>

#include "spinshield/dynamics.hpp"
#include "spinshield/experiments.hpp"
#include "spinshield/model.hpp"
#include "spinshield/tables.hpp"

namespace spinshield::cli {

enum class Command { enumerate, simulate, protection_time, compare, sweep, heat, reproduce_table };

std::string to_string(Command c);
Command parse_command(std::string_view s);

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitSimulation = 4;

struct RunConfig {
  Command command = Command::simulate;
  ClusterSpec spec;
  // `empty`, `maximal` or an edge list; resolved into spec.graph by finalize().
  std::string geometry = "empty";
  IntegratorConfig integrator;
  // Unset together with `calibrate` false means the default convention.
  std::optional<PairConvention> pair_convention;
  bool calibrate = false;
  std::string output_dir = "results";
  int jobs = 1;
  bool dry_run = false;

  // enumerate
  bool planar = true;
  bool up_to_isomorphism = false;
  // simulate
  std::vector<MetricName> observables = table_metrics();
  // protection-time
  MetricName metric = MetricName::central(MetricKind::coh_l1);
  double threshold = kDefaultThreshold;
  // window means (compare, sweep, reproduce-table)
  double t1 = kDefaultWindowStart;
  double t2 = kDefaultWindowEnd;
  // compare
  std::vector<int> n_buffers{2, 3, 4, 5, 6};
  // sweep
  std::vector<double> sweep_g{0.001, 0.00175, 0.0025, 0.00325, 0.004};
  std::vector<double> sweep_gamma{0.00025, 0.0004375, 0.000625, 0.0008125, 0.001};
  std::optional<BufferGraph> subtract_geometry;
  // reproduce-table
  TableId table = TableId::I;

  // Resolves the geometry and checks every field. Throws ParseError for a
  // malformed geometry and ValidationError otherwise.
  void finalize();
};

// Reads a YAML or JSON document into `config`, overriding only the keys
// present. Unknown keys and malformed values raise ParseError.
void apply_config_text(const std::string& text, RunConfig& config);
void apply_config_file(const std::string& path, RunConfig& config);

// Parses argv (including the program name) into a configuration: defaults,
// then the file given by --config, then the remaining flags. Throws
// ParseError; --help sets `help_text` instead.
struct ParsedArgs {
  RunConfig config;
  std::optional<std::string> help_text;
};
ParsedArgs parse_arguments(int argc, const char* const* argv);

// Upper bound on the number of integration steps a run would take.
long long estimated_steps(const RunConfig& config);

// Executes a validated configuration, printing one line per result row to
// `out` and writing result files atomically. Returns the exit status.
int execute(const RunConfig& config, std::ostream& out);

// Full entry point: parse, validate, execute; errors are reported on `err`
// as a single-line JSON record and mapped to the exit codes above.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Writes `content` to `path` through a temporary file and a rename.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace spinshield::cli
