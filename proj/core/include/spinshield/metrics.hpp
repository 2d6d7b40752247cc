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

// Information-theoretic and thermodynamic observables. Entropies use base-2
// logarithms.

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "spinshield/model.hpp"
#include "spinshield/qstate.hpp"
#include "spinshield/time_series.hpp"

namespace spinshield {

enum class MetricKind {
  rel_entropy_vs_thermal,
  trace_distance_vs_thermal,
  coh_rel_entropy,
  coh_l1,
  heat_current,
  heat_integrated,
  sigma_z_expect,
  purity,
};

// A registry entry: an observable plus the spin subset it is evaluated on.
// The column id is the bare kind name for the central spin and
// `<kind>@<s1>-<s2>...` for any other subset.
struct MetricName {
  MetricKind kind = MetricKind::coh_l1;
  std::vector<int> sites{1};

  std::string id() const;
  static MetricName parse(std::string_view id);
  static MetricName central(MetricKind kind) { return {kind, {1}}; }

  bool is_state_metric() const;
  void validate(int total_spins) const;

  friend bool operator==(const MetricName&, const MetricName&) = default;
};

std::string to_string(MetricKind k);
MetricKind parse_metric_kind(std::string_view s);
const std::vector<MetricKind>& all_metric_kinds();

// The four measures reported for the central spin in the result tables,
// in table column order.
const std::vector<MetricName>& table_metrics();

inline constexpr double kClipTolerance = 1e-10;

// Eigenvalues in [-kClipTolerance, 0) are treated as 0; anything more
// negative raises SimulationFault.
double von_neumann_entropy(const ComplexMatrix& rho);

// tr[rho log2 rho] - tr[rho log2 sigma]. Returns +infinity when the support
// of rho is not contained in that of sigma.
double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma);
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return relative_entropy(rho.matrix(), sigma.matrix());
}

// Half the sum of absolute eigenvalues of rho - sigma.
double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);

double coherence_l1(const ComplexMatrix& rho);

// S(rho_d) - S(rho), the relative entropy to the dephased state.
double coherence_rel_entropy(const ComplexMatrix& rho);

double purity(const ComplexMatrix& rho);

// tr(H_s d(rho_s)/dt) with H_s = (omega/2) sigma_z on the central spin,
// using the generator's exact right-hand side.
double heat_current(const ClusterSpec& spec, const ComplexMatrix& rho_full,
                    const LindbladGenerator& generator);

// Same quantity from an already evaluated right-hand side.
double heat_current_from_derivative(double omega, const ComplexMatrix& drho_full);

// Trapezoidal Q(t) = int_0^t J; requires a `heat_current` column. Returns a
// series with a single `heat_integrated` column and Q(t_0) = 0.
TimeSeries integrate_heat(const TimeSeries& series);

// tr(H_s (rho_fin - rho_int)) on 2x2 central-spin states.
double erasure_cost(const ClusterSpec& spec, const ComplexMatrix& rho_initial,
                    const ComplexMatrix& rho_final);

// Evaluates a state metric (everything except the heat observables) on the
// full register state.
double evaluate_state_metric(const MetricName& metric, const ComplexMatrix& rho_full,
                             int total_spins, const ClusterSpec& spec);

}  // namespace spinshield
