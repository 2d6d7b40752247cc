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

// Deterministic fixed-step integration of the master equation with
// observables recorded on a regular sampling grid.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "spinshield/metrics.hpp"
#include "spinshield/model.hpp"
#include "spinshield/time_series.hpp"

namespace spinshield {

enum class Scheme { rk4_fixed };

struct IntegratorConfig {
  double dt = 1.0;
  double t_max = 100000.0;
  double sample_every = 10.0;
  Frame frame = Frame::rotating;
  Scheme scheme = Scheme::rk4_fixed;
  // Full-register eigenvalue check at every sample (O(dim^3); off by default).
  bool check_positivity = false;

  // Throws ValidationError. Requires 0 < dt <= sample_every <= t_max,
  // sample_every an integer multiple of dt, and dt <= 0.05/omega in the lab
  // frame or dt <= 0.05/g in the rotating frame.
  void validate(const ClusterSpec& spec) const;

  std::int64_t steps_per_sample() const;
  std::int64_t sample_count() const;  // samples after t = 0
  std::int64_t total_steps() const { return steps_per_sample() * sample_count(); }
};

struct DriftLimits {
  double trace = 1e-8;
  double hermiticity = 1e-9;
  double positivity = -1e-7;
};

struct EvolutionResult {
  TimeSeries series;
  ComplexMatrix final_state;  // lab frame
  double final_time = 0.0;
  bool stopped_early = false;
  double max_trace_drift = 0.0;
  double max_hermiticity_drift = 0.0;
  double min_eigenvalue = 0.0;  // only tracked when check_positivity is set
};

// Called after every recorded sample with the series so far and the current
// state (in the integration frame). Returning false ends the run.
using SampleObserver = std::function<bool(const TimeSeries& series, const ComplexMatrix& rho)>;

// Integrates from initial_state(spec). `heat_integrated` is obtained by
// trapezoidal quadrature of `heat_current` after the run, so observers do
// not see it. Throws SimulationFault when a drift limit is breached; the
// trace is never renormalized.
EvolutionResult evolve(const ClusterSpec& spec, const IntegratorConfig& cfg,
                       std::span<const MetricName> observables,
                       const SampleObserver& observer = {}, const DriftLimits& limits = {});

// Same, from an explicit initial state (lab frame at t = 0).
EvolutionResult evolve_from(const ClusterSpec& spec, const IntegratorConfig& cfg,
                            const ComplexMatrix& rho0, std::span<const MetricName> observables,
                            const SampleObserver& observer = {}, const DriftLimits& limits = {});

// Classical fourth-order Runge-Kutta step with reusable work buffers.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(Eigen::Index dim);
  void step(const LindbladGenerator& generator, ComplexMatrix& rho, double dt);

 private:
  ComplexMatrix k1_, k2_, k3_, k4_, tmp_;
};

// rho -> exp(+i H0 t) rho exp(-i H0 t), H0 = (omega/2) sum_i sigma_z^(i).
ComplexMatrix to_rotating_frame(const ComplexMatrix& rho, double t, double omega);
ComplexMatrix from_rotating_frame(const ComplexMatrix& rho, double t, double omega);
DensityMatrix to_rotating_frame(const DensityMatrix& rho, double t, double omega);

}  // namespace spinshield
