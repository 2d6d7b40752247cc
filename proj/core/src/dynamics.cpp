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

#include "spinshield/dynamics.hpp"

#include <bit>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spinshield/error.hpp"

namespace spinshield {

namespace {

constexpr double kResolutionFactor = 0.05;

std::int64_t checked_ratio(double num, double den, const char* what) {
  const double ratio = num / den;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw ValidationError(std::string(what) + " must be an integer multiple of dt");
  }
  return static_cast<std::int64_t>(rounded);
}

}  // namespace

void IntegratorConfig::validate(const ClusterSpec& spec) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be > 0");
  if (!(sample_every >= dt)) throw ValidationError("sample_every must be >= dt");
  if (!(t_max >= sample_every) || !std::isfinite(t_max)) {
    throw ValidationError("t_max must be >= sample_every");
  }
  checked_ratio(sample_every, dt, "sample_every");
  if (frame == Frame::lab) {
    if (dt > kResolutionFactor / spec.omega) {
      throw ValidationError("lab-frame dt must be <= 0.05/omega");
    }
  } else if (spec.g > 0.0 && dt > kResolutionFactor / spec.g) {
    throw ValidationError("rotating-frame dt must be <= 0.05/g");
  }
}

std::int64_t IntegratorConfig::steps_per_sample() const {
  return checked_ratio(sample_every, dt, "sample_every");
}

std::int64_t IntegratorConfig::sample_count() const {
  return static_cast<std::int64_t>(std::floor(t_max / sample_every + 1e-9));
}

Rk4Stepper::Rk4Stepper(Eigen::Index dim)
    : k1_(dim, dim), k2_(dim, dim), k3_(dim, dim), k4_(dim, dim), tmp_(dim, dim) {}

void Rk4Stepper::step(const LindbladGenerator& generator, ComplexMatrix& rho, double dt) {
  const double half = 0.5 * dt;
  generator.apply(rho, k1_);
  tmp_.noalias() = rho + half * k1_;
  generator.apply(tmp_, k2_);
  tmp_.noalias() = rho + half * k2_;
  generator.apply(tmp_, k3_);
  tmp_.noalias() = rho + dt * k3_;
  generator.apply(tmp_, k4_);
  rho += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
}

ComplexMatrix to_rotating_frame(const ComplexMatrix& rho, double t, double omega) {
  const int n = spins_for_dimension(rho.rows());
  const Eigen::Index dim = rho.rows();
  // Phases depend only on the excitation difference, so precompute them.
  std::vector<Complex> phase(2 * n + 1);
  for (int d = -n; d <= n; ++d) {
    // E_a - E_b = omega * (ones_b - ones_a)
    const double angle = omega * static_cast<double>(d) * t;
    phase[d + n] = Complex{std::cos(angle), std::sin(angle)};
  }
  ComplexMatrix out(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const int ones_b = std::popcount(static_cast<std::uint64_t>(b));
    for (Eigen::Index a = 0; a < dim; ++a) {
      const int ones_a = std::popcount(static_cast<std::uint64_t>(a));
      out(a, b) = phase[ones_b - ones_a + n] * rho(a, b);
    }
  }
  return out;
}

ComplexMatrix from_rotating_frame(const ComplexMatrix& rho, double t, double omega) {
  return to_rotating_frame(rho, -t, omega);
}

DensityMatrix to_rotating_frame(const DensityMatrix& rho, double t, double omega) {
  return DensityMatrix::unchecked(to_rotating_frame(rho.matrix(), t, omega));
}

EvolutionResult evolve(const ClusterSpec& spec, const IntegratorConfig& cfg,
                       std::span<const MetricName> observables, const SampleObserver& observer,
                       const DriftLimits& limits) {
  spec.validate();
  return evolve_from(spec, cfg, initial_state(spec).matrix(), observables, observer, limits);
}

EvolutionResult evolve_from(const ClusterSpec& spec, const IntegratorConfig& cfg,
                            const ComplexMatrix& rho0, std::span<const MetricName> observables,
                            const SampleObserver& observer, const DriftLimits& limits) {
  spec.validate();
  cfg.validate(spec);
  const int n = spec.total_spins();
  if (rho0.rows() != spec.dimension() || rho0.cols() != spec.dimension()) {
    throw ValidationError("initial state dimension does not match the cluster");
  }
  bool want_heat_integral = false;
  bool need_heat_current = false;
  std::vector<std::string> names;
  std::vector<MetricName> recorded;
  for (const auto& m : observables) {
    m.validate(n);
    for (const auto& other : observables) {
      if (&other != &m && other == m) throw ValidationError("duplicate observable " + m.id());
    }
    if (m.kind == MetricKind::heat_integrated) {
      want_heat_integral = true;
      need_heat_current = true;
      continue;
    }
    if (m.kind == MetricKind::heat_current) need_heat_current = true;
    recorded.push_back(m);
    names.push_back(m.id());
  }
  const bool heat_current_requested =
      std::find(names.begin(), names.end(), to_string(MetricKind::heat_current)) != names.end();
  if (need_heat_current && !heat_current_requested) {
    recorded.push_back(MetricName::central(MetricKind::heat_current));
    names.push_back(to_string(MetricKind::heat_current));
  }

  const LindbladGenerator generator(spec, cfg.frame);
  Rk4Stepper stepper(spec.dimension());
  ComplexMatrix rho = rho0;
  ComplexMatrix drho;

  EvolutionResult result;
  result.series = TimeSeries(names);
  result.min_eigenvalue = std::numeric_limits<double>::infinity();

  std::vector<double> row(recorded.size());
  auto record = [&](double t) {
    const double trace_drift = std::abs(rho.trace() - Complex{1.0, 0.0});
    const double herm = hermiticity_error(rho);
    result.max_trace_drift = std::max(result.max_trace_drift, trace_drift);
    result.max_hermiticity_drift = std::max(result.max_hermiticity_drift, herm);
    if (!(trace_drift <= limits.trace) || !(herm <= limits.hermiticity)) {
      std::ostringstream os;
      os << "tolerance breach at t=" << t << ": |tr(rho) - 1| = " << trace_drift
         << ", max |rho - rho^dagger| = " << herm << " (limits " << limits.trace << ", "
         << limits.hermiticity << ")";
      throw SimulationFault(os.str());
    }
    if (cfg.check_positivity) {
      const double lo = hermitian_eigenvalues(rho, 1e-8)(0);
      result.min_eigenvalue = std::min(result.min_eigenvalue, lo);
      if (lo < limits.positivity) {
        std::ostringstream os;
        os << "positivity breach at t=" << t << ": minimum eigenvalue " << lo;
        throw SimulationFault(os.str());
      }
    }
    bool derivative_ready = false;
    for (std::size_t k = 0; k < recorded.size(); ++k) {
      const MetricName& m = recorded[k];
      if (m.kind == MetricKind::heat_current) {
        if (!derivative_ready) {
          generator.apply(rho, drho);
          derivative_ready = true;
        }
        row[k] = heat_current_from_derivative(spec.omega, drho);
      } else {
        row[k] = evaluate_state_metric(m, rho, n, spec);
      }
    }
    result.series.append(t, row);
  };

  record(0.0);
  const std::int64_t per_sample = cfg.steps_per_sample();
  const std::int64_t samples = cfg.sample_count();
  double t = 0.0;
  for (std::int64_t s = 1; s <= samples; ++s) {
    for (std::int64_t k = 0; k < per_sample; ++k) stepper.step(generator, rho, cfg.dt);
    t = static_cast<double>(s) * cfg.sample_every;
    record(t);
    if (observer && !observer(result.series, rho)) {
      result.stopped_early = s < samples;
      break;
    }
  }
  result.final_time = t;
  result.final_state = cfg.frame == Frame::rotating ? from_rotating_frame(rho, t, spec.omega) : rho;

  if (want_heat_integral) {
    const TimeSeries q = integrate_heat(result.series);
    result.series.add_column(to_string(MetricKind::heat_integrated),
                             q.column(to_string(MetricKind::heat_integrated)));
  }
  if (want_heat_integral || (need_heat_current && !heat_current_requested)) {
    // Present columns in request order, without helper columns.
    std::vector<std::string> order;
    for (const auto& m : observables) order.push_back(m.id());
    TimeSeries out(order);
    std::vector<double> values(order.size());
    for (std::size_t r = 0; r < result.series.size(); ++r) {
      for (std::size_t c = 0; c < order.size(); ++c) values[c] = result.series.column(order[c])[r];
      out.append(result.series.times()[r], values);
    }
    result.series = std::move(out);
  }
  if (!cfg.check_positivity) result.min_eigenvalue = std::nan("");
  return result;
}

}  // namespace spinshield
