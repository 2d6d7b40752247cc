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

#include "spinshield/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spinshield/error.hpp"

namespace spinshield {

namespace {

constexpr double kSupportTolerance = 1e-12;

struct KindName {
  MetricKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {MetricKind::rel_entropy_vs_thermal, "rel_entropy_vs_thermal"},
    {MetricKind::trace_distance_vs_thermal, "trace_distance_vs_thermal"},
    {MetricKind::coh_rel_entropy, "coh_rel_entropy"},
    {MetricKind::coh_l1, "coh_l1"},
    {MetricKind::heat_current, "heat_current"},
    {MetricKind::heat_integrated, "heat_integrated"},
    {MetricKind::sigma_z_expect, "sigma_z_expect"},
    {MetricKind::purity, "purity"},
};

double clipped(double lambda) {
  if (lambda >= 0.0) return lambda;
  if (lambda >= -kClipTolerance) return 0.0;
  std::ostringstream os;
  os << "negative eigenvalue " << lambda << " in entropy evaluation";
  throw SimulationFault(os.str());
}

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

bool is_diagonal(const ComplexMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r != c && m(r, c) != Complex{0.0, 0.0}) return false;
    }
  }
  return true;
}

// Loose Hermiticity gate for states that come out of an integrator.
constexpr double kStateHermiticity = 1e-8;

}  // namespace

std::string to_string(MetricKind k) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == k) return kn.name;
  }
  throw std::logic_error("unknown metric kind");
}

MetricKind parse_metric_kind(std::string_view s) {
  for (const auto& kn : kKindNames) {
    if (s == kn.name) return kn.kind;
  }
  throw ParseError("unknown metric '" + std::string(s) + "'");
}

const std::vector<MetricKind>& all_metric_kinds() {
  static const std::vector<MetricKind> kinds = [] {
    std::vector<MetricKind> v;
    for (const auto& kn : kKindNames) v.push_back(kn.kind);
    return v;
  }();
  return kinds;
}

const std::vector<MetricName>& table_metrics() {
  static const std::vector<MetricName> metrics = {
      MetricName::central(MetricKind::rel_entropy_vs_thermal),
      MetricName::central(MetricKind::trace_distance_vs_thermal),
      MetricName::central(MetricKind::coh_rel_entropy),
      MetricName::central(MetricKind::coh_l1),
  };
  return metrics;
}

std::string MetricName::id() const {
  std::string out = to_string(kind);
  if (sites.size() == 1 && sites.front() == 1) return out;
  out += '@';
  for (std::size_t k = 0; k < sites.size(); ++k) {
    if (k) out += '-';
    out += std::to_string(sites[k]);
  }
  return out;
}

MetricName MetricName::parse(std::string_view id) {
  MetricName m;
  const auto at = id.find('@');
  m.kind = parse_metric_kind(id.substr(0, at));
  if (at == std::string_view::npos) return m;
  m.sites.clear();
  std::string_view rest = id.substr(at + 1);
  while (!rest.empty()) {
    const auto dash = rest.find('-');
    const std::string token(rest.substr(0, dash));
    try {
      std::size_t used = 0;
      const int site = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      m.sites.push_back(site);
    } catch (const std::exception&) {
      throw ParseError("bad site list in metric '" + std::string(id) + "'");
    }
    if (dash == std::string_view::npos) break;
    rest = rest.substr(dash + 1);
  }
  if (m.sites.empty()) throw ParseError("empty site list in metric '" + std::string(id) + "'");
  std::sort(m.sites.begin(), m.sites.end());
  return m;
}

bool MetricName::is_state_metric() const {
  return kind != MetricKind::heat_current && kind != MetricKind::heat_integrated;
}

void MetricName::validate(int total_spins) const {
  if (sites.empty()) throw ValidationError("metric " + id() + " has no sites");
  for (std::size_t k = 0; k < sites.size(); ++k) {
    if (sites[k] < 1 || sites[k] > total_spins) {
      throw ValidationError("metric " + id() + " refers to a site outside the cluster");
    }
    if (k && sites[k] <= sites[k - 1]) throw ValidationError("metric " + id() + " has unsorted sites");
  }
  const bool single = sites.size() == 1;
  if ((kind == MetricKind::sigma_z_expect) && !single) {
    throw ValidationError("sigma_z_expect takes exactly one site");
  }
  if (!is_state_metric() && !(single && sites.front() == 1)) {
    throw ValidationError(id() + " is defined for the central spin only");
  }
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  const RealVector ev = hermitian_eigenvalues(rho, kStateHermiticity);
  double s = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) s -= xlog2x(clipped(ev(k)));
  return s;
}

double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  }
  const RealVector ev = hermitian_eigenvalues(rho, kStateHermiticity);
  double first = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) first += xlog2x(clipped(ev(k)));

  double cross = 0.0;
  auto accumulate = [&](double mu, double weight) {
    mu = clipped(mu);
    if (mu <= 0.0) {
      if (weight > kSupportTolerance) return false;
      return true;
    }
    cross += weight * std::log2(mu);
    return true;
  };
  if (is_diagonal(sigma)) {
    for (Eigen::Index k = 0; k < sigma.rows(); ++k) {
      if (!accumulate(sigma(k, k).real(), rho(k, k).real())) {
        return std::numeric_limits<double>::infinity();
      }
    }
  } else {
    const HermitianEigen eig = hermitian_eig(sigma, kStateHermiticity);
    for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
      const auto w = eig.vectors.col(j);
      const double weight = (w.adjoint() * rho * w)(0, 0).real();
      if (!accumulate(eig.values(j), weight)) return std::numeric_limits<double>::infinity();
    }
  }
  return std::max(0.0, first - cross);
}

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  const RealVector ev = hermitian_eigenvalues(rho - sigma, kStateHermiticity);
  return 0.5 * ev.cwiseAbs().sum();
}

double coherence_l1(const ComplexMatrix& rho) {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < rho.cols(); ++c) {
    for (Eigen::Index r = 0; r < rho.rows(); ++r) {
      if (r != c) sum += std::abs(rho(r, c));
    }
  }
  return sum;
}

double coherence_rel_entropy(const ComplexMatrix& rho) {
  double diag_entropy = 0.0;
  for (Eigen::Index k = 0; k < rho.rows(); ++k) diag_entropy -= xlog2x(clipped(rho(k, k).real()));
  return std::max(0.0, diag_entropy - von_neumann_entropy(rho));
}

double purity(const ComplexMatrix& rho) { return rho.cwiseAbs2().sum(); }

double heat_current_from_derivative(double omega, const ComplexMatrix& drho_full) {
  const ComplexMatrix d = reduce_to_central(drho_full);
  return 0.5 * omega * (d(0, 0).real() - d(1, 1).real());
}

double heat_current(const ClusterSpec& spec, const ComplexMatrix& rho_full,
                    const LindbladGenerator& generator) {
  if (rho_full.rows() != generator.dimension()) {
    throw std::invalid_argument("heat_current: state dimension does not match generator");
  }
  return heat_current_from_derivative(spec.omega, generator.apply(rho_full));
}

TimeSeries integrate_heat(const TimeSeries& series) {
  const auto& j = series.column(to_string(MetricKind::heat_current));
  const auto& t = series.times();
  std::vector<double> q(t.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k) {
    q[k] = q[k - 1] + 0.5 * (t[k] - t[k - 1]) * (j[k] + j[k - 1]);
  }
  TimeSeries out(std::vector<std::string>{to_string(MetricKind::heat_integrated)});
  for (std::size_t k = 0; k < t.size(); ++k) out.append(t[k], {q[k]});
  return out;
}

double erasure_cost(const ClusterSpec& spec, const ComplexMatrix& rho_initial,
                    const ComplexMatrix& rho_final) {
  if (rho_initial.rows() != 2 || rho_final.rows() != 2) {
    throw std::invalid_argument("erasure_cost: central-spin states must be 2x2");
  }
  const ComplexMatrix diff = rho_final - rho_initial;
  return 0.5 * spec.omega * (diff(0, 0).real() - diff(1, 1).real());
}

double evaluate_state_metric(const MetricName& metric, const ComplexMatrix& rho_full,
                             int total_spins, const ClusterSpec& spec) {
  if (!metric.is_state_metric()) {
    throw std::invalid_argument("evaluate_state_metric: " + metric.id() + " is not a state metric");
  }
  const bool central = metric.sites.size() == 1 && metric.sites.front() == 1;
  const ComplexMatrix reduced = central ? reduce_to_central(rho_full)
                                        : partial_trace(rho_full, metric.sites, total_spins);
  auto reference = [&] {
    const ComplexMatrix th = thermal_state(spec.omega, spec.noise.temperature).matrix();
    ComplexMatrix ref = ComplexMatrix::Identity(1, 1);
    for (std::size_t k = 0; k < metric.sites.size(); ++k) ref = kron(ref, th);
    return ref;
  };
  switch (metric.kind) {
    case MetricKind::rel_entropy_vs_thermal:
      return relative_entropy(reduced, reference());
    case MetricKind::trace_distance_vs_thermal:
      return trace_distance(reduced, reference());
    case MetricKind::coh_rel_entropy:
      return coherence_rel_entropy(reduced);
    case MetricKind::coh_l1:
      return coherence_l1(reduced);
    case MetricKind::sigma_z_expect:
      return reduced(0, 0).real() - reduced(1, 1).real();
    case MetricKind::purity:
      return purity(reduced);
    default:
      break;
  }
  throw std::logic_error("unhandled metric");
}

}  // namespace spinshield
