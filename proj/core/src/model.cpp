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

#include "spinshield/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spinshield/error.hpp"

namespace spinshield {

void NoiseSpec::validate() const {
  if (!(temperature > 0.0)) throw ValidationError("temperature must be > 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be finite and >= 0");
  if (!(gamma_d >= 0.0) || !std::isfinite(gamma_d)) {
    throw ValidationError("gamma_d must be finite and >= 0");
  }
}

void ClusterSpec::validate(int max_spins) const {
  if (n_buffer < 0) throw ValidationError("n_buffer must be >= 0");
  if (total_spins() > max_spins) {
    throw ValidationError("cluster of " + std::to_string(total_spins()) +
                          " spins exceeds the limit of " + std::to_string(max_spins));
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ValidationError("omega must be > 0");
  if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("g must be finite and >= 0");
  if (graph.n_buffer() != n_buffer) {
    throw ValidationError("buffer graph has " + std::to_string(graph.n_buffer()) +
                          " vertices, expected " + std::to_string(n_buffer));
  }
  if (n_buffer <= kMaxPlanarityBuffer && !is_admissible(graph)) {
    throw ValidationError("buffer graph is not a planar network within the 3N-6 edge budget: " +
                          to_edge_list(graph));
  }
  noise.validate();
  if (bath_on_central && n_buffer != 0) {
    throw ValidationError("bath_on_central is reserved for the single-spin baseline (n_buffer = 0)");
  }
}

std::vector<Edge> coupled_pairs(const ClusterSpec& spec) {
  std::vector<Edge> pairs;
  for (int j = 2; j <= spec.n_buffer + 1; ++j) pairs.push_back({1, j});
  for (const auto& e : spec.graph.edges()) pairs.push_back(e);
  return pairs;
}

RealVector bare_energies(const ClusterSpec& spec) {
  const int n = spec.total_spins();
  const Eigen::Index dim = spec.dimension();
  RealVector e(dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    // sigma_z = +1 on |0>, -1 on |1>.
    const int ones = std::popcount(static_cast<std::uint64_t>(a));
    e(a) = 0.5 * spec.omega * static_cast<double>(n - 2 * ones);
  }
  return e;
}

namespace {

double pair_multiplicity(PairConvention c) {
  return c == PairConvention::ordered_double ? 2.0 : 1.0;
}

}  // namespace

SparseOperator build_interaction(const ClusterSpec& spec) {
  const int n = spec.total_spins();
  const double strength = spec.g * pair_multiplicity(spec.pair_convention);
  SparseOperator h(spec.dimension());
  if (strength == 0.0) return h;
  const ComplexMatrix sp = pauli(PauliAxis::plus);
  const ComplexMatrix sm = pauli(PauliAxis::minus);
  for (const auto& p : coupled_pairs(spec)) {
    // sigma_x sigma_x + sigma_y sigma_y = 2 (sigma^+ sigma^- + sigma^- sigma^+)
    const SparseOperator flip = SparseOperator::embedded(sp, p.u, n) * SparseOperator::embedded(sm, p.v, n);
    h = h + Complex{2.0 * strength, 0.0} * (flip + flip.adjoint());
  }
  return h;
}

ComplexMatrix build_hamiltonian(const ClusterSpec& spec) {
  const int n = spec.total_spins();
  if (n > kMaxSpins) throw ValidationError("dimension overflow");
  const Eigen::Index dim = spec.dimension();
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  const ComplexMatrix sx = pauli(PauliAxis::x);
  const ComplexMatrix sy = pauli(PauliAxis::y);
  const ComplexMatrix sz = pauli(PauliAxis::z);
  for (int i = 1; i <= n; ++i) h += 0.5 * spec.omega * embed(sz, i, n);
  const double strength = spec.g * pair_multiplicity(spec.pair_convention);
  for (const auto& p : coupled_pairs(spec)) {
    h += strength * (embed(sx, p.u, n) * embed(sx, p.v, n) + embed(sy, p.u, n) * embed(sy, p.v, n));
  }
  return h;
}

double planck_occupation(double omega, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("planck_occupation: T must be > 0");
  if (std::isinf(temperature)) return std::numeric_limits<double>::infinity();
  return 1.0 / std::expm1(omega / temperature);
}

std::vector<LindbladTerm> build_dissipator_terms(const ClusterSpec& spec) {
  const int n = spec.total_spins();
  std::vector<LindbladTerm> terms;
  const int first = spec.bath_on_central ? 1 : 2;
  for (int site = first; site <= n; ++site) {
    if (spec.noise.channel == NoiseChannel::thermal) {
      const double occ = planck_occupation(spec.omega, spec.noise.temperature);
      terms.push_back({SparseOperator::embedded(pauli(PauliAxis::minus), site, n),
                       spec.noise.gamma * (1.0 + occ), site, "sigma_minus"});
      terms.push_back({SparseOperator::embedded(pauli(PauliAxis::plus), site, n),
                       spec.noise.gamma * occ, site, "sigma_plus"});
    } else {
      terms.push_back({SparseOperator::embedded(pauli(PauliAxis::z), site, n),
                       spec.noise.gamma_d, site, "sigma_z"});
    }
  }
  return terms;
}

DensityMatrix thermal_state(double omega, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("thermal_state: T must be > 0");
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  if (std::isinf(temperature)) {
    m(0, 0) = 0.5;
    m(1, 1) = 0.5;
  } else {
    const double x = omega / temperature;
    // e^{-x/2} / (2 cosh(x/2)) = 1 / (1 + e^{x})
    m(0, 0) = 1.0 / (1.0 + std::exp(x));
    m(1, 1) = 1.0 / (1.0 + std::exp(-x));
  }
  return DensityMatrix(std::move(m));
}

DensityMatrix plus_state() {
  ComplexMatrix m = ComplexMatrix::Constant(2, 2, Complex{0.5, 0.0});
  return DensityMatrix(std::move(m));
}

DensityMatrix initial_state(const ClusterSpec& spec) {
  std::vector<DensityMatrix> factors;
  factors.push_back(plus_state());
  const DensityMatrix buffer = spec.initial_buffer == InitialBuffer::thermal
                                   ? thermal_state(spec.omega, spec.noise.temperature)
                                   : plus_state();
  for (int k = 0; k < spec.n_buffer; ++k) factors.push_back(buffer);
  return tensor_product(factors);
}

LindbladGenerator::LindbladGenerator(const ClusterSpec& spec, Frame frame)
    : frame_(frame),
      spins_(spec.total_spins()),
      dim_(spec.dimension()),
      bare_(spinshield::bare_energies(spec)),
      terms_(build_dissipator_terms(spec)) {
  if (spins_ > kMaxSpins) throw ValidationError("dimension overflow");
  SparseOperator h = build_interaction(spec);
  if (frame_ == Frame::lab) h = h + SparseOperator::diagonal(bare_.cast<Complex>());
  SparseOperator eff = Complex{0.0, -1.0} * h;
  for (const auto& t : terms_) {
    if (t.rate == 0.0) continue;
    eff = eff + Complex{-0.5 * t.rate, 0.0} * (t.jump.adjoint() * t.jump);
  }
  effective_ = std::move(eff);

  const auto& ptr = effective_.row_offsets();
  const auto& cols = effective_.columns();
  const auto& vals = effective_.values();
  imaginary_hop_ = true;
  diag_.assign(static_cast<std::size_t>(dim_), Complex{0.0, 0.0});
  hop_ptr_.assign(1, 0);
  for (Eigen::Index r = 0; r < dim_; ++r) {
    for (Eigen::Index k = ptr[r]; k < ptr[r + 1]; ++k) {
      if (cols[k] == r) {
        diag_[r] = vals[k];
      } else {
        if (vals[k].real() != 0.0) imaginary_hop_ = false;
        hop_cols_.push_back(static_cast<std::int32_t>(cols[k]));
        hop_values_.push_back(vals[k].imag());
      }
    }
    hop_ptr_.push_back(static_cast<std::int32_t>(hop_cols_.size()));
  }

  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const LindbladTerm& t = terms_[i];
    if (t.rate == 0.0) continue;
    const auto& jp = t.jump.row_offsets();
    const auto& jc = t.jump.columns();
    const auto& jv = t.jump.values();
    MonomialJump m{t.rate, {}, {}, {}, {}};
    bool monomial = true;
    for (Eigen::Index r = 0; r < dim_ && monomial; ++r) {
      const Eigen::Index count = jp[r + 1] - jp[r];
      if (count == 0) continue;
      if (count > 1 || jv[jp[r]].imag() != 0.0) {
        monomial = false;
        break;
      }
      m.rows.push_back(static_cast<std::int32_t>(r));
      m.cols.push_back(static_cast<std::int32_t>(jc[jp[r]]));
      m.values.push_back(jv[jp[r]].real());
    }
    if (monomial) {
      for (std::size_t k = 0; k < m.rows.size(); ++k) {
        if (!m.runs.empty()) {
          MonomialJump::Run& last = m.runs.back();
          if (m.rows[k] == last.row + last.length && m.cols[k] == last.col + last.length) {
            ++last.length;
            continue;
          }
        }
        m.runs.push_back({m.rows[k], m.cols[k], static_cast<std::int32_t>(k), 1});
      }
      monomial_.push_back(std::move(m));
    } else {
      generic_terms_.push_back(i);
    }
  }
}

void LindbladGenerator::apply_effective(const ComplexMatrix& rho, ComplexMatrix& out) const {
  if (!imaginary_hop_) {
    out.setZero(dim_, dim_);
    effective_.multiply_add(rho, out, Complex{1.0, 0.0});
    return;
  }
  // Builds B^dagger = rho E^dagger column by column; the caller adds its adjoint.
  // Column a of rho K^T is a real combination of columns of rho since K is real.
  out.resize(dim_, dim_);
  const std::size_t n = static_cast<std::size_t>(dim_);
  const double* base_in = reinterpret_cast<const double*>(rho.data());
  double* base_out = reinterpret_cast<double*>(out.data());
  std::vector<double> acc(2 * n);
  for (std::size_t a = 0; a < n; ++a) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::int32_t k = hop_ptr_[a]; k < hop_ptr_[a + 1]; ++k) {
      const double w = hop_values_[k];
      const double* src = base_in + 2 * n * static_cast<std::size_t>(hop_cols_[k]);
      for (std::size_t j = 0; j < 2 * n; ++j) acc[j] += w * src[j];
    }
    const double d_re = diag_[a].real();
    const double d_im = diag_[a].imag();
    const double* src = base_in + 2 * n * a;
    double* dst = base_out + 2 * n * a;
    for (std::size_t j = 0; j < n; ++j) {
      const double x_re = src[2 * j];
      const double x_im = src[2 * j + 1];
      dst[2 * j] = d_re * x_re + d_im * x_im + acc[2 * j + 1];
      dst[2 * j + 1] = d_re * x_im - d_im * x_re - acc[2 * j];
    }
  }
}

void LindbladGenerator::apply(const ComplexMatrix& rho, ComplexMatrix& out) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) {
    throw std::invalid_argument("LindbladGenerator::apply: dimension mismatch");
  }
  apply_effective(rho, out);
  // out <- B + B^dagger in square tiles, pairwise so the result is exactly Hermitian.
  constexpr Eigen::Index kTile = 16;
  for (Eigen::Index c0 = 0; c0 < dim_; c0 += kTile) {
    const Eigen::Index c1 = std::min(dim_, c0 + kTile);
    for (Eigen::Index r0 = 0; r0 <= c0; r0 += kTile) {
      const Eigen::Index r1 = std::min(dim_, r0 + kTile);
      for (Eigen::Index c = c0; c < c1; ++c) {
        for (Eigen::Index r = r0; r < std::min(r1, c); ++r) {
          const Complex v = out(r, c) + std::conj(out(c, r));
          out(r, c) = v;
          out(c, r) = std::conj(v);
        }
      }
    }
  }
  for (Eigen::Index c = 0; c < dim_; ++c) out(c, c) = Complex{2.0 * out(c, c).real(), 0.0};
  const std::size_t n = static_cast<std::size_t>(dim_);
  const double* base_in = reinterpret_cast<const double*>(rho.data());
  double* base_out = reinterpret_cast<double*>(out.data());
  for (const MonomialJump& m : monomial_) {
    const std::size_t count = m.rows.size();
    for (std::size_t ib = 0; ib < count; ++ib) {
      const double* src = base_in + 2 * n * static_cast<std::size_t>(m.cols[ib]);
      double* dst = base_out + 2 * n * static_cast<std::size_t>(m.rows[ib]);
      const double wb = m.rate * m.values[ib];
      for (const MonomialJump::Run& run : m.runs) {
        const double* x = src + 2 * static_cast<std::size_t>(run.col);
        double* y = dst + 2 * static_cast<std::size_t>(run.row);
        const double* v = m.values.data() + run.offset;
        for (std::int32_t t = 0; t < run.length; ++t) {
          const double w = wb * v[t];
          y[2 * t] += w * x[2 * t];
          y[2 * t + 1] += w * x[2 * t + 1];
        }
      }
    }
  }
  for (std::size_t i : generic_terms_) terms_[i].jump.sandwich_add(rho, out, terms_[i].rate);
}

ComplexMatrix LindbladGenerator::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out;
  apply(rho, out);
  return out;
}

std::string to_string(NoiseChannel c) { return c == NoiseChannel::thermal ? "thermal" : "dephasing"; }
std::string to_string(PairConvention c) {
  return c == PairConvention::unordered_once ? "unordered_once" : "ordered_double";
}
std::string to_string(InitialBuffer b) {
  return b == InitialBuffer::thermal ? "thermal" : "max_coherent";
}
std::string to_string(Frame f) { return f == Frame::lab ? "lab" : "rotating"; }

NoiseChannel parse_noise_channel(std::string_view s) {
  if (s == "thermal") return NoiseChannel::thermal;
  if (s == "dephasing") return NoiseChannel::dephasing;
  throw ParseError("unknown noise channel '" + std::string(s) + "'");
}

PairConvention parse_pair_convention(std::string_view s) {
  if (s == "unordered_once" || s == "once") return PairConvention::unordered_once;
  if (s == "ordered_double" || s == "double") return PairConvention::ordered_double;
  throw ParseError("unknown pair convention '" + std::string(s) + "'");
}

InitialBuffer parse_initial_buffer(std::string_view s) {
  if (s == "thermal") return InitialBuffer::thermal;
  if (s == "max_coherent" || s == "max-coherent") return InitialBuffer::max_coherent;
  throw ParseError("unknown initial buffer state '" + std::string(s) + "'");
}

Frame parse_frame(std::string_view s) {
  if (s == "lab") return Frame::lab;
  if (s == "rotating") return Frame::rotating;
  throw ParseError("unknown frame '" + std::string(s) + "'");
}

}  // namespace spinshield
