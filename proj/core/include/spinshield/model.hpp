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

// Physical specification of a spin-star cluster: XX Hamiltonian, local
// Lindblad channels on the buffer spins, and the thermal/initial states.
// Units: hbar = k_B = 1, energies and rates in units of omega.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "spinshield/qstate.hpp"
#include "spinshield/sparse_operator.hpp"
#include "spinshield/topology.hpp"

namespace spinshield {

inline constexpr int kDefaultMaxSpins = 7;

enum class NoiseChannel { thermal, dephasing };
enum class PairConvention { unordered_once, ordered_double };
enum class InitialBuffer { thermal, max_coherent };
enum class Frame { lab, rotating };

struct NoiseSpec {
  NoiseChannel channel = NoiseChannel::thermal;
  double temperature = 0.4;  // bath temperature; also fixes the reference thermal state
  double gamma = 0.0005;     // thermal dissipation rate
  double gamma_d = 0.00059;  // pure dephasing rate

  void validate() const;
  double beta() const { return 1.0 / temperature; }
};

struct ClusterSpec {
  int n_buffer = 4;
  double omega = 1.0;
  BufferGraph graph{4};
  double g = 0.002;
  PairConvention pair_convention = PairConvention::unordered_once;
  NoiseSpec noise{};
  InitialBuffer initial_buffer = InitialBuffer::thermal;
  // Attach the buffer channel to the central spin as well. Only meaningful
  // for the isolated single-spin baseline (n_buffer = 0).
  bool bath_on_central = false;

  int total_spins() const { return n_buffer + 1; }
  Eigen::Index dimension() const { return Eigen::Index{1} << total_spins(); }

  // Throws ValidationError. Buffer graphs must be simple, planar and within
  // the 3N - 6 edge budget.
  void validate(int max_spins = kDefaultMaxSpins) const;
};

// Coupled site pairs: the central spin with every buffer spin, then the
// buffer graph edges.
std::vector<Edge> coupled_pairs(const ClusterSpec& spec);

// Bare energies (omega/2) sum_i sigma_z^(i) on the computational basis.
RealVector bare_energies(const ClusterSpec& spec);

// g sum_pairs (sigma_x sigma_x + sigma_y sigma_y); doubled under
// PairConvention::ordered_double.
SparseOperator build_interaction(const ClusterSpec& spec);

// Full lab-frame Hamiltonian as a dense matrix.
ComplexMatrix build_hamiltonian(const ClusterSpec& spec);

struct LindbladTerm {
  SparseOperator jump;
  double rate = 0.0;
  int site = 0;
  std::string label;
};

double planck_occupation(double omega, double temperature);

// Thermal channel: (sigma^-, gamma (1 + n)) and (sigma^+, gamma n) per buffer
// spin. Dephasing channel: (sigma_z, gamma_d) per buffer spin, which gives
// gamma_d (sigma_z rho sigma_z - rho).
std::vector<LindbladTerm> build_dissipator_terms(const ClusterSpec& spec);

// exp(-beta omega sigma_z / 2) / Z. Infinite temperature gives I/2.
DensityMatrix thermal_state(double omega, double temperature);

DensityMatrix plus_state();

// |+><+| on the central spin times the chosen buffer state on every buffer
// spin.
DensityMatrix initial_state(const ClusterSpec& spec);

// Right-hand side of the master equation,
//   d(rho)/dt = -i [H, rho] + sum_k r_k (L_k rho L_k^+ - {L_k^+ L_k, rho} / 2),
// applied term by term from sparse operators. In the rotating frame the
// bare Hamiltonian is dropped; that is exact because it commutes with the
// XX interaction and every channel is covariant under it.
class LindbladGenerator {
 public:
  LindbladGenerator(const ClusterSpec& spec, Frame frame);

  // out = L(rho); `out` is resized as needed.
  void apply(const ComplexMatrix& rho, ComplexMatrix& out) const;
  ComplexMatrix apply(const ComplexMatrix& rho) const;

  Frame frame() const noexcept { return frame_; }
  int total_spins() const noexcept { return spins_; }
  Eigen::Index dimension() const noexcept { return dim_; }
  const RealVector& bare_energies() const noexcept { return bare_; }
  const std::vector<LindbladTerm>& terms() const noexcept { return terms_; }

 private:
  // Jump with at most one nonzero per row and real entries.
  struct MonomialJump {
    // Stretch of consecutive rows mapping to consecutive columns.
    struct Run {
      std::int32_t row;
      std::int32_t col;
      std::int32_t offset;
      std::int32_t length;
    };
    double rate;
    std::vector<std::int32_t> rows;
    std::vector<std::int32_t> cols;
    std::vector<double> values;
    std::vector<Run> runs;
  };

  void apply_effective(const ComplexMatrix& rho, ComplexMatrix& out) const;

  Frame frame_;
  int spins_;
  Eigen::Index dim_;
  RealVector bare_;
  SparseOperator effective_;  // -i (H - (i/2) sum r L^+ L)
  std::vector<LindbladTerm> terms_;

  // effective_ split as diag + i * hop when its off-diagonal part is purely imaginary.
  bool imaginary_hop_ = false;
  std::vector<Complex> diag_;
  std::vector<std::int32_t> hop_ptr_;
  std::vector<std::int32_t> hop_cols_;
  std::vector<double> hop_values_;
  std::vector<MonomialJump> monomial_;
  std::vector<std::size_t> generic_terms_;
};

std::string to_string(NoiseChannel c);
std::string to_string(PairConvention c);
std::string to_string(InitialBuffer b);
std::string to_string(Frame f);
NoiseChannel parse_noise_channel(std::string_view s);
PairConvention parse_pair_convention(std::string_view s);
InitialBuffer parse_initial_buffer(std::string_view s);
Frame parse_frame(std::string_view s);

}  // namespace spinshield
