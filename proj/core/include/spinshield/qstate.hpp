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

// Dense complex linear algebra and spin-1/2 state primitives.
//
// Basis convention: each spin uses the ordered basis {|0>, |1>} with
// sigma_z = |0><0| - |1><1|. Site 1 is the central spin and is the leftmost
// (most significant) tensor factor, so site k maps to bit (n - k) of a basis
// index in an n-spin register.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spinshield {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr int kMaxSpins = 12;

enum class PauliAxis { x, y, z, plus, minus };

// Single-spin Pauli and ladder operators. sigma_minus = |1><0| lowers the
// energy of H = (omega/2) sigma_z.
ComplexMatrix pauli(PauliAxis axis);

ComplexMatrix identity(Eigen::Index dim);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// I x ... x op x ... x I with `op` (2x2) at 1-based `site`.
ComplexMatrix embed(const ComplexMatrix& op, int site, int total_spins);

// Bit position of a 1-based site inside an n-spin basis index.
constexpr int site_bit(int site, int total_spins) { return total_spins - site; }

// Number of spins for a register of dimension `dim`; throws unless dim = 2^n.
int spins_for_dimension(Eigen::Index dim);

// Largest entrywise |m - m^dagger|.
double hermiticity_error(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);

struct DensityTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-8;
  double min_eigenvalue = -1e-8;
};

// Hermitian, unit-trace, positive semidefinite matrix. Construction
// validates all three properties; `unchecked` is for hot paths whose
// invariants are verified elsewhere.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, const DensityTolerances& tol = {});

  static DensityMatrix unchecked(ComplexMatrix m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  int num_spins() const { return spins_for_dimension(m_.rows()); }

  Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

 private:
  struct Unchecked {};
  DensityMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

DensityMatrix pure_state(const Eigen::VectorXcd& psi);

// Tensor product of single-spin (or multi-spin) states, left to right.
DensityMatrix tensor_product(std::span<const DensityMatrix> factors);

// Reduced state on the `keep` sites (ascending order in the result).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep,
                            int total_spins);

// Same reduction for an arbitrary operator (used for d(rho)/dt, which is
// traceless rather than a state).
ComplexMatrix partial_trace(const ComplexMatrix& op, std::span<const int> keep,
                            int total_spins);

// 2x2 reduced state of the central spin (site 1).
ComplexMatrix reduce_to_central(const ComplexMatrix& rho);

struct HermitianEigen {
  RealVector values;     // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

HermitianEigen hermitian_eig(const ComplexMatrix& m, double hermiticity_tol = 1e-10);

RealVector hermitian_eigenvalues(const ComplexMatrix& m, double hermiticity_tol = 1e-10);

}  // namespace spinshield
