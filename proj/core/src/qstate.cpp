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

#include "spinshield/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spinshield/error.hpp"

namespace spinshield {

ComplexMatrix pauli(PauliAxis axis) {
  const Complex i{0.0, 1.0};
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (axis) {
    case PauliAxis::x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case PauliAxis::y:
      m(0, 1) = -i;
      m(1, 0) = i;
      break;
    case PauliAxis::z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case PauliAxis::plus:
      m(0, 1) = 1.0;
      break;
    case PauliAxis::minus:
      m(1, 0) = 1.0;
      break;
  }
  return m;
}

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, int site, int total_spins) {
  if (op.rows() != 2 || op.cols() != 2) {
    throw std::invalid_argument("embed: operator must be 2x2");
  }
  if (total_spins < 1 || total_spins > kMaxSpins) {
    throw std::invalid_argument("embed: unsupported spin count");
  }
  if (site < 1 || site > total_spins) {
    throw std::invalid_argument("embed: site out of range");
  }
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  const ComplexMatrix id2 = identity(2);
  for (int k = 1; k <= total_spins; ++k) {
    out = kron(out, k == site ? op : id2);
  }
  return out;
}

int spins_for_dimension(Eigen::Index dim) {
  int n = 0;
  Eigen::Index d = 1;
  while (d < dim && n <= kMaxSpins) {
    d <<= 1;
    ++n;
  }
  if (d != dim || dim < 1) {
    throw std::invalid_argument("dimension is not a power of two: " + std::to_string(dim));
  }
  return n;
}

double hermiticity_error(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r <= c; ++r) {
      worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
    }
  }
  return worst;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
    }
  }
  return true;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, const DensityTolerances& tol) : m_(std::move(m)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) {
    throw ValidationError("density matrix must be square and non-empty");
  }
  if (!all_finite(m_)) throw ValidationError("density matrix has non-finite entries");
  const double herm = hermiticity_error(m_);
  if (herm > tol.hermiticity) {
    std::ostringstream os;
    os << "density matrix not Hermitian (max |rho - rho^dagger| = " << herm << ")";
    throw ValidationError(os.str());
  }
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    std::ostringstream os;
    os << "density matrix trace " << tr << " differs from 1";
    throw ValidationError(os.str());
  }
  const double lo = hermitian_eigenvalues(m_, tol.hermiticity)(0);
  if (lo < tol.min_eigenvalue) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << lo;
    throw ValidationError(os.str());
  }
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix m) {
  return DensityMatrix(std::move(m), Unchecked{});
}

DensityMatrix pure_state(const Eigen::VectorXcd& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("pure_state: zero vector");
  const Eigen::VectorXcd v = psi / norm;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix tensor_product(std::span<const DensityMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f.matrix());
  return DensityMatrix::unchecked(std::move(out));
}

namespace {

// Scatter tables mapping a compact index over a set of bits to its position
// in the full register.
std::vector<Eigen::Index> scatter_table(const std::vector<int>& bits) {
  const std::size_t size = std::size_t{1} << bits.size();
  std::vector<Eigen::Index> table(size, 0);
  for (std::size_t x = 0; x < size; ++x) {
    Eigen::Index full = 0;
    // bits[] is ordered most significant first in the compact index.
    for (std::size_t k = 0; k < bits.size(); ++k) {
      const std::size_t compact_bit = bits.size() - 1 - k;
      if ((x >> compact_bit) & 1U) full |= Eigen::Index{1} << bits[k];
    }
    table[x] = full;
  }
  return table;
}

std::vector<int> validated_keep(std::span<const int> keep, int total_spins) {
  if (total_spins < 1 || total_spins > kMaxSpins) {
    throw std::invalid_argument("partial_trace: unsupported spin count");
  }
  std::vector<int> sites(keep.begin(), keep.end());
  std::sort(sites.begin(), sites.end());
  if (sites.empty()) throw std::invalid_argument("partial_trace: empty site set");
  if (std::adjacent_find(sites.begin(), sites.end()) != sites.end()) {
    throw std::invalid_argument("partial_trace: duplicate site");
  }
  if (sites.front() < 1 || sites.back() > total_spins) {
    throw std::invalid_argument("partial_trace: site out of range");
  }
  return sites;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& op, std::span<const int> keep,
                            int total_spins) {
  const std::vector<int> sites = validated_keep(keep, total_spins);
  if (op.rows() != (Eigen::Index{1} << total_spins) || op.cols() != op.rows()) {
    throw std::invalid_argument("partial_trace: dimension does not match spin count");
  }
  std::vector<int> kept_bits;
  std::vector<int> traced_bits;
  for (int s = 1; s <= total_spins; ++s) {
    if (std::binary_search(sites.begin(), sites.end(), s)) {
      kept_bits.push_back(site_bit(s, total_spins));
    } else {
      traced_bits.push_back(site_bit(s, total_spins));
    }
  }
  const auto kept = scatter_table(kept_bits);
  const auto traced = scatter_table(traced_bits);
  const auto kdim = static_cast<Eigen::Index>(kept.size());
  ComplexMatrix out = ComplexMatrix::Zero(kdim, kdim);
  for (Eigen::Index y = 0; y < kdim; ++y) {
    for (Eigen::Index x = 0; x < kdim; ++x) {
      Complex acc{0.0, 0.0};
      for (const Eigen::Index r : traced) acc += op(kept[x] | r, kept[y] | r);
      out(x, y) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep,
                            int total_spins) {
  return DensityMatrix::unchecked(partial_trace(rho.matrix(), keep, total_spins));
}

ComplexMatrix reduce_to_central(const ComplexMatrix& rho) {
  const Eigen::Index half = rho.rows() / 2;
  ComplexMatrix out(2, 2);
  out(0, 0) = rho.block(0, 0, half, half).trace();
  out(0, 1) = rho.block(0, half, half, half).trace();
  out(1, 0) = rho.block(half, 0, half, half).trace();
  out(1, 1) = rho.block(half, half, half, half).trace();
  return out;
}

HermitianEigen hermitian_eig(const ComplexMatrix& m, double hermiticity_tol) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw std::invalid_argument("hermitian_eig: matrix must be square and non-empty");
  }
  if (hermiticity_error(m) > hermiticity_tol) {
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m, double hermiticity_tol) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix must be square and non-empty");
  }
  if (hermiticity_error(m) > hermiticity_tol) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian");
  }
  if (m.rows() == 2) {
    // Closed form keeps the per-sample metric path cheap.
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
    RealVector v(2);
    v << mean - radius, mean + radius;
    return v;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigenvalues: eigensolver did not converge");
  }
  return solver.eigenvalues();
}

}  // namespace spinshield
