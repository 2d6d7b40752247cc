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

#include <random>

#include "spinshield/qstate.hpp"

namespace spinshield::testing {

// Random density matrix G G^dagger / tr(G G^dagger) with Gaussian G.
inline ComplexMatrix random_state(Eigen::Index dim, std::mt19937_64& rng, Eigen::Index rank = 0) {
  std::normal_distribution<double> normal;
  const Eigen::Index cols = rank > 0 ? rank : dim;
  ComplexMatrix g(dim, cols);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) g(r, c) = Complex{normal(rng), normal(rng)};
  }
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

inline ComplexMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = Complex{normal(rng), normal(rng)};
  }
  return 0.5 * (m + m.adjoint());
}

// Diagonal unitary with random phases.
inline ComplexMatrix random_phases(Eigen::Index dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) u(k, k) = std::polar(1.0, angle(rng));
  return u;
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace spinshield::testing
