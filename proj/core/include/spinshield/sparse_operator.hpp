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

#include <vector>

#include "spinshield/qstate.hpp"

namespace spinshield {

// Compressed-row complex operator on an n-spin register. Embedded Pauli
// strings have one nonzero per row, so applying one to a dense density
// matrix costs O(dim^2) instead of the O(dim^3) of a dense product.
class SparseOperator {
 public:
  SparseOperator() = default;
  explicit SparseOperator(Eigen::Index dim);

  static SparseOperator from_dense(const ComplexMatrix& m, double drop_tol = 0.0);
  static SparseOperator embedded(const ComplexMatrix& op, int site, int total_spins);
  static SparseOperator diagonal(const Eigen::VectorXcd& d);

  Eigen::Index dim() const noexcept { return dim_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  ComplexMatrix to_dense() const;
  SparseOperator adjoint() const;

  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator*(Complex s, const SparseOperator& a);

  // out += coeff * A * rho
  void multiply_add(const ComplexMatrix& rho, ComplexMatrix& out, Complex coeff) const;

  // out += coeff * A * rho * A^dagger
  void sandwich_add(const ComplexMatrix& rho, ComplexMatrix& out, double coeff) const;

  const std::vector<Eigen::Index>& row_offsets() const noexcept { return row_ptr_; }
  const std::vector<Eigen::Index>& columns() const noexcept { return cols_; }
  const std::vector<Complex>& values() const noexcept { return values_; }

 private:
  struct Entry {
    Eigen::Index row;
    Eigen::Index col;
    Complex value;
  };
  static SparseOperator from_entries(Eigen::Index dim, std::vector<Entry> entries);

  Eigen::Index dim_ = 0;
  std::vector<Eigen::Index> row_ptr_{0};
  std::vector<Eigen::Index> cols_;
  std::vector<Complex> values_;
};

}  // namespace spinshield
