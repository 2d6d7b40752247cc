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

#include "spinshield/sparse_operator.hpp"

#include <algorithm>
#include <stdexcept>

namespace spinshield {

SparseOperator::SparseOperator(Eigen::Index dim) : dim_(dim), row_ptr_(dim + 1, 0) {}

SparseOperator SparseOperator::from_entries(Eigen::Index dim, std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseOperator out(dim);
  for (std::size_t k = 0; k < entries.size();) {
    const Entry& e = entries[k];
    Complex sum = e.value;
    std::size_t j = k + 1;
    while (j < entries.size() && entries[j].row == e.row && entries[j].col == e.col) {
      sum += entries[j].value;
      ++j;
    }
    if (sum != Complex{0.0, 0.0}) {
      out.cols_.push_back(e.col);
      out.values_.push_back(sum);
      ++out.row_ptr_[e.row + 1];
    }
    k = j;
  }
  for (Eigen::Index r = 0; r < dim; ++r) out.row_ptr_[r + 1] += out.row_ptr_[r];
  return out;
}

SparseOperator SparseOperator::from_dense(const ComplexMatrix& m, double drop_tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SparseOperator: matrix must be square");
  std::vector<Entry> entries;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (std::abs(m(r, c)) > drop_tol) entries.push_back({r, c, m(r, c)});
    }
  }
  return from_entries(m.rows(), std::move(entries));
}

SparseOperator SparseOperator::embedded(const ComplexMatrix& op, int site, int total_spins) {
  if (op.rows() != 2 || op.cols() != 2) {
    throw std::invalid_argument("SparseOperator::embedded: operator must be 2x2");
  }
  if (total_spins < 1 || total_spins > kMaxSpins || site < 1 || site > total_spins) {
    throw std::invalid_argument("SparseOperator::embedded: site out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << total_spins;
  const int bit = site_bit(site, total_spins);
  const Eigen::Index mask = Eigen::Index{1} << bit;
  std::vector<Entry> entries;
  for (Eigen::Index r = 0; r < dim; ++r) {
    const int rb = static_cast<int>((r >> bit) & 1);
    for (int cb = 0; cb < 2; ++cb) {
      const Complex v = op(rb, cb);
      if (v == Complex{0.0, 0.0}) continue;
      const Eigen::Index c = cb ? (r | mask) : (r & ~mask);
      entries.push_back({r, c, v});
    }
  }
  return from_entries(dim, std::move(entries));
}

SparseOperator SparseOperator::diagonal(const Eigen::VectorXcd& d) {
  std::vector<Entry> entries;
  for (Eigen::Index k = 0; k < d.size(); ++k) entries.push_back({k, k, d(k)});
  return from_entries(d.size(), std::move(entries));
}

ComplexMatrix SparseOperator::to_dense() const {
  ComplexMatrix m = ComplexMatrix::Zero(dim_, dim_);
  for (Eigen::Index r = 0; r < dim_; ++r) {
    for (Eigen::Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) m(r, cols_[k]) = values_[k];
  }
  return m;
}

SparseOperator SparseOperator::adjoint() const {
  std::vector<Entry> entries;
  entries.reserve(values_.size());
  for (Eigen::Index r = 0; r < dim_; ++r) {
    for (Eigen::Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      entries.push_back({cols_[k], r, std::conj(values_[k])});
    }
  }
  return from_entries(dim_, std::move(entries));
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("SparseOperator: dimension mismatch");
  std::vector<SparseOperator::Entry> entries;
  for (Eigen::Index r = 0; r < a.dim_; ++r) {
    for (Eigen::Index ka = a.row_ptr_[r]; ka < a.row_ptr_[r + 1]; ++ka) {
      const Eigen::Index mid = a.cols_[ka];
      for (Eigen::Index kb = b.row_ptr_[mid]; kb < b.row_ptr_[mid + 1]; ++kb) {
        entries.push_back({r, b.cols_[kb], a.values_[ka] * b.values_[kb]});
      }
    }
  }
  return SparseOperator::from_entries(a.dim_, std::move(entries));
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("SparseOperator: dimension mismatch");
  std::vector<SparseOperator::Entry> entries;
  for (const SparseOperator* op : {&a, &b}) {
    for (Eigen::Index r = 0; r < op->dim_; ++r) {
      for (Eigen::Index k = op->row_ptr_[r]; k < op->row_ptr_[r + 1]; ++k) {
        entries.push_back({r, op->cols_[k], op->values_[k]});
      }
    }
  }
  return SparseOperator::from_entries(a.dim_, std::move(entries));
}

SparseOperator operator*(Complex s, const SparseOperator& a) {
  SparseOperator out = a;
  for (auto& v : out.values_) v *= s;
  if (s == Complex{0.0, 0.0}) return SparseOperator(a.dim_);
  return out;
}

void SparseOperator::multiply_add(const ComplexMatrix& rho, ComplexMatrix& out,
                                  Complex coeff) const {
  const Eigen::Index n = rho.cols();
  for (Eigen::Index col = 0; col < n; ++col) {
    const Complex* src = rho.col(col).data();
    Complex* dst = out.col(col).data();
    for (Eigen::Index r = 0; r < dim_; ++r) {
      Complex acc{0.0, 0.0};
      for (Eigen::Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += values_[k] * src[cols_[k]];
      dst[r] += coeff * acc;
    }
  }
}

void SparseOperator::sandwich_add(const ComplexMatrix& rho, ComplexMatrix& out,
                                  double coeff) const {
  for (Eigen::Index b = 0; b < dim_; ++b) {
    const Eigen::Index b_begin = row_ptr_[b];
    const Eigen::Index b_end = row_ptr_[b + 1];
    if (b_begin == b_end) continue;
    Complex* dst = out.col(b).data();
    for (Eigen::Index a = 0; a < dim_; ++a) {
      const Eigen::Index a_begin = row_ptr_[a];
      const Eigen::Index a_end = row_ptr_[a + 1];
      if (a_begin == a_end) continue;
      Complex acc{0.0, 0.0};
      for (Eigen::Index kb = b_begin; kb < b_end; ++kb) {
        const Complex* src = rho.col(cols_[kb]).data();
        Complex partial{0.0, 0.0};
        for (Eigen::Index ka = a_begin; ka < a_end; ++ka) partial += values_[ka] * src[cols_[ka]];
        acc += partial * std::conj(values_[kb]);
      }
      dst[a] += coeff * acc;
    }
  }
}

}  // namespace spinshield
