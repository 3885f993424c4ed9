/*
 * Copyright 2026 The nsdp-stab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef NSDPSTAB_SYMMAT_HPP
#define NSDPSTAB_SYMMAT_HPP

#include <span>
#include <vector>

#include "nsdpstab/linalg.hpp"

namespace nsdp {

// Dense real symmetric matrix, packed lower triangle stored row by row:
// (0,0), (1,0), (1,1), (2,0), (2,1), (2,2), ...
//
// The packed layout coincides with the ordering of the symmetric
// vectorization svec, which carries a sqrt(2) factor on off-diagonal
// entries so that <svec(A), svec(B)> equals the Frobenius inner product.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int d) : dim_(d), a_(packed_size(d), 0.0) {
    require_dims(d >= 0, "SymMatrix: negative dimension");
  }

  static SymMatrix identity(int d) {
    SymMatrix m(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
  }

  static SymMatrix diag(std::span<const double> v) {
    SymMatrix m(int(v.size()));
    for (int i = 0; i < m.dim_; ++i) m.at(i, i) = v[i];
    return m;
  }

  static std::size_t packed_size(int d) { return std::size_t(d) * (d + 1) / 2; }

  int dim() const { return dim_; }
  std::size_t size() const { return a_.size(); }

  // Symmetric read access.
  double operator()(int i, int j) const {
    return i >= j ? a_[index(i, j)] : a_[index(j, i)];
  }

  // Writable access to the stored (lower) triangle; i >= j required.
  double& at(int i, int j) { return a_[index(i, j)]; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }
  std::span<const double> packed() const { return a_; }
  std::span<double> packed() { return a_; }

  void set_zero() { std::fill(a_.begin(), a_.end(), 0.0); }

  void add_scaled(const SymMatrix& b, double alpha) {
    require_dims(dim_ == b.dim_, "SymMatrix::add_scaled: dim mismatch");
    kernels::axpy(alpha, b.a_.data(), a_.data(), a_.size());
  }

  void scale(double alpha) { kernels::scale(a_.data(), alpha, a_.size()); }

  static std::size_t index(int i, int j) {
    return std::size_t(i) * (i + 1) / 2 + j;
  }

 private:
  int dim_ = 0;
  std::vector<double> a_;
};

struct EigenDecomposition {
  // Columns of q are eigenvectors; lambda sorted descending, ties kept
  // in sweep order (stable).
  Matrix q;
  Vec lambda;
};

// Symmetric vectorization: diagonal entries verbatim, off-diagonal
// entries scaled by sqrt(2), ordered like the packed triangle.
Vec svec(const SymMatrix& a);
void svec_into(const SymMatrix& a, std::span<double> out);
SymMatrix smat(std::span<const double> v);
void smat_into(std::span<const double> v, SymMatrix& out);

// Side length d with d*(d+1)/2 == len; throws DimensionError otherwise.
int svec_side(std::size_t len);

double frob_inner(const SymMatrix& a, const SymMatrix& b);
double frob_norm(const SymMatrix& a);

// Cyclic Jacobi eigendecomposition. Terminates when the off-diagonal
// Frobenius mass falls below 1e-14 * ||A||_F; throws NumericalError if
// that has not happened after 30 sweeps.
EigenDecomposition eig_sym(const SymMatrix& a);

double min_eig(const SymMatrix& a);
double max_eig(const SymMatrix& a);

// Projection onto the positive semidefinite cone (eigenvalue clipping).
SymMatrix psd_project(const SymMatrix& a);

// Projection onto {Z : O <= Z <= zmax * I} (eigenvalues clamped to [0, zmax]).
SymMatrix spectral_box_project(const SymMatrix& a, double zmax);

// Rebuild q * diag(lambda) * q^T.
SymMatrix reconstruct(const EigenDecomposition& e, std::span<const double> lambda);

// Flip eigenvector signs so the first nonzero component of each column
// is positive. Deterministic column orientation for basis comparisons.
void normalize_eigvec_signs(Matrix& q);

}  // namespace nsdp

#endif
