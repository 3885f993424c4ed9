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

#ifndef NSDPSTAB_LINALG_HPP
#define NSDPSTAB_LINALG_HPP

#include <cmath>
#include <span>
#include <vector>

#include "nsdpstab/error.hpp"
#include "nsdpstab/kernels.hpp"

namespace nsdp {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  require_dims(a.size() == b.size(), "dot: size mismatch");
  return kernels::dot(a.data(), b.data(), a.size());
}

inline double norm2(std::span<const double> a) {
  return std::sqrt(kernels::sum_sq(a.data(), a.size()));
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require_dims(x.size() == y.size(), "axpy: size mismatch");
  kernels::axpy(alpha, x.data(), y.data(), x.size());
}

inline void scale(std::span<double> a, double alpha) {
  kernels::scale(a.data(), alpha, a.size());
}

inline bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, 0.0) {
    require_dims(rows >= 0 && cols >= 0, "Matrix: negative dimension");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

  double* row(int i) { return a_.data() + std::size_t(i) * cols_; }
  const double* row(int i) const { return a_.data() + std::size_t(i) * cols_; }
  std::span<const double> row_span(int i) const { return {row(i), std::size_t(cols_)}; }
  std::span<double> row_span(int i) { return {row(i), std::size_t(cols_)}; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }
  std::size_t size() const { return a_.size(); }

  void set_zero() { std::fill(a_.begin(), a_.end(), 0.0); }

  void add_scaled(const Matrix& b, double alpha) {
    require_dims(rows_ == b.rows_ && cols_ == b.cols_, "Matrix::add_scaled: shape mismatch");
    kernels::axpy(alpha, b.a_.data(), a_.data(), a_.size());
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

// y = A x
void matvec(const Matrix& a, std::span<const double> x, std::span<double> y);
// y = A^T x
void matvec_t(const Matrix& a, std::span<const double> x, std::span<double> y);
// C += alpha * A^T A  (C must be square with dim = A.cols())
void add_ata(Matrix& c, const Matrix& a, double alpha);

// x^T A x for square A.
double quad_form(const Matrix& a, std::span<const double> x);

// In-place lower Cholesky of a symmetric positive definite matrix.
// Returns false when a pivot falls below rel_tol * max diagonal.
bool cholesky_in_place(Matrix& a, double rel_tol = 1e-12);

// Solve L L^T x = b with the factor produced by cholesky_in_place;
// b is overwritten by x.
void cholesky_solve_in_place(const Matrix& l, std::span<double> b);

}  // namespace nsdp

#endif
