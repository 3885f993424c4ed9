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

#include "nsdpstab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace nsdp {

void matvec(const Matrix& a, std::span<const double> x, std::span<double> y) {
  require_dims(int(x.size()) == a.cols() && int(y.size()) == a.rows(), "matvec: shape mismatch");
  for (int i = 0; i < a.rows(); ++i)
    y[i] = kernels::dot(a.row(i), x.data(), x.size());
}

void matvec_t(const Matrix& a, std::span<const double> x, std::span<double> y) {
  require_dims(int(x.size()) == a.rows() && int(y.size()) == a.cols(), "matvec_t: shape mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  for (int i = 0; i < a.rows(); ++i)
    kernels::axpy(x[i], a.row(i), y.data(), y.size());
}

void add_ata(Matrix& c, const Matrix& a, double alpha) {
  require_dims(c.rows() == a.cols() && c.cols() == a.cols(), "add_ata: shape mismatch");
  for (int k = 0; k < a.rows(); ++k) {
    const double* rk = a.row(k);
    for (int i = 0; i < a.cols(); ++i) {
      const double w = alpha * rk[i];
      if (w != 0.0) kernels::axpy(w, rk, c.row(i), a.cols());
    }
  }
}

double quad_form(const Matrix& a, std::span<const double> x) {
  require_dims(a.rows() == a.cols() && int(x.size()) == a.rows(), "quad_form: shape mismatch");
  double acc = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    acc += x[i] * kernels::dot(a.row(i), x.data(), x.size());
  return acc;
}

bool cholesky_in_place(Matrix& a, double rel_tol) {
  require_dims(a.rows() == a.cols(), "cholesky: matrix not square");
  const int n = a.rows();
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
  const double pivot_floor = rel_tol * std::max(max_diag, 1e-300);

  for (int j = 0; j < n; ++j) {
    double d = a(j, j) - kernels::dot(a.row(j), a.row(j), j);
    if (!(d > pivot_floor)) return false;
    d = std::sqrt(d);
    a(j, j) = d;
    for (int i = j + 1; i < n; ++i)
      a(i, j) = (a(i, j) - kernels::dot(a.row(i), a.row(j), j)) / d;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a(i, j) = 0.0;
  return true;
}

void cholesky_solve_in_place(const Matrix& l, std::span<double> b) {
  require_dims(l.rows() == l.cols() && int(b.size()) == l.rows(),
               "cholesky_solve: shape mismatch");
  const int n = l.rows();
  for (int i = 0; i < n; ++i)
    b[i] = (b[i] - kernels::dot(l.row(i), b.data(), i)) / l(i, i);
  for (int i = n - 1; i >= 0; --i) {
    double acc = b[i];
    for (int k = i + 1; k < n; ++k) acc -= l(k, i) * b[k];
    b[i] = acc / l(i, i);
  }
}

}  // namespace nsdp
