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

#include "nsdpstab/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nsdp {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2 = 0.7071067811865476;
constexpr double kJacobiTol = 1e-14;
constexpr int kJacobiMaxSweeps = 30;
}  // namespace

Vec svec(const SymMatrix& a) {
  Vec out(a.size());
  svec_into(a, out);
  return out;
}

void svec_into(const SymMatrix& a, std::span<double> out) {
  require_dims(out.size() == a.size(), "svec_into: size mismatch");
  const double* p = a.data();
  std::size_t k = 0;
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < i; ++j, ++k) out[k] = kSqrt2 * p[k];
    out[k] = p[k];
    ++k;
  }
}

int svec_side(std::size_t len) {
  const int d = int((std::sqrt(8.0 * double(len) + 1.0) - 1.0) / 2.0 + 0.5);
  require_dims(SymMatrix::packed_size(d) == len, "svec_side: length is not triangular");
  return d;
}

SymMatrix smat(std::span<const double> v) {
  SymMatrix out(svec_side(v.size()));
  smat_into(v, out);
  return out;
}

void smat_into(std::span<const double> v, SymMatrix& out) {
  require_dims(v.size() == out.size(), "smat_into: size mismatch");
  double* p = out.data();
  std::size_t k = 0;
  for (int i = 0; i < out.dim(); ++i) {
    for (int j = 0; j < i; ++j, ++k) p[k] = kInvSqrt2 * v[k];
    p[k] = v[k];
    ++k;
  }
}

double frob_inner(const SymMatrix& a, const SymMatrix& b) {
  require_dims(a.dim() == b.dim(), "frob_inner: dim mismatch");
  double acc = 2.0 * kernels::dot(a.data(), b.data(), a.size());
  for (int i = 0; i < a.dim(); ++i) {
    const std::size_t k = SymMatrix::index(i, i);
    acc -= a.data()[k] * b.data()[k];
  }
  return acc;
}

double frob_norm(const SymMatrix& a) {
  double acc = 2.0 * kernels::sum_sq(a.data(), a.size());
  for (int i = 0; i < a.dim(); ++i) {
    const double v = a.data()[SymMatrix::index(i, i)];
    acc -= v * v;
  }
  return std::sqrt(std::max(acc, 0.0));
}

namespace {

// Off-diagonal Frobenius mass of a full symmetric working matrix.
double off_diag_norm(const Matrix& w) {
  const int d = w.rows();
  double acc = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) acc += w(i, j) * w(i, j);
  return std::sqrt(2.0 * acc);
}

}  // namespace

EigenDecomposition eig_sym(const SymMatrix& a) {
  const int d = a.dim();
  EigenDecomposition e;
  e.q = Matrix::identity(d);
  e.lambda.assign(d, 0.0);
  if (d == 0) return e;

  Matrix w(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) w(i, j) = w(j, i) = a(i, j);

  const double anorm = frob_norm(a);
  const double stop = kJacobiTol * anorm;

  // Rows of qt are the eigenvectors; transposed into e.q at the end.
  Matrix qt = Matrix::identity(d);

  if (anorm > 0.0) {
    bool converged = off_diag_norm(w) <= stop;
    for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
      for (int p = 0; p < d - 1; ++p) {
        for (int q = p + 1; q < d; ++q) {
          const double apq = w(p, q);
          if (std::abs(apq) <= 1e-300) continue;
          const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
          const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;

          kernels::rot2(w.row(p), w.row(q), c, s, d);
          for (int i = 0; i < d; ++i) {
            const double vip = w(i, p);
            const double viq = w(i, q);
            w(i, p) = c * vip - s * viq;
            w(i, q) = s * vip + c * viq;
          }
          w(p, q) = w(q, p) = 0.0;
          kernels::rot2(qt.row(p), qt.row(q), c, s, d);
        }
      }
      converged = off_diag_norm(w) <= stop;
    }
    if (!converged)
      throw NumericalError("eig_sym: Jacobi sweeps exhausted, off-diagonal residual " +
                           std::to_string(off_diag_norm(w)));
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return w(i, i) > w(j, j); });

  for (int k = 0; k < d; ++k) {
    const int src = order[k];
    e.lambda[k] = w(src, src);
    for (int i = 0; i < d; ++i) e.q(i, k) = qt(src, i);
  }
  return e;
}

double min_eig(const SymMatrix& a) {
  require_dims(a.dim() > 0, "min_eig: empty matrix");
  const EigenDecomposition e = eig_sym(a);
  return e.lambda.back();
}

double max_eig(const SymMatrix& a) {
  require_dims(a.dim() > 0, "max_eig: empty matrix");
  const EigenDecomposition e = eig_sym(a);
  return e.lambda.front();
}

SymMatrix reconstruct(const EigenDecomposition& e, std::span<const double> lambda) {
  const int d = e.q.rows();
  require_dims(int(lambda.size()) == d, "reconstruct: lambda size mismatch");
  SymMatrix out(d);
  Vec col(d);
  for (int k = 0; k < d; ++k) {
    if (lambda[k] == 0.0) continue;
    for (int i = 0; i < d; ++i) col[i] = e.q(i, k);
    for (int i = 0; i < d; ++i) {
      const double w = lambda[k] * col[i];
      if (w != 0.0)
        kernels::axpy(w, col.data(), out.data() + SymMatrix::index(i, 0), std::size_t(i) + 1);
    }
  }
  return out;
}

SymMatrix psd_project(const SymMatrix& a) {
  EigenDecomposition e = eig_sym(a);
  Vec clipped(e.lambda);
  for (double& v : clipped) v = std::max(v, 0.0);
  return reconstruct(e, clipped);
}

SymMatrix spectral_box_project(const SymMatrix& a, double zmax) {
  require(zmax >= 0.0, "spectral_box_project: zmax must be nonnegative");
  EigenDecomposition e = eig_sym(a);
  Vec clipped(e.lambda);
  for (double& v : clipped) v = std::clamp(v, 0.0, zmax);
  return reconstruct(e, clipped);
}

void normalize_eigvec_signs(Matrix& q) {
  for (int k = 0; k < q.cols(); ++k) {
    for (int i = 0; i < q.rows(); ++i) {
      if (q(i, k) != 0.0) {
        if (q(i, k) < 0.0)
          for (int r = 0; r < q.rows(); ++r) q(r, k) = -q(r, k);
        break;
      }
    }
  }
}

}  // namespace nsdp
