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

#include "nsdpstab/model.hpp"

#include <cmath>

namespace nsdp {

void NsdpProblem::hess_lagrangian(std::span<const double>, std::span<const double>,
                                  const SymMatrix&, Matrix&) const {
  throw Error("hess_lagrangian: not provided by this problem");
}

Triplet make_zero_triplet(const NsdpProblem& p) {
  Triplet v;
  v.x.assign(p.num_vars(), 0.0);
  v.y.assign(p.num_eq(), 0.0);
  v.z = SymMatrix(p.cone_dim());
  return v;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string("non-finite value from ") + what);
}

void check_finite(std::span<const double> v, const char* what) {
  if (!all_finite(v)) throw NumericalError(std::string("non-finite value from ") + what);
}

double lagrangian(const NsdpProblem& p, const Triplet& v) {
  double val = p.eval_f(v.x);
  if (p.num_eq() > 0) {
    Vec g(p.num_eq());
    p.eval_g(v.x, g);
    val -= dot(g, v.y);
  }
  SymMatrix x_mat(p.cone_dim());
  p.eval_X(v.x, x_mat);
  val -= frob_inner(x_mat, v.z);
  return val;
}

void grad_x_lagrangian(const NsdpProblem& p, const Triplet& v, std::span<double> out) {
  const int n = p.num_vars();
  require_dims(int(out.size()) == n, "grad_x_lagrangian: output size mismatch");
  p.grad_f(v.x, out);
  if (p.num_eq() > 0) {
    Matrix jg(p.num_eq(), n);
    p.jac_g(v.x, jg);
    for (int j = 0; j < p.num_eq(); ++j) kernels::axpy(-v.y[j], jg.row(j), out.data(), n);
  }
  Vec adj(n);
  p.apply_A_adj(v.x, v.z, adj);
  axpy(-1.0, adj, out);
}

ResidualReport residuals(const NsdpProblem& p, const Triplet& v, double kappa) {
  ResidualReport rep;

  double gnorm = 0.0;
  if (p.num_eq() > 0) {
    Vec g(p.num_eq());
    p.eval_g(v.x, g);
    gnorm = norm2(g);
  }
  SymMatrix x_mat(p.cone_dim());
  p.eval_X(v.x, x_mat);
  rep.r_v = gnorm + std::max(-min_eig(x_mat), 0.0);

  Vec gl(p.num_vars());
  grad_x_lagrangian(p, v, gl);
  rep.r_o = norm2(gl) + std::abs(frob_inner(x_mat, v.z));

  rep.r = rep.r_v + rep.r_o;
  rep.phi = rep.r_v + kappa * rep.r_o;
  rep.psi = kappa * rep.r_v + rep.r_o;
  return rep;
}

double feasibility_h(const NsdpProblem& p, std::span<const double> x) {
  double val = 0.0;
  if (p.num_eq() > 0) {
    Vec g(p.num_eq());
    p.eval_g(x, g);
    val += 0.5 * kernels::sum_sq(g.data(), g.size());
  }
  SymMatrix x_mat(p.cone_dim());
  p.eval_X(x, x_mat);
  x_mat.scale(-1.0);
  const SymMatrix neg_part = psd_project(x_mat);
  const double fn = frob_norm(neg_part);
  return val + 0.5 * fn * fn;
}

void grad_h(const NsdpProblem& p, std::span<const double> x, std::span<double> out) {
  const int n = p.num_vars();
  require_dims(int(out.size()) == n, "grad_h: output size mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  if (p.num_eq() > 0) {
    Vec g(p.num_eq());
    p.eval_g(x, g);
    Matrix jg(p.num_eq(), n);
    p.jac_g(x, jg);
    for (int j = 0; j < p.num_eq(); ++j) kernels::axpy(g[j], jg.row(j), out.data(), n);
  }
  SymMatrix x_mat(p.cone_dim());
  p.eval_X(x, x_mat);
  x_mat.scale(-1.0);
  const SymMatrix neg_part = psd_project(x_mat);
  Vec adj(n);
  p.apply_A_adj(x, neg_part, adj);
  axpy(-1.0, adj, out);
}

OptimalityDiagnostics akkt_takkt_diagnostics(const NsdpProblem& p,
                                             const std::vector<Triplet>& history,
                                             double eps) {
  require(!history.empty(), "akkt_takkt_diagnostics: empty history");
  const Triplet& v = history.back();
  OptimalityDiagnostics diag;

  Vec gl(p.num_vars());
  grad_x_lagrangian(p, v, gl);
  diag.grad_lag_norm = norm2(gl);

  SymMatrix x_mat(p.cone_dim());
  p.eval_X(v.x, x_mat);
  diag.trace_comp = std::abs(frob_inner(x_mat, v.z));

  double gnorm = 0.0;
  if (p.num_eq() > 0) {
    Vec g(p.num_eq());
    p.eval_g(v.x, g);
    gnorm = norm2(g);
  }

  const EigenDecomposition ex = eig_sym(x_mat);
  diag.x_eigs = ex.lambda;
  diag.feas_viol = gnorm + std::max(-ex.lambda.back(), 0.0);

  // Z rotated into the eigenbasis of X(x); diagonal entries are the
  // paired eigenvalue estimates.
  const int d = p.cone_dim();
  diag.z_paired_eigs.assign(d, 0.0);
  Vec zq(d);
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      double acc = 0.0;
      for (int j = 0; j < d; ++j) acc += v.z(i, j) * ex.q(j, k);
      zq[i] = acc;
    }
    double qk_zq = 0.0;
    for (int i = 0; i < d; ++i) qk_zq += ex.q(i, k) * zq[i];
    diag.z_paired_eigs[k] = qk_zq;
  }

  diag.eig_complementarity = true;
  for (int k = 0; k < d; ++k)
    if (diag.x_eigs[k] > eps && std::abs(diag.z_paired_eigs[k]) > eps)
      diag.eig_complementarity = false;

  const bool feasible = diag.feas_viol <= eps;
  const bool stationary = diag.grad_lag_norm <= eps;
  diag.takkt_consistent = feasible && stationary && diag.trace_comp <= eps;
  diag.akkt_consistent = feasible && stationary && diag.eig_complementarity;
  return diag;
}

}  // namespace nsdp
