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

#include "nsdpstab/merit.hpp"

#include <algorithm>
#include <cmath>

namespace nsdp {

MeritEvaluator::MeritEvaluator(const NsdpProblem& p, MeritContext ctx)
    : p_(p), ctx_(std::move(ctx)) {
  require(ctx_.sigma > 0.0, "MeritContext: sigma must be positive");
  require_dims(int(ctx_.y.size()) == p.num_eq() && ctx_.z.dim() == p.cone_dim(),
               "MeritContext: multiplier dimensions mismatch");
}

double MeritEvaluator::value(std::span<const double> x) {
  const int m = p_.num_eq();
  const double sigma = ctx_.sigma;

  double val = p_.eval_f(x);

  g_.resize(m);
  if (m > 0) p_.eval_g(x, g_);
  double eq_term = 0.0;
  for (int j = 0; j < m; ++j) {
    const double rj = sigma * ctx_.y[j] - g_[j];
    eq_term += rj * rj;
  }

  SymMatrix x_mat(p_.cone_dim());
  p_.eval_X(x, x_mat);
  SymMatrix w = ctx_.z;
  w.scale(sigma);
  w.add_scaled(x_mat, -1.0);
  ew_ = eig_sym(w);

  double cone_term = 0.0;
  for (double lam : ew_.lambda) {
    const double lp = std::max(lam, 0.0);
    cone_term += lp * lp;
  }

  x_cached_.assign(x.begin(), x.end());
  return val + (eq_term + cone_term) / (2.0 * sigma);
}

void MeritEvaluator::grad_of_cached(std::span<double> out) {
  const int n = p_.num_vars();
  const int m = p_.num_eq();
  const double sigma = ctx_.sigma;
  require_dims(int(out.size()) == n, "merit gradient: output size mismatch");
  require(int(x_cached_.size()) == n, "MeritEvaluator: no cached point");

  p_.grad_f(x_cached_, out);
  if (m > 0) {
    Matrix jg(m, n);
    p_.jac_g(x_cached_, jg);
    for (int j = 0; j < m; ++j)
      kernels::axpy(-(ctx_.y[j] - g_[j] / sigma), jg.row(j), out.data(), n);
  }
  Vec clipped(ew_.lambda);
  for (double& lam : clipped) lam = std::max(lam, 0.0) / sigma;
  const SymMatrix w_plus_scaled = reconstruct(ew_, clipped);
  Vec adj(n);
  p_.apply_A_adj(x_cached_, w_plus_scaled, adj);
  axpy(-1.0, adj, out);
}

double merit_F(const NsdpProblem& p, std::span<const double> x, const MeritContext& ctx) {
  MeritEvaluator eval(p, ctx);
  return eval.value(x);
}

void grad_merit_F(const NsdpProblem& p, std::span<const double> x, const MeritContext& ctx,
                  std::span<double> out) {
  MeritEvaluator eval(p, ctx);
  eval.value(x);
  eval.grad_of_cached(out);
}

double merit_F_grad(const NsdpProblem& p, std::span<const double> x, const MeritContext& ctx,
                    std::span<double> grad_out) {
  MeritEvaluator eval(p, ctx);
  const double val = eval.value(x);
  eval.grad_of_cached(grad_out);
  return val;
}

double aug_lagrangian(const NsdpProblem& p, const Triplet& v, double sigma) {
  MeritContext ctx{sigma, v.y, v.z};
  const double f = merit_F(p, v.x, ctx);
  const double zn = frob_norm(v.z);
  return f - 0.5 * sigma * (kernels::sum_sq(v.y.data(), v.y.size()) + zn * zn);
}

}  // namespace nsdp
