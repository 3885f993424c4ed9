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

#include "nsdpstab/almethod.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "nsdpstab/bb_minimize.hpp"

namespace nsdp {

namespace {

// [(1/rho) Zbar - X(x)]_+ - (1/rho) Zbar, the complementarity part of the
// progress measure.
SymMatrix complementarity_matrix(const NsdpProblem& p, std::span<const double> x,
                                 const SymMatrix& zbar, double rho) {
  SymMatrix x_mat(p.cone_dim());
  p.eval_X(x, x_mat);
  SymMatrix w = zbar;
  w.scale(1.0 / rho);
  SymMatrix v = w;
  v.add_scaled(x_mat, -1.0);
  v = psd_project(v);
  v.add_scaled(w, -1.0);
  return v;
}

double progress_measure(const NsdpProblem& p, std::span<const double> x,
                        const SymMatrix& zbar, double rho) {
  double gnorm = 0.0;
  if (p.num_eq() > 0) {
    Vec g(p.num_eq());
    p.eval_g(x, g);
    gnorm = norm2(g);
  }
  return std::max(gnorm, frob_norm(complementarity_matrix(p, x, zbar, rho)));
}

// Eigenvalue-based approximate optimality test: gradient and feasibility
// residuals within eps, eigenbases of X(x) and Z aligned within eps, and
// every eigenvalue of X(x) above eps paired with a Z eigenvalue of
// magnitude at most eps. Bases are ordered by descending eigenvalue with
// deterministic sign normalization.
bool eig_optimality_test(const NsdpProblem& p, const Triplet& v, double eps) {
  Vec gl(p.num_vars());
  grad_x_lagrangian(p, v, gl);
  if (norm2(gl) > eps) return false;

  double gnorm = 0.0;
  if (p.num_eq() > 0) {
    Vec g(p.num_eq());
    p.eval_g(v.x, g);
    gnorm = norm2(g);
  }
  SymMatrix x_mat(p.cone_dim());
  p.eval_X(v.x, x_mat);
  EigenDecomposition ex = eig_sym(x_mat);
  double neg_mass = 0.0;
  for (double lam : ex.lambda) {
    const double ln = std::min(lam, 0.0);
    neg_mass += ln * ln;
  }
  if (gnorm + std::sqrt(neg_mass) > eps) return false;

  EigenDecomposition ez = eig_sym(v.z);
  normalize_eigvec_signs(ex.q);
  normalize_eigvec_signs(ez.q);

  double basis_gap = 0.0;
  for (int i = 0; i < ex.q.rows(); ++i)
    for (int j = 0; j < ex.q.cols(); ++j) {
      const double dv = ex.q(i, j) - ez.q(i, j);
      basis_gap += dv * dv;
    }
  if (std::sqrt(basis_gap) > eps) return false;

  for (int j = 0; j < p.cone_dim(); ++j)
    if (ex.lambda[j] > eps && std::abs(ez.lambda[j]) > eps) return false;
  return true;
}

}  // namespace

AlInnerResult al_inner_min(const NsdpProblem& p, std::span<const double> x_start,
                           const Vec& ybar, const SymMatrix& zbar, double rho,
                           const AlConfig& cfg) {
  require(rho > 0.0, "al_inner_min: rho must be positive");
  MeritContext ctx{1.0 / rho, ybar, zbar};
  MeritEvaluator eval(p, ctx);

  detail::BbSettings st;
  st.grad_tol = cfg.inner_tol;
  st.max_iters = cfg.inner_cap;

  AlInnerResult res;
  res.x.assign(x_start.begin(), x_start.end());
  const auto no_hook = [](int, const Vec&, double, const Vec&) { return false; };
  const detail::BbOutcome out = detail::bb_minimize(eval, res.x, st, no_hook);
  res.grad_norm = out.grad_norm;
  res.iterations = out.iterations;
  res.stalled = out.stop == detail::BbStop::Stalled || out.stop == detail::BbStop::IterCap;
  return res;
}

SolveResult al_solve(const NsdpProblem& p, const Triplet& v0, const AlConfig& cfg,
                     const IterationObserver& observer) {
  const int n = p.num_vars();
  const int m = p.num_eq();
  const int d = p.cone_dim();
  require_dims(int(v0.x.size()) == n && int(v0.y.size()) == m && v0.z.dim() == d,
               "al_solve: initial triplet dimensions mismatch");
  require(cfg.rho0 > 0.0, "al_solve: rho0 must be positive");
  check_finite(v0.x, "initial x");

  SolveResult out;
  Vec x = v0.x;
  Vec y = v0.y;          // unsafeguarded estimates, reported
  SymMatrix z = v0.z;
  Vec ybar = y;          // safeguarded estimates, drive the subproblems
  box_project(ybar, cfg.ymax);
  SymMatrix zbar = spectral_box_project(z, cfg.zmax);
  double rho = cfg.rho0;

  Triplet v{x, y, z};
  ResidualReport rep = residuals(p, v, cfg.kappa);
  double u_prev = progress_measure(p, x, zbar, rho);

  const auto finalize = [&](TerminationCode code, bool eig_stop) {
    out.v = Triplet{x, y, z};
    out.final_residuals = rep;

    TerminationStatus& st = out.status;
    st.code = code;
    st.al_eig_test = eig_stop;

    Vec gh(n);
    grad_h(p, x, gh);
    st.grad_h_norm = norm2(gh);
    st.h_stationary = st.grad_h_norm <= cfg.h_stat_tol;
    if (code == TerminationCode::MaxIterations && rep.r_v >= cfg.classify_feas_min &&
        st.h_stationary)
      st.code = TerminationCode::FeasibilityStationary;

    st.diag = akkt_takkt_diagnostics(p, {out.v}, cfg.diag_eps);
  };

  for (int k = 0;; ++k) {
    if (rep.r <= cfg.eps) {
      finalize(TerminationCode::ResidualConverged, false);
      return out;
    }
    if (eig_optimality_test(p, v, cfg.eps)) {
      finalize(TerminationCode::ResidualConverged, true);
      return out;
    }
    if (k >= cfg.k_max) {
      finalize(TerminationCode::MaxIterations, false);
      return out;
    }

    const auto t0 = std::chrono::steady_clock::now();

    const AlInnerResult inner = al_inner_min(p, x, ybar, zbar, rho, cfg);
    const Vec& x_next = inner.x;
    check_finite(x_next, "penalty minimizer iterate");

    const double u_next = progress_measure(p, x_next, zbar, rho);
    const double rho_used = rho;
    if (u_next > cfg.tau_dec * u_prev) rho *= cfg.rho_growth;

    Vec g(m);
    if (m > 0) p.eval_g(x_next, g);
    SymMatrix x_mat(d);
    p.eval_X(x_next, x_mat);

    for (int j = 0; j < m; ++j) y[j] = ybar[j] - rho_used * g[j];
    SymMatrix w = zbar;
    w.add_scaled(x_mat, -rho_used);
    z = psd_project(w);

    ybar = y;
    box_project(ybar, cfg.ymax);
    zbar = spectral_box_project(z, cfg.zmax);

    x = x_next;
    u_prev = u_next;
    v = Triplet{x, y, z};
    rep = residuals(p, v, cfg.kappa);

    IterationRecord recd;
    recd.k = k + 1;
    recd.x = x;
    recd.y_norm = norm2(y);
    recd.z_fnorm = frob_norm(z);
    recd.sigma = 1.0 / rho_used;
    recd.r_v = rep.r_v;
    recd.r_o = rep.r_o;
    recd.r = rep.r;
    recd.merit_f = merit_F(p, x, MeritContext{1.0 / rho_used, ybar, zbar});
    recd.kind = IterateKind::F;
    recd.inner_iters = inner.iterations;
    recd.inner_stalled = inner.stalled;
    recd.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.log.push_back(recd);
    if (observer) observer(out.log.back(), v);
  }
}

}  // namespace nsdp
