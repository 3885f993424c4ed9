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

#include "nsdpstab/sqsdp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace nsdp {

const char* termination_code_name(TerminationCode c) {
  switch (c) {
    case TerminationCode::ResidualConverged: return "ResidualConverged";
    case TerminationCode::GammaConverged: return "GammaConverged";
    case TerminationCode::MaxIterations: return "MaxIterations";
    case TerminationCode::FeasibilityStationary: return "FeasibilityStationary";
    case TerminationCode::InnerSolverFailure: return "InnerSolverFailure";
  }
  return "Unknown";
}

LineSearchResult line_search(const NsdpProblem& p, std::span<const double> x,
                             std::span<const double> dir, const MeritContext& ctx,
                             const SqsdpConfig& cfg, double f0, double grad_dot_dir) {
  const std::size_t n = x.size();
  require_dims(dir.size() == n, "line_search: direction size mismatch");

  LineSearchResult res;
  res.delta = std::max(grad_dot_dir, -cfg.omega * kernels::sum_sq(dir.data(), n));

  Vec trial(n);
  double step = 1.0;
  for (int ell = 0; ell <= cfg.ls_cap; ++ell, step *= cfg.beta) {
    for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + step * dir[i];
    const double ft = merit_F(p, trial, ctx);
    if (std::isfinite(ft) && ft <= f0 + cfg.tau * step * res.delta) {
      res.ell = ell;
      res.f_new = ft;
      res.step = step;
      return res;
    }
  }
  throw Error("line_search: backtracking cap exceeded");
}

double sigma_update(double sigma, double r_next, bool m_test_passed, double sigma_floor) {
  require(sigma > 0.0, "sigma_update: sigma must be positive");
  require(r_next >= 0.0, "sigma_update: residual must be nonnegative");
  if (!m_test_passed) return sigma;
  const double candidate = std::min(0.5 * sigma, std::pow(r_next, 1.5));
  return std::max(candidate, sigma_floor);
}

Matrix choose_H(const NsdpProblem& p, const Triplet& v, const SqsdpConfig& cfg) {
  const int n = p.num_vars();
  switch (cfg.hessian_mode) {
    case HessianMode::Identity:
      return Matrix::identity(n);
    case HessianMode::User: {
      require(bool(cfg.user_hessian), "choose_H: user mode without a callback");
      Matrix h(n, n);
      cfg.user_hessian(p, v, h);
      return h;
    }
    case HessianMode::Lagrangian:
    default: {
      if (!p.has_hess_lagrangian()) return Matrix::identity(n);
      Matrix h(n, n);
      p.hess_lagrangian(v.x, v.y, v.z, h);
      return h;
    }
  }
}

ModifyReport modify_M(Matrix& m) {
  require_dims(m.rows() == m.cols(), "modify_M: matrix not square");
  ModifyReport rep;
  Matrix probe = m;
  if (cholesky_in_place(probe)) return rep;

  const int n = m.rows();
  SymMatrix sym(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) sym.at(i, j) = 0.5 * (m(i, j) + m(j, i));
  const double lam_min = min_eig(sym);

  rep.modified = true;
  rep.mu = std::abs(lam_min) + 1e-5;
  for (int i = 0; i < n; ++i) m(i, i) += rep.mu;
  return rep;
}

namespace {

struct StopDecision {
  bool stop = false;
  TerminationCode code = TerminationCode::MaxIterations;
};

StopDecision check_stop(const ResidualReport& rep, double gamma, int k,
                        const SqsdpConfig& cfg) {
  if (rep.r <= cfg.r_tol) return {true, TerminationCode::ResidualConverged};
  if (gamma <= cfg.gamma_tol) return {true, TerminationCode::GammaConverged};
  if (k >= cfg.k_max) return {true, TerminationCode::MaxIterations};
  return {};
}

}  // namespace

SolveResult solve(const NsdpProblem& p, const Triplet& v0, const SqsdpConfig& cfg,
                  const IterationObserver& observer) {
  const int n = p.num_vars();
  const int m = p.num_eq();
  const int d = p.cone_dim();
  require_dims(int(v0.x.size()) == n && int(v0.y.size()) == m && v0.z.dim() == d,
               "solve: initial triplet dimensions mismatch");
  require(cfg.sigma0 > 0.0 && cfg.gamma0 > 0.0 && cfg.phi0 > 0.0 && cfg.psi0 > 0.0,
          "solve: initial targets must be positive");
  require(min_eig(v0.z) >= -1e-10 * std::max(1.0, frob_norm(v0.z)),
          "solve: initial Z must be positive semidefinite");
  check_finite(v0.x, "initial x");

  SolveResult out;
  Vec x = v0.x;
  VomfState state;
  state.y = v0.y;
  state.z = v0.z;
  state.phi = cfg.phi0;
  state.psi = cfg.psi0;
  state.gamma = cfg.gamma0;
  double sigma = cfg.sigma0;

  VomfParams vparams;
  vparams.kappa = cfg.kappa;
  vparams.ymax = cfg.ymax;
  vparams.zmax = cfg.zmax;

  Triplet v{x, state.y, state.z};
  ResidualReport rep = residuals(p, v, cfg.kappa);

  const auto finalize = [&](TerminationCode code, const std::string& message) {
    out.v = Triplet{x, state.y, state.z};
    out.final_residuals = rep;

    TerminationStatus& st = out.status;
    st.code = code;
    st.message = message;

    Vec gh(n);
    grad_h(p, x, gh);
    st.grad_h_norm = norm2(gh);
    st.h_stationary = st.grad_h_norm <= cfg.h_stat_tol;

    if ((code == TerminationCode::GammaConverged || code == TerminationCode::MaxIterations) &&
        rep.r_v >= cfg.classify_feas_min && st.h_stationary)
      st.code = TerminationCode::FeasibilityStationary;

    st.diag = akkt_takkt_diagnostics(p, {out.v}, cfg.diag_eps);
  };

  for (int k = 0;; ++k) {
    const StopDecision dec = check_stop(rep, state.gamma, k, cfg);
    if (dec.stop) {
      finalize(dec.code, "");
      return out;
    }

    const auto t0 = std::chrono::steady_clock::now();

    MeritContext ctx{sigma, state.y, state.z};
    Vec grad_f_merit(n);
    const double f_k = merit_F_grad(p, x, ctx, grad_f_merit);
    check_finite(f_k, "merit value at the current iterate");
    check_finite(grad_f_merit, "merit gradient at the current iterate");
    const double grad_norm = norm2(grad_f_merit);

    Vec x_next(n);
    Vec ybar(m);
    SymMatrix zbar(d);
    double merit_accepted = f_k;
    double step_size = 0.0;
    int inner_iters = 0;
    bool inner_at_tolerance = false;

    if (grad_norm <= cfg.grad_f_zero_tol) {
      // Multiplier-only step: the merit function is already stationary
      // at x under the current penalty.
      x_next = x;
      if (m > 0) {
        Vec g(m);
        p.eval_g(x, g);
        for (int j = 0; j < m; ++j) ybar[j] = state.y[j] - g[j] / sigma;
      }
      SymMatrix x_mat(d);
      p.eval_X(x, x_mat);
      SymMatrix w = state.z;
      w.add_scaled(x_mat, -1.0 / sigma);
      zbar = psd_project(w);
    } else {
      Matrix h = choose_H(p, Triplet{x, state.y, state.z}, cfg);
      SubproblemData sub = build_subproblem(p, Triplet{x, state.y, state.z}, sigma, h);
      modify_M(sub.m_mat);

      InnerResult inner;
      try {
        inner = inner_solve(sub, cfg.trunc, grad_f_merit);
      } catch (const InnerSolverError& e) {
        finalize(TerminationCode::InnerSolverFailure, e.what());
        return out;
      }
      inner_iters = inner.iterations;
      inner_at_tolerance = inner.status == InnerStatus::ToleranceReached;

      MultiplierRecovery rec =
          recover_multipliers(p, Triplet{x, state.y, state.z}, sub, inner.iterate);
      ybar = std::move(rec.ybar);
      zbar = std::move(rec.zbar);

      const double gdotp = dot(grad_f_merit, rec.p);
      const LineSearchResult ls = line_search(p, x, rec.p, ctx, cfg, f_k, gdotp);
      step_size = ls.step;
      merit_accepted = ls.f_new;
      for (int i = 0; i < n; ++i) x_next[i] = x[i] + ls.step * rec.p[i];
    }
    check_finite(x_next, "accepted iterate");

    // Merit gradient at the new point under the old multipliers; shared
    // by the projection branch of the state machine and the penalty test.
    Vec grad_f_next(n);
    grad_merit_F(p, x_next, ctx, grad_f_next);
    const bool m_test = norm2(grad_f_next) <= state.gamma;

    const Triplet vbar{x_next, ybar, zbar};
    const VomfOutcome vo = vomf_step(p, vbar, state, sigma, vparams, grad_f_next);

    x = x_next;
    v = Triplet{x, state.y, state.z};
    rep = residuals(p, v, cfg.kappa);
    sigma = sigma_update(sigma, rep.r, m_test, cfg.sigma_floor);

    IterationRecord recd;
    recd.k = k + 1;
    recd.x = x;
    recd.y_norm = norm2(state.y);
    recd.z_fnorm = frob_norm(state.z);
    recd.sigma = sigma;
    recd.phi = state.phi;
    recd.psi = state.psi;
    recd.gamma = state.gamma;
    recd.r_v = rep.r_v;
    recd.r_o = rep.r_o;
    recd.r = rep.r;
    recd.merit_f = merit_accepted;
    recd.step_size = step_size;
    recd.kind = vo.kind;
    recd.inner_iters = inner_iters;
    recd.inner_stalled = inner_at_tolerance;
    recd.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.log.push_back(recd);
    if (observer) observer(out.log.back(), v);
  }
}

}  // namespace nsdp
