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

#include "nsdpstab/qsdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "nsdpstab/kernels.hpp"

namespace nsdp {

namespace {

// Reduced objective in the scaled variable u = xi / sigma, in which
//
//   q(sigma u) = sigma * qs(u),
//   qs(u) = <c, u> + (sigma/2) <M u, u> + (1/2) || [T - A(x) u]_+ ||_F^2,
//
// so W needs no 1/sigma amplification and the scaled Hessian
// sigma M + A* D A stays bounded as sigma -> 0. The u-gradient of qs
// coincides with grad q at xi = sigma u, so tolerance and truncation
// quantities keep their meaning verbatim. value() caches the
// eigendecomposition of W(u) = T - A(x) u for the gradient and the dual
// blocks at the accepted point.
class ReducedEval {
 public:
  explicit ReducedEval(const SubproblemData& sub)
      : sub_(sub),
        n_(sub.prob->num_vars()),
        dim_(sub.prob->cone_dim()),
        mu_(n_),
        a_u_(dim_),
        w_(dim_) {}

  // qs at the scaled point; q(sigma u) = sigma * value(u).
  double value(std::span<const double> u) {
    matvec(sub_.m_mat, u, mu_);
    sub_.prob->apply_A(sub_.x, u, a_u_);
    w_ = sub_.t;
    w_.add_scaled(a_u_, -1.0);
    w_fnorm_ = frob_norm(w_);
    ew_ = eig_sym(w_);
    have_w_plus_ = false;

    double cone = 0.0;
    for (double lam : ew_.lambda) {
      const double lp = std::max(lam, 0.0);
      cone += lp * lp;
    }
    return dot(sub_.c, u) + 0.5 * sub_.sigma * dot(mu_, u) + 0.5 * cone;
  }

  // Unit-roundoff scale of grad qs: the eigendecomposition behind the
  // projection carries an absolute error of order eig_tol * ||W||_F per
  // eigenvalue, so gradient norms below this are numerical noise. sigma
  // near zero inflates ||W|| like ||X||/sigma and makes this the binding
  // accuracy limit.
  double grad_noise_floor() const { return dim_ * 1e-14 * (1.0 + w_fnorm_); }

  // grad qs(u) = grad q(sigma u).
  void grad_of_cached(std::span<double> out) {
    const SymMatrix& wp = w_plus();
    sub_.prob->apply_A_adj(sub_.x, wp, out);
    for (int i = 0; i < n_; ++i) out[i] = sub_.c[i] + sub_.sigma * mu_[i] - out[i];
  }

  // M xi at xi = sigma u.
  void m_xi_of_cached(std::span<double> out) const {
    for (int i = 0; i < n_; ++i) out[i] = sub_.sigma * mu_[i];
  }

  const SymMatrix& w_plus() {
    if (!have_w_plus_) {
      Vec clipped(ew_.lambda);
      for (double& lam : clipped) lam = std::max(lam, 0.0);
      w_plus_ = reconstruct(ew_, clipped);
      have_w_plus_ = true;
    }
    return w_plus_;
  }

  const SymMatrix& w() const { return w_; }
  const EigenDecomposition& eig() const { return ew_; }

 private:
  const SubproblemData& sub_;
  int n_;
  int dim_;
  Vec mu_;
  SymMatrix a_u_;
  SymMatrix w_;
  double w_fnorm_ = 0.0;
  EigenDecomposition ew_;
  SymMatrix w_plus_;
  bool have_w_plus_ = false;
};

void validate_sub(const SubproblemData& sub) {
  require(sub.prob != nullptr, "SubproblemData: missing problem");
  require(sub.sigma > 0.0, "SubproblemData: sigma must be positive");
}

// Dual blocks at the cached scaled point u.
InnerIterate materialize(const SubproblemData& sub, std::span<const double> u,
                         ReducedEval& eval) {
  InnerIterate it;
  it.xi.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) it.xi[i] = sub.sigma * u[i];
  it.sigma_mat = eval.w_plus();
  it.lambda_mat = it.sigma_mat;
  it.eta.resize(sub.prob->num_vars());
  eval.grad_of_cached(it.eta);
  it.theta = SymMatrix(sub.t.dim());
  it.omega = it.sigma_mat;
  it.omega.add_scaled(eval.w(), -1.0);
  it.omega.scale(sub.sigma);
  return it;
}

struct TruncationCheck {
  bool pass = false;
  double lhs = 0.0;
};

TruncationCheck check_truncation(const SubproblemData& sub, std::span<const double> xi,
                                 const Vec& mxi, const SymMatrix& sigma_mat,
                                 std::span<const double> eta,
                                 std::span<const double> grad_f_outer,
                                 const TruncationParams& params) {
  TruncationCheck chk;
  chk.lhs = dot(grad_f_outer, xi);
  SymMatrix diff = sigma_mat;
  diff.add_scaled(sub.t_plus, -1.0);
  const double dn = frob_norm(diff);
  const double rhs = -params.c1 * dot(mxi, xi) - params.c1 * sub.sigma * dn * dn;
  chk.pass = chk.lhs <= rhs && norm2(eta) <= params.c2 * std::abs(chk.lhs);
  return chk;
}

// Semismooth Newton direction for qs at the cached scaled point. The
// generalized Hessian is sigma M + A* D A with D the derivative of the
// PSD projection at W: in the eigenbasis of W it multiplies entry (a, b)
// by
//
//   omega_ab = 1                              lam_a, lam_b > 0
//            = lam_a / (lam_a - lam_b)        lam_a > 0 >= lam_b
//            = 0                              lam_a, lam_b <= 0,
//
// so with E_i = sqrt(omega) o (Q^T A(x) e_i Q) the cone block is the Gram
// matrix <E_l, E_i>. Returns false if no ridge shift makes the
// factorization succeed.
bool newton_direction(const SubproblemData& sub, ReducedEval& eval,
                      std::span<const double> grad, Vec& dir) {
  const int n = sub.prob->num_vars();
  const int d = sub.prob->cone_dim();
  const EigenDecomposition& ew = eval.eig();

  Matrix sqrt_w(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const double la = ew.lambda[a];
      const double lb = ew.lambda[b];
      double w = 0.0;
      if (la > 0.0 && lb > 0.0)
        w = 1.0;
      else if (la > 0.0)
        w = la / (la - lb);
      else if (lb > 0.0)
        w = lb / (lb - la);
      sqrt_w(a, b) = std::sqrt(w);
    }

  Matrix e(d * d, n);
  Vec unit(n, 0.0);
  SymMatrix ai(d);
  Matrix ai_q(d, d);
  for (int i = 0; i < n; ++i) {
    unit[i] = 1.0;
    sub.prob->apply_A(sub.x, unit, ai);
    unit[i] = 0.0;
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        double acc = 0.0;
        for (int k = 0; k < d; ++k) acc += ai(r, k) * ew.q(k, c);
        ai_q(r, c) = acc;
      }
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double acc = 0.0;
        for (int k = 0; k < d; ++k) acc += ew.q(k, a) * ai_q(k, b);
        e(a * d + b, i) = sqrt_w(a, b) * acc;
      }
  }

  Matrix h = sub.m_mat;
  scale({h.data(), h.size()}, sub.sigma);
  add_ata(h, e, 1.0);

  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(h(i, i)));
  double ridge = 0.0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    Matrix fac = h;
    if (ridge > 0.0)
      for (int i = 0; i < n; ++i) fac(i, i) += ridge;
    if (cholesky_in_place(fac)) {
      for (int i = 0; i < n; ++i) dir[i] = -grad[i];
      cholesky_solve_in_place(fac, dir);
      return true;
    }
    ridge = ridge == 0.0 ? 1e-12 * std::max(scale, 1.0) : 1e4 * ridge;
  }
  return false;
}

InnerResult run_inner(const SubproblemData& sub, const TruncationParams& params,
                      std::span<const double> grad_f_outer, bool use_truncation) {
  validate_sub(sub);
  require(params.c1 > 0.0 && params.c1 < 1.0, "TruncationParams: c1 must lie in (0,1)");
  require(params.c2 > 0.0, "TruncationParams: c2 must be positive");

  const int n = sub.prob->num_vars();
  ReducedEval eval(sub);
  Vec u(n, 0.0);
  Vec grad(n), dir(n), trial(n), xi(n), mxi(n);

  double fcur = eval.value(u);
  eval.grad_of_cached(grad);
  double grad_norm = norm2(grad);

  InnerResult res;
  int j = 0;
  for (;;) {
    if (grad_norm <= std::max(params.inner_tol, eval.grad_noise_floor())) {
      res.status = InnerStatus::ToleranceReached;
      break;
    }
    if (j >= params.inner_cap)
      throw InnerSolverError("inner Newton iteration hit the cap before acceptance or tolerance",
                             j, grad_norm, norm2(grad_f_outer));

    const bool newton_ok = newton_direction(sub, eval, grad, dir);
    if (!newton_ok)
      for (int i = 0; i < n; ++i) dir[i] = -grad[i];
    double slope = dot(grad, dir);
    if (!(slope < 0.0)) {
      for (int i = 0; i < n; ++i) dir[i] = -grad[i];
      slope = -grad_norm * grad_norm;
    }

    double step = 1.0;
    bool accepted = false;
    double ftrial = fcur;
    for (int ls = 0; ls < 60; ++ls) {
      for (int i = 0; i < n; ++i) trial[i] = u[i] + step * dir[i];
      ftrial = eval.value(trial);
      if (std::isfinite(ftrial) && ftrial <= fcur + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // A fully backtracked line search means no representable step improves the
      // model: the iterate is as good as the arithmetic allows, so report it as
      // converged rather than erroring out (the hard error is reserved for the
      // iteration cap).
      eval.value(u);
      res.status = InnerStatus::ToleranceReached;
      break;
    }

    const double decrease = fcur - ftrial;
    u = trial;
    fcur = ftrial;
    ++j;
    eval.grad_of_cached(grad);
    grad_norm = norm2(grad);
    // An accepted step whose decrease is below rounding level cannot be
    // distinguished from stagnation; stop at this iterate instead of grinding
    // to the cap.
    const bool exhausted =
        decrease <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(fcur));
    if (std::getenv("NSDP_INNER_TRACE"))
      std::fprintf(stderr, "    j=%d f=%.12e |g|=%.3e slope=%.3e step=%.3e newton=%d\n", j, fcur,
                   grad_norm, slope, step, int(newton_ok));

    if (use_truncation) {
      for (int i = 0; i < n; ++i) xi[i] = sub.sigma * u[i];
      eval.m_xi_of_cached(mxi);
      const TruncationCheck chk =
          check_truncation(sub, xi, mxi, eval.w_plus(), grad, grad_f_outer, params);
      if (std::getenv("NSDP_INNER_TRACE")) {
        SymMatrix diff = eval.w_plus();
        diff.add_scaled(sub.t_plus, -1.0);
        const double dn = frob_norm(diff);
        std::fprintf(stderr,
                     "      lhs=%.6e mxx=%.3e sdn2=%.3e rhs38=%.6e |eta|=%.3e bound39=%.3e\n",
                     chk.lhs, dot(mxi, xi), sub.sigma * dn * dn,
                     -params.c1 * (dot(mxi, xi) + sub.sigma * dn * dn), norm2(grad),
                     params.c2 * std::abs(chk.lhs));
      }
      if (chk.pass) {
        res.status = InnerStatus::Truncated;
        break;
      }
    }
    if (exhausted) {
      res.status = InnerStatus::ToleranceReached;
      break;
    }
  }

  res.iterations = j;
  res.iterate = materialize(sub, u, eval);
  return res;
}

}  // namespace

SubproblemData build_subproblem(const NsdpProblem& p, const Triplet& v, double sigma,
                                const Matrix& h) {
  require(sigma > 0.0, "build_subproblem: sigma must be positive");
  const int n = p.num_vars();
  const int m = p.num_eq();
  require_dims(h.rows() == n && h.cols() == n, "build_subproblem: H has wrong shape");
  require_dims(int(v.x.size()) == n && int(v.y.size()) == m && v.z.dim() == p.cone_dim(),
               "build_subproblem: triplet dimensions mismatch");

  SubproblemData sub;
  sub.sigma = sigma;
  sub.prob = &p;
  sub.x = v.x;

  sub.c.resize(n);
  p.grad_f(v.x, sub.c);

  sub.s.resize(m);
  sub.m_mat = h;
  if (m > 0) {
    Vec g(m);
    p.eval_g(v.x, g);
    Matrix jg(m, n);
    p.jac_g(v.x, jg);
    for (int j = 0; j < m; ++j) sub.s[j] = v.y[j] - g[j] / sigma;
    for (int j = 0; j < m; ++j) kernels::axpy(-sub.s[j], jg.row(j), sub.c.data(), n);
    add_ata(sub.m_mat, jg, 1.0 / sigma);
  }

  SymMatrix x_mat(p.cone_dim());
  p.eval_X(v.x, x_mat);
  sub.t = v.z;
  sub.t.add_scaled(x_mat, -1.0 / sigma);
  sub.t_plus = psd_project(sub.t);
  return sub;
}

double reduced_objective(const SubproblemData& sub, std::span<const double> xi) {
  validate_sub(sub);
  ReducedEval eval(sub);
  Vec u(xi.begin(), xi.end());
  scale(u, 1.0 / sub.sigma);
  return sub.sigma * eval.value(u);
}

void reduced_gradient(const SubproblemData& sub, std::span<const double> xi,
                      std::span<double> out) {
  validate_sub(sub);
  ReducedEval eval(sub);
  Vec u(xi.begin(), xi.end());
  scale(u, 1.0 / sub.sigma);
  eval.value(u);
  eval.grad_of_cached(out);
}

bool truncation_test(const SubproblemData& sub, const InnerIterate& it,
                     std::span<const double> grad_f_outer, const TruncationParams& params) {
  validate_sub(sub);
  Vec mxi(sub.prob->num_vars());
  matvec(sub.m_mat, it.xi, mxi);
  return check_truncation(sub, it.xi, mxi, it.lambda_mat, it.eta, grad_f_outer, params).pass;
}

InnerResult inner_solve(const SubproblemData& sub, const TruncationParams& params,
                        std::span<const double> grad_f_outer) {
  return run_inner(sub, params, grad_f_outer, true);
}

InnerResult inner_solve_to_tolerance(const SubproblemData& sub, double tol, int cap) {
  TruncationParams params;
  params.inner_tol = tol;
  params.inner_cap = cap;
  Vec dummy(sub.prob ? sub.prob->num_vars() : 0, 0.0);
  return run_inner(sub, params, dummy, false);
}

MultiplierRecovery recover_multipliers(const NsdpProblem& p, const Triplet& v,
                                       const SubproblemData& sub, const InnerIterate& it) {
  const int n = p.num_vars();
  const int m = p.num_eq();
  MultiplierRecovery rec;
  rec.p = it.xi;
  rec.ybar.resize(m);
  if (m > 0) {
    Vec g(m);
    p.eval_g(sub.x, g);
    Matrix jg(m, n);
    p.jac_g(sub.x, jg);
    Vec jxi(m);
    matvec(jg, it.xi, jxi);
    for (int j = 0; j < m; ++j) rec.ybar[j] = v.y[j] - (g[j] + jxi[j]) / sub.sigma;
  }
  rec.zbar = psd_project(it.sigma_mat);
  return rec;
}

RjReport compute_Rj(const SubproblemData& sub, const InnerIterate& it,
                    std::span<const double> grad_f_outer) {
  validate_sub(sub);
  SymMatrix lam_diff = it.lambda_mat;
  lam_diff.add_scaled(sub.t_plus, -1.0);
  SymMatrix t_diff = sub.t;
  t_diff.add_scaled(sub.t_plus, -1.0);

  RjReport rep;
  rep.r_value = dot(it.eta, it.xi) + frob_inner(it.omega, it.lambda_mat) -
                frob_inner(it.omega, sub.t_plus) +
                sub.sigma * frob_inner(lam_diff, t_diff) - frob_inner(lam_diff, it.theta);

  const double mxx = quad_form(sub.m_mat, it.xi);
  const double dn = frob_norm(lam_diff);
  const double lhs = dot(grad_f_outer, it.xi);
  const double rhs = -mxx - sub.sigma * dn * dn + rep.r_value;
  rep.identity_gap = std::abs(lhs - rhs);

  const double scale = std::max({1.0, std::abs(lhs), std::abs(mxx), sub.sigma * dn * dn,
                                 std::abs(rep.r_value)});
  if (rep.identity_gap > 1e-8 * scale)
    throw NumericalError("compute_Rj: decomposition identity failed to close, gap " +
                         std::to_string(rep.identity_gap));
  return rep;
}

}  // namespace nsdp
