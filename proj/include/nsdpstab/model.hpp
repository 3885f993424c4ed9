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

#ifndef NSDPSTAB_MODEL_HPP
#define NSDPSTAB_MODEL_HPP

#include <span>
#include <vector>

#include "nsdpstab/symmat.hpp"

namespace nsdp {

// Nonlinear semidefinite program
//
//   minimize f(x)  subject to  g(x) = 0,  X(x) positive semidefinite,
//
// with f : R^n -> R, g : R^n -> R^m and X : R^n -> S^d twice continuously
// differentiable. The linear map A(x) collects the partial derivatives of
// X: A(x) u = sum_i u_i * dX/dx_i, and apply_A_adj is its adjoint,
// [A*(x) U]_i = <dX/dx_i, U>.
class NsdpProblem {
 public:
  virtual ~NsdpProblem() = default;

  virtual int num_vars() const = 0;  // n
  virtual int num_eq() const = 0;    // m
  virtual int cone_dim() const = 0;  // d

  virtual double eval_f(std::span<const double> x) const = 0;
  virtual void grad_f(std::span<const double> x, std::span<double> out) const = 0;

  virtual void eval_g(std::span<const double> x, std::span<double> out) const = 0;
  // Jacobian of g: m rows, n columns; row j holds the gradient of g_j.
  virtual void jac_g(std::span<const double> x, Matrix& out) const = 0;

  virtual void eval_X(std::span<const double> x, SymMatrix& out) const = 0;
  virtual void apply_A(std::span<const double> x, std::span<const double> u,
                       SymMatrix& out) const = 0;
  virtual void apply_A_adj(std::span<const double> x, const SymMatrix& u,
                           std::span<double> out) const = 0;

  // Hessian of the Lagrangian in x; optional.
  virtual bool has_hess_lagrangian() const { return false; }
  virtual void hess_lagrangian(std::span<const double> x, std::span<const double> y,
                               const SymMatrix& z, Matrix& out) const;
};

// Primal-dual triplet v = (x, y, Z).
struct Triplet {
  Vec x;
  Vec y;
  SymMatrix z;
};

Triplet make_zero_triplet(const NsdpProblem& p);

struct ResidualReport {
  double r_v = 0.0;   // ||g(x)|| + max(lambda_max(-X(x)), 0)
  double r_o = 0.0;   // ||grad_x L(v)|| + |<X(x), Z>|
  double r = 0.0;     // r_v + r_o
  double phi = 0.0;   // r_v + kappa * r_o
  double psi = 0.0;   // kappa * r_v + r_o
};

// L(v) = f(x) - <g(x), y> - <X(x), Z>.
double lagrangian(const NsdpProblem& p, const Triplet& v);

// grad_x L(v) = grad f(x) - Jg(x)^T y - A*(x) Z.
void grad_x_lagrangian(const NsdpProblem& p, const Triplet& v, std::span<double> out);

ResidualReport residuals(const NsdpProblem& p, const Triplet& v, double kappa);

// Infeasibility measure h(x) = 0.5 ||g(x)||^2 + 0.5 ||[-X(x)]_+||_F^2.
double feasibility_h(const NsdpProblem& p, std::span<const double> x);

// grad h(x) = Jg(x)^T g(x) - A*(x) [-X(x)]_+.
void grad_h(const NsdpProblem& p, std::span<const double> x, std::span<double> out);

// Finite-precision optimality diagnostics for the final iterate of a run.
struct OptimalityDiagnostics {
  double grad_lag_norm = 0.0;
  double trace_comp = 0.0;  // |<X(x), Z>|
  double feas_viol = 0.0;   // r_v at the final triplet
  // For every eigenvalue of X(x) above eps, the eigenvalue of Z paired
  // through the eigenbasis of X(x) has magnitude at most eps.
  bool eig_complementarity = false;
  bool takkt_consistent = false;
  bool akkt_consistent = false;
  Vec x_eigs;          // eigenvalues of X(x), descending
  Vec z_paired_eigs;   // diagonal of Q^T Z Q in that basis
};

// Examines the last triplet of a run history.
OptimalityDiagnostics akkt_takkt_diagnostics(const NsdpProblem& p,
                                             const std::vector<Triplet>& history,
                                             double eps);

void check_finite(double v, const char* what);
void check_finite(std::span<const double> v, const char* what);

}  // namespace nsdp

#endif
