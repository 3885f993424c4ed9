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

#ifndef NSDPSTAB_QSDP_HPP
#define NSDPSTAB_QSDP_HPP

#include "nsdpstab/merit.hpp"
#include "nsdpstab/model.hpp"

namespace nsdp {

// Stabilized quadratic SDP subproblem at a triplet v = (x, y, Z):
//
//   minimize  <c, xi> + 0.5 <M xi, xi> + (sigma/2) ||S||_F^2
//   s.t.      A(x) xi + sigma (S - T)  positive semidefinite,
//
// with M = H + (1/sigma) Jg^T Jg, s = y - g(x)/sigma, c = grad f - Jg^T s
// and T = Z - X(x)/sigma. The matrix block solves in closed form,
// S(xi) = [T - (1/sigma) A(x) xi]_+, which reduces the subproblem to the
// smooth convex function
//
//   q(xi) = <c, xi> + 0.5 <M xi, xi>
//         + (sigma/2) || [T - (1/sigma) A(x) xi]_+ ||_F^2,
//
// minimized by a semismooth Newton iteration with Armijo backtracking
// (steepest-descent fallback when the generalized Hessian resists
// factorization) and truncated as soon as the accepted-direction tests
// hold.
struct SubproblemData {
  Matrix m_mat;  // n x n
  Vec c;
  Vec s;
  SymMatrix t;
  double sigma = 1.0;
  const NsdpProblem* prob = nullptr;
  Vec x;             // point the model was built at
  SymMatrix t_plus;  // cached [T]_+
};

// Inner iterate with the dual blocks reconstructed from xi.
struct InnerIterate {
  Vec xi;
  SymMatrix sigma_mat;   // S_j
  SymMatrix lambda_mat;  // Lambda_j; equals S_j on the reduced path
  Vec eta;               // stationarity residual, equals grad q(xi_j)
  SymMatrix theta;       // zero on the reduced path
  SymMatrix omega;       // A(x) xi_j + sigma (S_j - T), PSD by construction
};

struct TruncationParams {
  double c1 = 0.5;   // in (0, 1)
  double c2 = 1e-2;  // positive; small values demand near-exact subproblem solves
  double inner_tol = 1e-10;
  int inner_cap = 10000;
};

enum class InnerStatus { Truncated, ToleranceReached };

struct InnerResult {
  InnerIterate iterate;
  int iterations = 0;
  InnerStatus status = InnerStatus::Truncated;
};

// Assembles the subproblem at v with curvature H (n x n).
SubproblemData build_subproblem(const NsdpProblem& p, const Triplet& v, double sigma,
                                const Matrix& h);

double reduced_objective(const SubproblemData& sub, std::span<const double> xi);
void reduced_gradient(const SubproblemData& sub, std::span<const double> xi,
                      std::span<double> out);

// Acceptance tests for a candidate inner iterate against the outer merit
// gradient grad_F = grad F(x; sigma, y, Z):
//   (a) <grad_F, xi> <= -c1 <M xi, xi> - c1 sigma ||Lambda - [T]_+||_F^2
//   (b) ||eta|| <= c2 |<grad_F, xi>|
bool truncation_test(const SubproblemData& sub, const InnerIterate& it,
                     std::span<const double> grad_f_outer, const TruncationParams& params);

// Runs the inner descent from xi = 0 and returns the first iterate passing
// both truncation tests, or the iterate reaching inner_tol. Throws
// InnerSolverError when the cap is hit without either.
InnerResult inner_solve(const SubproblemData& sub, const TruncationParams& params,
                        std::span<const double> grad_f_outer);

// Runs the inner descent to ||grad q|| <= tol with no early truncation.
InnerResult inner_solve_to_tolerance(const SubproblemData& sub, double tol, int cap);

struct MultiplierRecovery {
  Vec p;  // accepted direction, p = xi_j
  Vec ybar;
  SymMatrix zbar;
};

// ybar = y - (g(x) + Jg(x) xi) / sigma, zbar = [S_j]_+.
MultiplierRecovery recover_multipliers(const NsdpProblem& p, const Triplet& v,
                                       const SubproblemData& sub, const InnerIterate& it);

struct RjReport {
  double r_value = 0.0;
  double identity_gap = 0.0;
};

// Diagnostic residual
//   R_j = <eta, xi> + <Omega, Lambda> - <Omega, [T]_+>
//       + sigma <Lambda - [T]_+, T - [T]_+> - <Lambda - [T]_+, Theta>
// together with the defect of the identity
//   <grad_F, xi> = -<M xi, xi> - sigma ||Lambda - [T]_+||_F^2 + R_j,
// which must close to 1e-8 relative to its terms.
RjReport compute_Rj(const SubproblemData& sub, const InnerIterate& it,
                    std::span<const double> grad_f_outer);

}  // namespace nsdp

#endif
