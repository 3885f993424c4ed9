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

#ifndef NSDPSTAB_ALMETHOD_HPP
#define NSDPSTAB_ALMETHOD_HPP

#include "nsdpstab/sqsdp.hpp"

namespace nsdp {

// Safeguarded augmented Lagrangian baseline. Each outer iteration
// minimizes
//
//   f(x) + (1/(2 rho)) ||ybar - rho g(x)||^2
//        + (1/(2 rho)) ||[Zbar - rho X(x)]_+||_F^2
//
// over x, grows rho when the infeasibility-complementarity measure did
// not shrink enough, and reports the unsafeguarded first-order multiplier
// updates in the run log (the safeguarded projections only feed the next
// subproblem).
struct AlConfig {
  double eps = 1e-6;
  int k_max = 100;
  double rho0 = 10.0;
  double tau_dec = 0.5;     // required shrink factor of the measure u
  double rho_growth = 2.0;

  double ymax = 1e6;
  double zmax = 1e6;

  double inner_tol = 1e-10;
  int inner_cap = 20000;

  double kappa = 1e-5;  // weighting in residual reports

  double classify_feas_min = 1e-2;
  double h_stat_tol = 1e-4;
  double diag_eps = 1e-6;
};

struct AlInnerResult {
  Vec x;
  double grad_norm = 0.0;
  int iterations = 0;
  bool stalled = false;
};

// Minimizes the penalty subproblem from x_start to ||grad|| <= inner_tol.
// A stall (no acceptable step) returns the best point reached.
AlInnerResult al_inner_min(const NsdpProblem& p, std::span<const double> x_start,
                           const Vec& ybar, const SymMatrix& zbar, double rho,
                           const AlConfig& cfg);

SolveResult al_solve(const NsdpProblem& p, const Triplet& v0, const AlConfig& cfg,
                     const IterationObserver& observer = nullptr);

}  // namespace nsdp

#endif
