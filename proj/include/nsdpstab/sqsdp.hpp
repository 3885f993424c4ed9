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

#ifndef NSDPSTAB_SQSDP_HPP
#define NSDPSTAB_SQSDP_HPP

#include <functional>
#include <string>

#include "nsdpstab/merit.hpp"
#include "nsdpstab/qsdp.hpp"
#include "nsdpstab/vomf.hpp"

namespace nsdp {

enum class HessianMode { Identity, Lagrangian, User };

struct SqsdpConfig {
  double r_tol = 1e-6;
  double gamma_tol = 1e-6;
  int k_max = 100;

  double sigma0 = 1e-1;
  double gamma0 = 1e-1;
  double phi0 = 1e3;
  double psi0 = 1e3;
  double kappa = 1e-5;

  double tau = 1e-4;    // sufficient decrease
  double omega = 1e-4;  // curvature floor in the decrease predictor
  double beta = 0.5;    // backtracking factor
  int ls_cap = 60;

  double ymax = 1e6;
  double zmax = 1e6;

  TruncationParams trunc;

  // Below this merit-gradient norm the subproblem is skipped and the
  // multiplier candidates come from the penalty projections directly.
  double grad_f_zero_tol = 1e-6;

  // The sigma update never goes below this. In double precision the penalty
  // subproblem becomes unevaluable once sigma drops under the eigensolver
  // noise scale (errors in [Z - X/sigma]_+ are amplified by 1/sigma), so the
  // floor is set where subproblem gradients stay trustworthy near r_tol.
  double sigma_floor = 1e-7;

  // Curvature model: Lagrangian falls back to the identity when the
  // problem provides no Hessian.
  HessianMode hessian_mode = HessianMode::Lagrangian;
  std::function<void(const NsdpProblem&, const Triplet&, Matrix&)> user_hessian;

  // Termination labeling: a gamma- or cap-triggered stop at a point with
  // r_v above classify_feas_min and ||grad h|| at most h_stat_tol is
  // reported as stationarity of the infeasibility measure.
  double classify_feas_min = 1e-2;
  double h_stat_tol = 1e-4;

  double diag_eps = 1e-6;  // tolerance for the optimality diagnostics
};

struct IterationRecord {
  int k = 0;  // index of the iterate produced by this step
  Vec x;
  double y_norm = 0.0;
  double z_fnorm = 0.0;
  double sigma = 0.0;  // after the update
  double phi = 0.0;
  double psi = 0.0;
  double gamma = 0.0;
  double r_v = 0.0;
  double r_o = 0.0;
  double r = 0.0;
  double merit_f = 0.0;   // accepted merit value under the step's context
  double step_size = 0.0;
  IterateKind kind = IterateKind::F;
  int inner_iters = 0;
  bool inner_stalled = false;
  double wall_time = 0.0;  // seconds spent in this step
};

enum class TerminationCode {
  ResidualConverged,
  GammaConverged,
  MaxIterations,
  FeasibilityStationary,
  InnerSolverFailure,
};

const char* termination_code_name(TerminationCode c);

struct TerminationStatus {
  TerminationCode code = TerminationCode::MaxIterations;
  OptimalityDiagnostics diag;
  double grad_h_norm = 0.0;
  bool h_stationary = false;
  // Set by the augmented Lagrangian driver when its eigenvalue-based
  // approximate-optimality test stopped the run.
  bool al_eig_test = false;
  std::string message;
};

struct SolveResult {
  Triplet v;
  TerminationStatus status;
  std::vector<IterationRecord> log;
  ResidualReport final_residuals;
};

using IterationObserver = std::function<void(const IterationRecord&, const Triplet&)>;

struct LineSearchResult {
  int ell = 0;
  double f_new = 0.0;
  double delta = 0.0;
  double step = 1.0;
};

// Smallest ell with F(x + beta^ell p) <= F(x) + tau beta^ell Delta,
// Delta = max{<grad F, p>, -omega ||p||^2}. Non-finite trial values fail
// the test and backtrack further; exceeding ls_cap is an error.
LineSearchResult line_search(const NsdpProblem& p, std::span<const double> x,
                             std::span<const double> dir, const MeritContext& ctx,
                             const SqsdpConfig& cfg, double f0, double grad_dot_dir);

// sigma' = max(min(sigma/2, r_next^(3/2)), sigma_floor) when the merit
// gradient test passed, else sigma.
double sigma_update(double sigma, double r_next, bool m_test_passed, double sigma_floor);

// Curvature matrix H for the subproblem.
Matrix choose_H(const NsdpProblem& p, const Triplet& v, const SqsdpConfig& cfg);

struct ModifyReport {
  bool modified = false;
  double mu = 0.0;
};

// Leaves a positive definite matrix untouched; otherwise adds
// (|lambda_min| + 1e-5) I.
ModifyReport modify_M(Matrix& m);

SolveResult solve(const NsdpProblem& p, const Triplet& v0, const SqsdpConfig& cfg,
                  const IterationObserver& observer = nullptr);

}  // namespace nsdp

#endif
