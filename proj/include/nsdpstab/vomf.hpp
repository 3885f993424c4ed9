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

#ifndef NSDPSTAB_VOMF_HPP
#define NSDPSTAB_VOMF_HPP

#include "nsdpstab/model.hpp"

namespace nsdp {

// Multiplier acceptance state machine. Each outer step is classified as
// exactly one of
//   V: the feasibility-weighted residual phi(vbar) passed its target,
//      the candidate multipliers are accepted and the target halves;
//   O: the optimality-weighted residual psi(vbar) passed its target,
//      same acceptance, psi target halves;
//   M: the merit gradient at the new point passed gamma; multipliers are
//      rebuilt from safeguarded projections and gamma halves;
//   F: none of the above, multipliers and targets are kept.
enum class IterateKind { V, O, M, F };

char iterate_kind_char(IterateKind k);

struct VomfState {
  Vec y;
  SymMatrix z;
  double phi = 0.0;
  double psi = 0.0;
  double gamma = 0.0;
};

struct VomfParams {
  double kappa = 1e-5;
  double ymax = 1e6;
  double zmax = 1e6;
};

// Componentwise clamp of y to [-ymax, ymax].
void box_project(std::span<double> y, double ymax);

struct VomfOutcome {
  IterateKind kind = IterateKind::F;
};

// Advances the state given the candidate triplet vbar = (x_next, ybar, Zbar)
// and the merit gradient at x_next under the current multipliers,
// grad F(x_next; sigma, y, Z). Mutates state in place.
VomfOutcome vomf_step(const NsdpProblem& p, const Triplet& vbar, VomfState& state,
                      double sigma, const VomfParams& params,
                      std::span<const double> grad_f_at_next);

}  // namespace nsdp

#endif
