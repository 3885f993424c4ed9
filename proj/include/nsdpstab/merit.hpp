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

#ifndef NSDPSTAB_MERIT_HPP
#define NSDPSTAB_MERIT_HPP

#include "nsdpstab/model.hpp"

namespace nsdp {

// Fixed multiplier estimates and penalty for the smoothed merit function
//
//   F(x; sigma, y, Z) = f(x) + (1/(2 sigma)) ||sigma y - g(x)||^2
//                            + (1/(2 sigma)) ||[sigma Z - X(x)]_+||_F^2.
struct MeritContext {
  double sigma = 1.0;
  Vec y;
  SymMatrix z;
};

double merit_F(const NsdpProblem& p, std::span<const double> x, const MeritContext& ctx);

// Evaluator with a one-point cache: value(x) stores g(x), X(x) and the
// eigendecomposition of sigma Z - X(x); grad_of_cached reuses them.
class MeritEvaluator {
 public:
  MeritEvaluator(const NsdpProblem& p, MeritContext ctx);

  double value(std::span<const double> x);
  void grad_of_cached(std::span<double> out);

  const MeritContext& context() const { return ctx_; }

 private:
  const NsdpProblem& p_;
  MeritContext ctx_;
  Vec x_cached_;
  Vec g_;
  EigenDecomposition ew_;
};

// grad F = grad f - Jg^T (y - g/sigma) - A*(x) [Z - X(x)/sigma]_+.
void grad_merit_F(const NsdpProblem& p, std::span<const double> x, const MeritContext& ctx,
                  std::span<double> out);

// Value and gradient from one shared evaluation of g, X and one
// eigendecomposition of sigma Z - X(x).
double merit_F_grad(const NsdpProblem& p, std::span<const double> x, const MeritContext& ctx,
                    std::span<double> grad_out);

// F(x; sigma, y, Z) - (sigma/2) (||y||^2 + ||Z||_F^2).
double aug_lagrangian(const NsdpProblem& p, const Triplet& v, double sigma);

}  // namespace nsdp

#endif
