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

#ifndef NSDPSTAB_BB_MINIMIZE_HPP
#define NSDPSTAB_BB_MINIMIZE_HPP

#include <algorithm>
#include <cmath>

#include "nsdpstab/linalg.hpp"

namespace nsdp::detail {

// Monotone Barzilai-Borwein gradient descent with an Armijo backtracking
// safeguard. The objective must provide
//
//   double value(std::span<const double> x);   // caches internals at x
//   void grad_of_cached(std::span<double> g);  // gradient at the cached x
//
// so that each point costs a single full evaluation. The hook is invoked
// at every accepted iterate and may stop the run by returning true.

struct BbSettings {
  double grad_tol = 1e-10;
  int max_iters = 10000;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 70;
  double step_min = 1e-18;
  double step_max = 1e16;
};

enum class BbStop { Converged, HookStop, Stalled, IterCap };

struct BbOutcome {
  BbStop stop = BbStop::Converged;
  int iterations = 0;
  double f = 0.0;
  double grad_norm = 0.0;
};

template <class Objective, class Hook>
BbOutcome bb_minimize(Objective& obj, Vec& x, const BbSettings& st, Hook&& hook) {
  const std::size_t n = x.size();
  Vec g(n), g_new(n), trial(n);

  double f = obj.value(x);
  obj.grad_of_cached(g);
  double gnorm = norm2(g);

  BbOutcome out;
  out.f = f;
  out.grad_norm = gnorm;
  if (gnorm <= st.grad_tol) return out;

  double alpha = 1.0 / std::max(gnorm, 1e-12);
  alpha = std::clamp(alpha, st.step_min, st.step_max);

  for (int it = 1; it <= st.max_iters; ++it) {
    double ft = 0.0;
    int bt = 0;
    for (;; ++bt) {
      if (bt > st.max_backtracks || alpha < st.step_min) {
        out.stop = BbStop::Stalled;
        out.iterations = it - 1;
        out.f = f;
        out.grad_norm = gnorm;
        return out;
      }
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - alpha * g[i];
      ft = obj.value(trial);
      if (std::isfinite(ft) && ft <= f - st.armijo * alpha * gnorm * gnorm) break;
      alpha *= st.backtrack;
    }

    obj.grad_of_cached(g_new);
    const double gnorm_new = norm2(g_new);

    out.iterations = it;
    out.f = ft;
    out.grad_norm = gnorm_new;

    if (hook(it, trial, ft, g_new)) {
      x = trial;
      out.stop = BbStop::HookStop;
      return out;
    }
    if (gnorm_new <= st.grad_tol) {
      x = trial;
      out.stop = BbStop::Converged;
      return out;
    }

    // BB step from s = x_new - x = -alpha * g and y = g_new - g:
    // alpha' = <s, y> / <y, y>.
    double sy = 0.0;
    double yy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double yi = g_new[i] - g[i];
      sy += -alpha * g[i] * yi;
      yy += yi * yi;
    }
    alpha = (sy > 0.0 && yy > 0.0) ? std::clamp(sy / yy, st.step_min, st.step_max)
                                   : std::min(alpha * 2.0, st.step_max);

    x = trial;
    f = ft;
    g.swap(g_new);
    gnorm = gnorm_new;
  }
  out.stop = BbStop::IterCap;
  return out;
}

}  // namespace nsdp::detail

#endif
