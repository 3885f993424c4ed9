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

#include "nsdpstab/vomf.hpp"

#include <algorithm>

namespace nsdp {

char iterate_kind_char(IterateKind k) {
  switch (k) {
    case IterateKind::V: return 'V';
    case IterateKind::O: return 'O';
    case IterateKind::M: return 'M';
    case IterateKind::F: return 'F';
  }
  return '?';
}

void box_project(std::span<double> y, double ymax) {
  require(ymax >= 0.0, "box_project: ymax must be nonnegative");
  for (double& v : y) v = std::clamp(v, -ymax, ymax);
}

VomfOutcome vomf_step(const NsdpProblem& p, const Triplet& vbar, VomfState& state,
                      double sigma, const VomfParams& params,
                      std::span<const double> grad_f_at_next) {
  require(sigma > 0.0, "vomf_step: sigma must be positive");
  require(state.phi > 0.0 && state.psi > 0.0 && state.gamma > 0.0,
          "vomf_step: targets must be positive");

  const ResidualReport rep = residuals(p, vbar, params.kappa);

  VomfOutcome out;
  if (rep.phi <= 0.5 * state.phi) {
    state.y = vbar.y;
    state.z = vbar.z;
    state.phi *= 0.5;
    out.kind = IterateKind::V;
    return out;
  }
  if (rep.psi <= 0.5 * state.psi) {
    state.y = vbar.y;
    state.z = vbar.z;
    state.psi *= 0.5;
    out.kind = IterateKind::O;
    return out;
  }
  if (norm2(grad_f_at_next) <= state.gamma) {
    const int m = p.num_eq();
    if (m > 0) {
      Vec g(m);
      p.eval_g(vbar.x, g);
      for (int j = 0; j < m; ++j) state.y[j] -= g[j] / sigma;
      box_project(state.y, params.ymax);
    }
    SymMatrix x_mat(p.cone_dim());
    p.eval_X(vbar.x, x_mat);
    SymMatrix w = state.z;
    w.add_scaled(x_mat, -1.0 / sigma);
    state.z = spectral_box_project(w, params.zmax);
    state.gamma *= 0.5;
    out.kind = IterateKind::M;
    return out;
  }
  out.kind = IterateKind::F;
  return out;
}

}  // namespace nsdp
