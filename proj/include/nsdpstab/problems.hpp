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

#ifndef NSDPSTAB_PROBLEMS_HPP
#define NSDPSTAB_PROBLEMS_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "nsdpstab/model.hpp"

namespace nsdp {

enum class Family { P1, P2, P3, P4 };

const char* family_name(Family f);            // "p1" .. "p4"
Family family_from_name(const std::string&);  // case-insensitive, throws Error

struct InstanceSpec {
  Family family = Family::P1;
  int N = 0;
  int M = 0;          // p2 only
  double eta = 1e-3;  // p4 only
  std::uint64_t seed = 0;
};

// A generated test problem together with the random constants it was
// built from. Rebuilding from `data` (not from the seed) is what makes
// serialized instances portable; regeneration from (family, dims, seed)
// is bit-identical within this implementation.
struct GeneratedInstance {
  InstanceSpec spec;
  std::map<std::string, Vec> data;  // flat arrays, row-major
  std::shared_ptr<const NsdpProblem> problem;
};

// minimize <C, X>  s.t.  [X]_jj = 1 (j = 1..N),  <ee^T, X> = 0,  X psd.
// C symmetric with entries uniform on [-1, 1]. Any feasible X satisfies
// e^T X e = 0, so there is no strictly feasible point.
GeneratedInstance gen_p1(int N, std::uint64_t seed);

// minimize sum_{j=1..N} alpha_j <A_j, X>  s.t.  <A_j, X> = b_j (j = 1..M),
// X psd, with b = (0, 1, ..., 1), A_j = v_j v_j^T for an orthonormal basis
// v_1..v_N (QR of a Gaussian matrix, diagonal signs fixed), and alpha
// uniform on [0, 1] with one designated entry set to zero
// (alpha_zero_index; -1 selects the last). v_1^T X v_1 = 0 is forced, so
// again no strictly feasible point exists.
GeneratedInstance gen_p2(int N, int M, std::uint64_t seed, int alpha_zero_index = -1);

// Gaussian channel capacity: minimize -(1/2) sum_j log(1 + t_j) over
// (x, t) in R^{2N} subject to x >= 0, t >= 0, (1/N) sum_j x_j <= 1 and N
// two-by-two blocks [[1 - a_j t_j, sqrt(r_j)], [sqrt(r_j), a_j x_j + r_j]]
// psd, all folded into one block-diagonal cone of dimension 4N + 1.
GeneratedInstance gen_p3(int N, std::uint64_t seed);

// Nearest correlation matrix: minimize (1/2) ||X - A||_F^2 subject to
// [X]_jj = 1 and X - eta I psd. A has unit diagonal and off-diagonal
// entries uniform on [-1, 1].
GeneratedInstance gen_p4(int N, double eta, std::uint64_t seed);

GeneratedInstance generate(const InstanceSpec& spec);

// Rebuilds the problem object from serialized constants; no RNG involved.
std::shared_ptr<const NsdpProblem> build_problem(const InstanceSpec& spec,
                                                 const std::map<std::string, Vec>& data);

std::string instance_to_json(const GeneratedInstance& inst);
GeneratedInstance instance_from_json(const std::string& text);

}  // namespace nsdp

#endif
