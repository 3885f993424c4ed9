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

#ifndef NSDPSTAB_ERROR_HPP
#define NSDPSTAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nsdp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

// Non-finite values, factorization/eigensolver breakdown.
struct NumericalError : Error {
  using Error::Error;
};

// Inner subproblem solver could not certify an acceptable step.
struct InnerSolverError : Error {
  int iterations = 0;
  double grad_norm = 0.0;
  double outer_grad_norm = 0.0;
  InnerSolverError(const std::string& msg, int iters, double gnorm, double outer_gnorm)
      : Error(msg), iterations(iters), grad_norm(gnorm), outer_grad_norm(outer_gnorm) {}
};

inline void require(bool cond, const char* msg) {
  if (!cond) throw Error(msg);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

inline void require_dims(bool cond, const char* msg) {
  if (!cond) throw DimensionError(msg);
}

}  // namespace nsdp

#endif
