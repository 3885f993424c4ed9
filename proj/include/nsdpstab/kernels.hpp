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

#ifndef NSDPSTAB_KERNELS_HPP
#define NSDPSTAB_KERNELS_HPP

#include <cstddef>

// Low-level dense kernels. Every operation has a scalar reference
// implementation and, on x86 hosts with AVX2+FMA, a vectorized variant.
// The active backend is chosen once at startup; NSDP_KERNELS=scalar|avx2
// overrides the automatic choice.

namespace nsdp::kernels {

enum class Backend { Scalar, Avx2 };

// <a, b>
double dot(const double* a, const double* b, std::size_t n);

// <a, a>
double sum_sq(const double* a, std::size_t n);

// y += alpha * x   (x and y must not alias)
void axpy(double alpha, const double* x, double* y, std::size_t n);

// a *= alpha
void scale(double* a, double alpha, std::size_t n);

// In-place plane rotation:
//   p_i <- c*p_i - s*q_i
//   q_i <- s*p_i + c*q_i
void rot2(double* p, double* q, double c, double s, std::size_t n);

Backend active_backend();
const char* backend_name();

// Force a backend (tests). Requesting Avx2 on a host without support
// keeps the scalar backend and returns false.
bool set_backend(Backend b);

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n);
double sum_sq_scalar(const double* a, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void scale_scalar(double* a, double alpha, std::size_t n);
void rot2_scalar(double* p, double* q, double c, double s, std::size_t n);
bool avx2_available();
}  // namespace detail

}  // namespace nsdp::kernels

#endif
