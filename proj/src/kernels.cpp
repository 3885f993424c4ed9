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

#include "nsdpstab/kernels.hpp"

#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(_M_X64)
#define NSDP_KERNELS_X86 1
#include <immintrin.h>
#endif

namespace nsdp::kernels {

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_sq_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double* a, double alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] *= alpha;
}

void rot2_scalar(double* p, double* q, double c, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double pi = p[i];
    const double qi = q[i];
    p[i] = c * pi - s * qi;
    q[i] = s * pi + c * qi;
  }
}

bool avx2_available() {
#if defined(NSDP_KERNELS_X86) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

#if defined(NSDP_KERNELS_X86) && defined(__GNUC__)

__attribute__((target("avx2,fma")))
static double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  acc0 = _mm256_add_pd(acc0, acc1);
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc0);
  double acc = lane[0] + lane[1] + lane[2] + lane[3];
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

__attribute__((target("avx2,fma")))
static double sum_sq_avx2(const double* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(a + i);
    const __m256d v1 = _mm256_loadu_pd(a + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(a + i);
    acc0 = _mm256_fmadd_pd(v, v, acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc0);
  double acc = lane[0] + lane[1] + lane[2] + lane[3];
  for (; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

__attribute__((target("avx2,fma")))
static void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma")))
static void scale_avx2(double* a, double alpha, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(a + i, _mm256_mul_pd(va, _mm256_loadu_pd(a + i)));
  for (; i < n; ++i) a[i] *= alpha;
}

__attribute__((target("avx2,fma")))
static void rot2_avx2(double* p, double* q, double c, double s, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vp = _mm256_loadu_pd(p + i);
    const __m256d vq = _mm256_loadu_pd(q + i);
    _mm256_storeu_pd(p + i, _mm256_fmsub_pd(vc, vp, _mm256_mul_pd(vs, vq)));
    _mm256_storeu_pd(q + i, _mm256_fmadd_pd(vs, vp, _mm256_mul_pd(vc, vq)));
  }
  for (; i < n; ++i) {
    const double pi = p[i];
    const double qi = q[i];
    p[i] = c * pi - s * qi;
    q[i] = s * pi + c * qi;
  }
}

#endif  // NSDP_KERNELS_X86 && __GNUC__

}  // namespace detail

namespace {

struct Dispatch {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_sq)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double*, double, std::size_t);
  void (*rot2)(double*, double*, double, double, std::size_t);
  Backend backend;
};

Dispatch make_dispatch(Backend b) {
#if defined(NSDP_KERNELS_X86) && defined(__GNUC__)
  if (b == Backend::Avx2)
    return {detail::dot_avx2, detail::sum_sq_avx2, detail::axpy_avx2,
            detail::scale_avx2, detail::rot2_avx2, Backend::Avx2};
#endif
  (void)b;
  return {detail::dot_scalar, detail::sum_sq_scalar, detail::axpy_scalar,
          detail::scale_scalar, detail::rot2_scalar, Backend::Scalar};
}

Backend initial_backend() {
  Backend b = detail::avx2_available() ? Backend::Avx2 : Backend::Scalar;
  if (const char* env = std::getenv("NSDP_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) b = Backend::Scalar;
    else if (std::strcmp(env, "avx2") == 0 && detail::avx2_available()) b = Backend::Avx2;
  }
  return b;
}

Dispatch& dispatch() {
  static Dispatch d = make_dispatch(initial_backend());
  return d;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) { return dispatch().dot(a, b, n); }
double sum_sq(const double* a, std::size_t n) { return dispatch().sum_sq(a, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { dispatch().axpy(alpha, x, y, n); }
void scale(double* a, double alpha, std::size_t n) { dispatch().scale(a, alpha, n); }
void rot2(double* p, double* q, double c, double s, std::size_t n) { dispatch().rot2(p, q, c, s, n); }

Backend active_backend() { return dispatch().backend; }

const char* backend_name() {
  return dispatch().backend == Backend::Avx2 ? "avx2" : "scalar";
}

bool set_backend(Backend b) {
  if (b == Backend::Avx2 && !detail::avx2_available()) return false;
  dispatch() = make_dispatch(b);
  return true;
}

}  // namespace nsdp::kernels
