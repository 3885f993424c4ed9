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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "nsdpstab/kernels.hpp"
#include "nsdpstab/rng.hpp"

using namespace nsdp;
namespace k = nsdp::kernels;

namespace {

const std::size_t kSizes[] = {0, 1, 3, 8, 17, 64, 1000};

std::vector<double> rand_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& e : v) e = rng.uniform(-2.0, 2.0);
  return v;
}

}  // namespace

TEST_CASE("dot and sum_sq match reference values") {
  const double a[] = {1.0, 2.0, 3.0};
  const double b[] = {4.0, -5.0, 6.0};
  CHECK(k::dot(a, b, 3) == doctest::Approx(12.0));
  CHECK(k::sum_sq(a, 3) == doctest::Approx(14.0));
  CHECK(k::dot(a, b, 0) == 0.0);
  CHECK(k::sum_sq(a, 0) == 0.0);
}

TEST_CASE("axpy and scale match reference values") {
  double y[] = {1.0, 1.0, 1.0};
  const double x[] = {1.0, 2.0, 3.0};
  k::axpy(0.5, x, y, 3);
  CHECK(y[0] == doctest::Approx(1.5));
  CHECK(y[1] == doctest::Approx(2.0));
  CHECK(y[2] == doctest::Approx(2.5));
  k::scale(y, 2.0, 3);
  CHECK(y[0] == doctest::Approx(3.0));
  CHECK(y[1] == doctest::Approx(4.0));
  CHECK(y[2] == doctest::Approx(5.0));
}

TEST_CASE("rot2 applies the documented plane rotation") {
  // c = cos(t), s = sin(t): the reference recurrence uses the old p value
  // when updating q.
  double p[] = {1.0, 0.0};
  double q[] = {0.0, 1.0};
  const double c = std::cos(0.3), s = std::sin(0.3);
  std::vector<double> p_ref = {p[0], p[1]}, q_ref = {q[0], q[1]};
  k::detail::rot2_scalar(p_ref.data(), q_ref.data(), c, s, 2);
  k::rot2(p, q, c, s, 2);
  CHECK(p[0] == doctest::Approx(p_ref[0]).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(p_ref[1]).epsilon(1e-15));
  CHECK(q[0] == doctest::Approx(q_ref[0]).epsilon(1e-15));
  CHECK(q[1] == doctest::Approx(q_ref[1]).epsilon(1e-15));
}

TEST_CASE("active backend agrees with the scalar reference on all sizes") {
  Rng rng(2026);
  for (std::size_t n : kSizes) {
    auto a = rand_vec(rng, n);
    auto b = rand_vec(rng, n);

    const double d_ref = k::detail::dot_scalar(a.data(), b.data(), n);
    const double s_ref = k::detail::sum_sq_scalar(a.data(), n);
    CHECK(k::dot(a.data(), b.data(), n) == doctest::Approx(d_ref).epsilon(1e-12));
    CHECK(k::sum_sq(a.data(), n) == doctest::Approx(s_ref).epsilon(1e-12));

    auto y1 = rand_vec(rng, n);
    auto y2 = y1;
    k::detail::axpy_scalar(0.75, a.data(), y1.data(), n);
    k::axpy(0.75, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-14));

    auto z1 = rand_vec(rng, n);
    auto z2 = z1;
    k::detail::scale_scalar(z1.data(), -1.25, n);
    k::scale(z2.data(), -1.25, n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(z2[i] == doctest::Approx(z1[i]).epsilon(1e-14));

    auto p1 = rand_vec(rng, n), q1 = rand_vec(rng, n);
    auto p2 = p1, q2 = q1;
    const double c = std::cos(1.1), s = std::sin(1.1);
    k::detail::rot2_scalar(p1.data(), q1.data(), c, s, n);
    k::rot2(p2.data(), q2.data(), c, s, n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(p2[i] == doctest::Approx(p1[i]).epsilon(1e-14));
      CHECK(q2[i] == doctest::Approx(q1[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("both backends agree when avx2 is available") {
  if (!k::detail::avx2_available()) return;
  const auto saved = k::active_backend();
  Rng rng(7);
  for (std::size_t n : kSizes) {
    auto a = rand_vec(rng, n);
    auto b = rand_vec(rng, n);
    REQUIRE(k::set_backend(k::Backend::Avx2));
    const double d_avx = k::dot(a.data(), b.data(), n);
    const double s_avx = k::sum_sq(a.data(), n);
    REQUIRE(k::set_backend(k::Backend::Scalar));
    CHECK(k::dot(a.data(), b.data(), n) == doctest::Approx(d_avx).epsilon(1e-12));
    CHECK(k::sum_sq(a.data(), n) == doctest::Approx(s_avx).epsilon(1e-12));
  }
  k::set_backend(saved);
}

TEST_CASE("set_backend reports availability") {
  const auto saved = k::active_backend();
  CHECK(k::set_backend(k::Backend::Scalar));
  CHECK(k::active_backend() == k::Backend::Scalar);
  CHECK(std::string(k::backend_name()) == "scalar");
  const bool ok = k::set_backend(k::Backend::Avx2);
  if (k::detail::avx2_available()) {
    CHECK(ok);
    CHECK(k::active_backend() == k::Backend::Avx2);
    CHECK(std::string(k::backend_name()) == "avx2");
  } else {
    CHECK_FALSE(ok);
    CHECK(k::active_backend() == k::Backend::Scalar);
  }
  k::set_backend(saved);
}
