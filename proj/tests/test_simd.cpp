// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "irsec/rng.hpp"
#include "irsec/simd/kernels.hpp"

using namespace irsec;
using simd::Isa;
using simd::KernelTable;

namespace {

std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> out;
  for (const Isa isa : simd::available_isas()) {
    if (isa != Isa::scalar) out.push_back(simd::kernels_for(isa));
  }
  return out;
}

std::vector<double> uniforms(std::size_t n, std::uint64_t seed) {
  std::vector<double> u(2 * ((n + 1) / 2));
  simd::scalar_kernels().uniform_pairs(rng::derive_key(seed, "test/simd"), 0, 0, u);
  u.resize(n);
  return u;
}

double ulp_diff(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(std::nextafter(a, INFINITY) - a), 1e-300);
}

const std::size_t kSizes[] = {0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 33, 100, 1001};

}  // namespace

TEST_CASE("scalar table is always present") {
  CHECK(simd::kernels_for(Isa::scalar) == &simd::scalar_kernels());
  CHECK(simd::available_isas().front() == Isa::scalar);
  CHECK(simd::isa_name(Isa::avx2) == "avx2");
#if !defined(IRSEC_HAVE_NEON)
  CHECK(simd::kernels_for(Isa::neon) == nullptr);
#endif
  const auto& act = simd::active();
  CHECK(simd::kernels_for(act.isa) == &act);
}

TEST_CASE("uniform_pairs is bit-identical across variants") {
  const auto key = rng::derive_key(11, "test/simd");
  for (const auto* k : variants()) {
    CAPTURE(simd::isa_name(k->isa));
    for (const std::size_t blocks : kSizes) {
      for (const std::uint64_t first : {0ull, 5ull, 0xFFFFFFFEull, 0x123456789ull}) {
        std::vector<double> a(2 * blocks), b(2 * blocks);
        simd::scalar_kernels().uniform_pairs(key, 0x1234567890ull, first, a);
        k->uniform_pairs(key, 0x1234567890ull, first, b);
        CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
      }
    }
  }
}

TEST_CASE("uniform_pairs matches the documented counter layout") {
  const auto key = rng::derive_key(2, "test/layout");
  std::vector<double> u(8);
  simd::active().uniform_pairs(key, 9, 100, u);
  for (int j = 0; j < 4; ++j) {
    const auto p = rng::uniforms(rng::philox4x32_10(rng::block_counter(9, 100 + j), key));
    CHECK(u[2 * j] == p.first);
    CHECK(u[2 * j + 1] == p.second);
  }
}

TEST_CASE("rayleigh agrees to a few ulp") {
  for (const auto* k : variants()) {
    for (const std::size_t n : kSizes) {
      auto a = uniforms(n, n + 1);
      // include the extremes of the open interval
      if (n >= 2) {
        a[0] = 0x1p-53;
        a[1] = 1.0 - 0x1p-53;
      }
      auto b = a;
      simd::scalar_kernels().rayleigh(a);
      k->rayleigh(b);
      for (std::size_t i = 0; i < n; ++i) CHECK(ulp_diff(a[i], b[i]) <= 4.0);
    }
  }
}

TEST_CASE("box_muller agrees with the scalar reference") {
  for (const auto* k : variants()) {
    for (const std::size_t n : kSizes) {
      const auto pairs = uniforms(2 * n, 3 * n + 7);
      std::vector<double> re0(n), im0(n), re1(n), im1(n);
      simd::scalar_kernels().box_muller(pairs, re0, im0);
      k->box_muller(pairs, re1, im1);
      for (std::size_t i = 0; i < n; ++i) {
        const double r = std::hypot(re0[i], im0[i]);
        CHECK(std::abs(re0[i] - re1[i]) <= 1e-14 * std::max(1.0, r));
        CHECK(std::abs(im0[i] - im1[i]) <= 1e-14 * std::max(1.0, r));
      }
    }
  }
}

TEST_CASE("box_muller quadrant boundaries") {
  // u_theta at multiples of 1/8 exercises every rotation branch
  for (const auto* k : variants()) {
    std::vector<double> pairs, re(16), im(16);
    for (int i = 0; i < 16; ++i) {
      pairs.push_back(std::exp(-0.5));  // r = 1
      pairs.push_back(i == 0 ? 0x1p-53 : i / 16.0);
    }
    k->box_muller(pairs, re, im);
    for (int i = 0; i < 16; ++i) {
      const double th = 2.0 * std::numbers::pi * pairs[2 * i + 1];
      CHECK(std::abs(re[i] - std::cos(th)) <= 2e-16 * 4);
      CHECK(std::abs(im[i] - std::sin(th)) <= 2e-16 * 4);
    }
  }
}

TEST_CASE("dot, sums and log1p agree") {
  for (const auto* k : variants()) {
    for (const std::size_t n : kSizes) {
      const auto a = uniforms(n, 100 + n);
      const auto b = uniforms(n, 200 + n);
      double ref = 0.0, mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        ref += a[i] * b[i];
        mag += std::abs(a[i] * b[i]);
      }
      CHECK(std::abs(k->dot(a, b) - ref) <= 1e-15 * (mag + 1.0) * 4);

      double s0, q0, s1, q1;
      simd::scalar_kernels().sum_sumsq(a, s0, q0);
      k->sum_sumsq(a, s1, q1);
      CHECK(std::abs(s0 - s1) <= 1e-14 * (s0 + 1.0));
      CHECK(std::abs(q0 - q1) <= 1e-14 * (q0 + 1.0));

      std::vector<double> snr(n);
      for (std::size_t i = 0; i < n; ++i) snr[i] = -std::log(a[i]) * (i % 3 == 0 ? 1e-9 : 10.0);
      std::vector<double> l0(n), l1(n);
      simd::scalar_kernels().log1p_scaled(snr, 1.4426950408889634, l0);
      k->log1p_scaled(snr, 1.4426950408889634, l1);
      for (std::size_t i = 0; i < n; ++i) CHECK(ulp_diff(l0[i], l1[i]) <= 4.0);
    }
  }
}

TEST_CASE("block_sums agree") {
  for (const auto* k : variants()) {
    for (const std::size_t len : {1ul, 3ul, 4ul, 7ul, 100ul}) {
      const auto v = uniforms(len * 9, len);
      std::vector<double> a(9), b(9);
      simd::scalar_kernels().block_sums(v, len, a);
      k->block_sums(v, len, b);
      for (int i = 0; i < 9; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-14 * (a[i] + 1.0));
    }
  }
}

TEST_CASE("on_off_service is bit-identical") {
  for (const auto* k : variants()) {
    for (const std::size_t n : kSizes) {
      auto snr = uniforms(n, 77 + n);
      if (n > 2) snr[1] = 0.5;  // exactly at the threshold counts as ON
      std::vector<double> a(n), b(n);
      simd::scalar_kernels().on_off_service(snr, 0.5, 1.25, a);
      k->on_off_service(snr, 0.5, 1.25, b);
      CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);
      if (n > 2) CHECK(b[1] == 1.25);
    }
  }
}
