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

// NEON (aarch64) kernel variants, two doubles per vector.

#include <arm_neon.h>

#include <cmath>
#include <numbers>

#include "irsec/simd/kernels.hpp"

namespace irsec::simd::detail {
namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;

inline float64x2_t fma(float64x2_t a, float64x2_t b, float64x2_t c) { return vfmaq_f64(c, a, b); }

inline float64x2_t log_pd(float64x2_t x) {
  const uint64x2_t bits = vreinterpretq_u64_f64(x);
  int64x2_t e = vsubq_s64(vreinterpretq_s64_u64(vshrq_n_u64(bits, 52)), vdupq_n_s64(1023));
  float64x2_t m = vreinterpretq_f64_u64(
      vorrq_u64(vandq_u64(bits, vdupq_n_u64(0x000FFFFFFFFFFFFFull)), vdupq_n_u64(0x3FF0000000000000ull)));
  const uint64x2_t big = vcgtq_f64(m, vdupq_n_f64(std::numbers::sqrt2));
  m = vbslq_f64(big, vmulq_f64(m, vdupq_n_f64(0.5)), m);
  e = vsubq_s64(e, vreinterpretq_s64_u64(big));
  const float64x2_t ed = vcvtq_f64_s64(e);

  const float64x2_t f = vsubq_f64(m, vdupq_n_f64(1.0));
  const float64x2_t s = vdivq_f64(f, vaddq_f64(vdupq_n_f64(2.0), f));
  const float64x2_t z = vmulq_f64(s, s);
  float64x2_t r = vdupq_n_f64(2.0 / 23.0);
  for (const double c : {2.0 / 21.0, 2.0 / 19.0, 2.0 / 17.0, 2.0 / 15.0, 2.0 / 13.0, 2.0 / 11.0, 2.0 / 9.0,
                         2.0 / 7.0, 2.0 / 5.0, 2.0 / 3.0}) {
    r = fma(r, z, vdupq_n_f64(c));
  }
  r = vmulq_f64(r, z);
  const float64x2_t log_m = vfmsq_f64(f, s, vsubq_f64(f, r));
  return fma(ed, vdupq_n_f64(kLn2Hi), fma(ed, vdupq_n_f64(kLn2Lo), log_m));
}

inline float64x2_t log1p_pd(float64x2_t x) {
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t u = vaddq_f64(one, x);
  const float64x2_t err = vsubq_f64(vsubq_f64(u, one), x);
  return vsubq_f64(log_pd(u), vdivq_f64(err, u));
}

inline void sincos_turns(float64x2_t u, float64x2_t& c_out, float64x2_t& s_out) {
  const float64x2_t t = vmulq_f64(u, vdupq_n_f64(4.0));
  const float64x2_t q = vrndnq_f64(t);
  const float64x2_t phi = vmulq_f64(vsubq_f64(t, q), vdupq_n_f64(std::numbers::pi / 2.0));
  const float64x2_t z = vmulq_f64(phi, phi);

  float64x2_t sp = vdupq_n_f64(1.0 / 355687428096000.0);
  for (const double c : {-1.0 / 1307674368000.0, 1.0 / 6227020800.0, -1.0 / 39916800.0, 1.0 / 362880.0,
                         -1.0 / 5040.0, 1.0 / 120.0, -1.0 / 6.0}) {
    sp = fma(sp, z, vdupq_n_f64(c));
  }
  const float64x2_t sin_phi = fma(vmulq_f64(sp, z), phi, phi);

  float64x2_t cp = vdupq_n_f64(1.0 / 6402373705728000.0);
  for (const double c : {-1.0 / 20922789888000.0, 1.0 / 87178291200.0, -1.0 / 479001600.0, 1.0 / 3628800.0,
                         -1.0 / 40320.0, 1.0 / 720.0, -1.0 / 24.0, 0.5}) {
    cp = fma(cp, z, vdupq_n_f64(c));
  }
  const float64x2_t cos_phi = vfmsq_f64(vdupq_n_f64(1.0), cp, z);

  const int64x2_t qi = vcvtq_s64_f64(q);
  const uint64x2_t odd = vceqq_s64(vandq_s64(qi, vdupq_n_s64(1)), vdupq_n_s64(1));
  const uint64x2_t upper = vceqq_s64(vandq_s64(qi, vdupq_n_s64(2)), vdupq_n_s64(2));
  const float64x2_t c = vbslq_f64(odd, vnegq_f64(sin_phi), cos_phi);
  const float64x2_t s = vbslq_f64(odd, cos_phi, sin_phi);
  c_out = vbslq_f64(upper, vnegq_f64(c), c);
  s_out = vbslq_f64(upper, vnegq_f64(s), s);
}

inline double open_unit_word(std::uint32_t lo, std::uint32_t hi) {
  return rng::open_unit((static_cast<std::uint64_t>(hi) << 32) | lo);
}

void uniform_pairs(const rng::PhiloxKey& key, std::uint64_t sample, std::uint64_t first_block,
                   std::span<double> out) {
  const std::size_t blocks = out.size() / 2;
  std::uint32_t k0[10], k1[10];
  k0[0] = key[0];
  k1[0] = key[1];
  for (int r = 1; r < 10; ++r) {
    k0[r] = k0[r - 1] + rng::kPhiloxW0;
    k1[r] = k1[r - 1] + rng::kPhiloxW1;
  }
  const uint32x2_t m0 = vdup_n_u32(rng::kPhiloxM0);
  const uint32x2_t m1 = vdup_n_u32(rng::kPhiloxM1);
  std::size_t j = 0;
  for (; j + 2 <= blocks; j += 2) {
    const std::uint64_t b = first_block + j;
    const std::uint32_t lo_init[2] = {static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b + 1)};
    const std::uint32_t hi_init[2] = {static_cast<std::uint32_t>(b >> 32), static_cast<std::uint32_t>((b + 1) >> 32)};
    uint32x2_t c0 = vld1_u32(lo_init);
    uint32x2_t c1 = vld1_u32(hi_init);
    uint32x2_t c2 = vdup_n_u32(static_cast<std::uint32_t>(sample));
    uint32x2_t c3 = vdup_n_u32(static_cast<std::uint32_t>(sample >> 32));
    for (int r = 0; r < 10; ++r) {
      const uint64x2_t p0 = vmull_u32(c0, m0);
      const uint64x2_t p1 = vmull_u32(c2, m1);
      const uint32x2_t n0 = veor_u32(veor_u32(vshrn_n_u64(p1, 32), c1), vdup_n_u32(k0[r]));
      const uint32x2_t n2 = veor_u32(veor_u32(vshrn_n_u64(p0, 32), c3), vdup_n_u32(k1[r]));
      c1 = vmovn_u64(p1);
      c3 = vmovn_u64(p0);
      c0 = n0;
      c2 = n2;
    }
    for (int lane = 0; lane < 2; ++lane) {
      std::uint32_t w0[2], w1[2], w2[2], w3[2];
      vst1_u32(w0, c0);
      vst1_u32(w1, c1);
      vst1_u32(w2, c2);
      vst1_u32(w3, c3);
      out[2 * (j + lane)] = open_unit_word(w0[lane], w1[lane]);
      out[2 * (j + lane) + 1] = open_unit_word(w2[lane], w3[lane]);
    }
  }
  for (; j < blocks; ++j) {
    const auto u = rng::uniforms(rng::philox4x32_10(rng::block_counter(sample, first_block + j), key));
    out[2 * j] = u.first;
    out[2 * j + 1] = u.second;
  }
}

void rayleigh(std::span<double> v) {
  const std::size_t n = v.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(v.data() + i);
    vst1q_f64(v.data() + i, vsqrtq_f64(vmulq_f64(vdupq_n_f64(-2.0), log_pd(x))));
  }
  for (; i < n; ++i) v[i] = std::sqrt(-2.0 * std::log(v[i]));
}

void box_muller(std::span<const double> pairs, std::span<double> re, std::span<double> im) {
  const std::size_t n = re.size();
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2x2_t p = vld2q_f64(pairs.data() + 2 * j);
    const float64x2_t r = vsqrtq_f64(vmulq_f64(vdupq_n_f64(-2.0), log_pd(p.val[0])));
    float64x2_t c, s;
    sincos_turns(p.val[1], c, s);
    vst1q_f64(re.data() + j, vmulq_f64(r, c));
    vst1q_f64(im.data() + j, vmulq_f64(r, s));
  }
  for (; j < n; ++j) {
    const double r = std::sqrt(-2.0 * std::log(pairs[2 * j]));
    const double theta = 2.0 * std::numbers::pi * pairs[2 * j + 1];
    re[j] = r * std::cos(theta);
    im[j] = r * std::sin(theta);
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a.data() + i), vld1q_f64(b.data() + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a.data() + i + 2), vld1q_f64(b.data() + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void on_off_service(std::span<const double> snr, double threshold, double bits, std::span<double> out) {
  const std::size_t n = snr.size();
  const float64x2_t thr = vdupq_n_f64(threshold);
  const uint64x2_t val = vreinterpretq_u64_f64(vdupq_n_f64(bits));
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint64x2_t on = vcgeq_f64(vld1q_f64(snr.data() + i), thr);
    vst1q_f64(out.data() + i, vreinterpretq_f64_u64(vandq_u64(on, val)));
  }
  for (; i < n; ++i) out[i] = snr[i] >= threshold ? bits : 0.0;
}

void log1p_scaled(std::span<const double> snr, double scale, std::span<double> out) {
  const std::size_t n = snr.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out.data() + i, vmulq_f64(vdupq_n_f64(scale), log1p_pd(vld1q_f64(snr.data() + i))));
  }
  for (; i < n; ++i) out[i] = scale * std::log1p(snr[i]);
}

void block_sums(std::span<const double> values, std::size_t len, std::span<double> out) {
  for (std::size_t b = 0; b < out.size(); ++b) {
    const double* p = values.data() + b * len;
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) acc = vaddq_f64(acc, vld1q_f64(p + i));
    double s = vaddvq_f64(acc);
    for (; i < len; ++i) s += p[i];
    out[b] = s;
  }
}

void sum_sumsq(std::span<const double> values, double& sum, double& sumsq) {
  const std::size_t n = values.size();
  float64x2_t s = vdupq_n_f64(0.0), s2 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(values.data() + i);
    s = vaddq_f64(s, x);
    s2 = vfmaq_f64(s2, x, x);
  }
  double a = vaddvq_f64(s), b = vaddvq_f64(s2);
  for (; i < n; ++i) {
    a += values[i];
    b += values[i] * values[i];
  }
  sum = a;
  sumsq = b;
}

}  // namespace

const KernelTable& neon_kernels() {
  static const KernelTable table{Isa::neon, uniform_pairs, rayleigh,  box_muller, dot,
                                 on_off_service, log1p_scaled, block_sums, sum_sumsq};
  return table;
}

}  // namespace irsec::simd::detail
