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

// AVX2 + FMA kernel variants. Compiled with -mavx2 -mfma; only installed
// in the dispatch table when the running CPU reports both features.

#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "irsec/simd/kernels.hpp"

namespace irsec::simd::detail {
namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Natural log for positive normal doubles. Reduces to m in [sqrt(1/2),
// sqrt(2)) and evaluates log(m) = f - s (f - R(s^2)), s = f / (2 + f).
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000ll);
  __m256i e = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1023));
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(std::numbers::sqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_sub_epi64(e, _mm256_castpd_si256(big));  // mask is -1 where big

  // int64 -> double for |e| < 2^51
  const __m256i magic_i = _mm256_set1_epi64x(0x4338000000000000ll);
  const __m256d ed = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(e, magic_i)), _mm256_set1_pd(0x1.8p52));

  const __m256d f = _mm256_sub_pd(m, _mm256_set1_pd(1.0));
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
  const __m256d z = _mm256_mul_pd(s, s);
  __m256d r = _mm256_set1_pd(2.0 / 23.0);
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(2.0 / 21.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(2.0 / 19.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(2.0 / 17.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(2.0 / 15.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(2.0 / 13.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(2.0 / 11.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(2.0 / 9.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(2.0 / 7.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(2.0 / 5.0));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(2.0 / 3.0));
  r = _mm256_mul_pd(r, z);
  const __m256d log_m = _mm256_fnmadd_pd(s, _mm256_sub_pd(f, r), f);
  return _mm256_fmadd_pd(ed, _mm256_set1_pd(kLn2Hi), _mm256_fmadd_pd(ed, _mm256_set1_pd(kLn2Lo), log_m));
}

// ln(1 + x) for x >= 0 with the rounding of 1 + x compensated.
inline __m256d log1p_pd(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d u = _mm256_add_pd(one, x);
  const __m256d err = _mm256_sub_pd(_mm256_sub_pd(u, one), x);
  return _mm256_sub_pd(log_pd(u), _mm256_div_pd(err, u));
}

// cos and sin of 2 pi u for u in (0, 1).
inline void sincos_turns(__m256d u, __m256d& c_out, __m256d& s_out) {
  const __m256d t = _mm256_mul_pd(u, _mm256_set1_pd(4.0));
  const __m256d q = _mm256_round_pd(t, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d phi = _mm256_mul_pd(_mm256_sub_pd(t, q), _mm256_set1_pd(std::numbers::pi / 2.0));
  const __m256d z = _mm256_mul_pd(phi, phi);

  __m256d sp = _mm256_set1_pd(1.0 / 355687428096000.0);  // 1/17!
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(-1.0 / 1307674368000.0));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(1.0 / 6227020800.0));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(-1.0 / 39916800.0));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(1.0 / 362880.0));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(-1.0 / 5040.0));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(1.0 / 120.0));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(-1.0 / 6.0));
  sp = _mm256_mul_pd(sp, z);
  const __m256d sin_phi = _mm256_fmadd_pd(sp, phi, phi);

  __m256d cp = _mm256_set1_pd(1.0 / 6402373705728000.0);  // 1/18!
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(-1.0 / 20922789888000.0));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(1.0 / 87178291200.0));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(-1.0 / 479001600.0));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(1.0 / 3628800.0));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(-1.0 / 40320.0));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(1.0 / 720.0));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(-1.0 / 24.0));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(0.5));
  const __m256d cos_phi = _mm256_fnmadd_pd(cp, z, _mm256_set1_pd(1.0));

  // quarter turns q mod 4: odd -> (c, s) = (-s, c); q mod 4 >= 2 -> negate both
  const __m256d q4 = _mm256_sub_pd(q, _mm256_mul_pd(_mm256_set1_pd(4.0), _mm256_floor_pd(_mm256_mul_pd(q, _mm256_set1_pd(0.25)))));
  const __m256d q2 = _mm256_sub_pd(q4, _mm256_mul_pd(_mm256_set1_pd(2.0), _mm256_floor_pd(_mm256_mul_pd(q4, _mm256_set1_pd(0.5)))));
  const __m256d odd = _mm256_cmp_pd(q2, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
  const __m256d upper = _mm256_cmp_pd(q4, _mm256_set1_pd(2.0), _CMP_GE_OQ);
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d c = _mm256_blendv_pd(cos_phi, _mm256_xor_pd(sin_phi, sign), odd);
  __m256d s = _mm256_blendv_pd(sin_phi, cos_phi, odd);
  const __m256d flip = _mm256_and_pd(upper, sign);
  c_out = _mm256_xor_pd(c, flip);
  s_out = _mm256_xor_pd(s, flip);
}

inline __m256d open_unit_pd(__m256i lo_word, __m256i hi_word) {
  const __m256i bits = _mm256_or_si256(_mm256_slli_epi64(hi_word, 32), lo_word);
  const __m256i m = _mm256_or_si256(_mm256_srli_epi64(bits, 12), _mm256_set1_epi64x(0x3FF0000000000000ll));
  return _mm256_add_pd(_mm256_sub_pd(_mm256_castsi256_pd(m), _mm256_set1_pd(1.0)), _mm256_set1_pd(0x1p-53));
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
  const __m256i lomask = _mm256_set1_epi64x(0xFFFFFFFFll);
  const __m256i m0 = _mm256_set1_epi64x(rng::kPhiloxM0);
  const __m256i m1 = _mm256_set1_epi64x(rng::kPhiloxM1);
  const __m256i c2_init = _mm256_set1_epi64x(static_cast<std::uint32_t>(sample));
  const __m256i c3_init = _mm256_set1_epi64x(static_cast<std::uint32_t>(sample >> 32));

  // Four independent counter vectors per pass hide the multiply latency.
  constexpr int kVec = 4;
  std::size_t j = 0;
  for (; j + 4 * kVec <= blocks; j += 4 * kVec) {
    __m256i c0[kVec], c1[kVec], c2[kVec], c3[kVec];
    for (int v = 0; v < kVec; ++v) {
      const std::uint64_t b = first_block + j + 4 * v;
      const __m256i base = _mm256_set_epi64x(static_cast<long long>(b + 3), static_cast<long long>(b + 2),
                                             static_cast<long long>(b + 1), static_cast<long long>(b));
      c0[v] = _mm256_and_si256(base, lomask);
      c1[v] = _mm256_srli_epi64(base, 32);
      c2[v] = c2_init;
      c3[v] = c3_init;
    }
    for (int r = 0; r < 10; ++r) {
      const __m256i kr0 = _mm256_set1_epi64x(k0[r]);
      const __m256i kr1 = _mm256_set1_epi64x(k1[r]);
      for (int v = 0; v < kVec; ++v) {
        const __m256i p0 = _mm256_mul_epu32(c0[v], m0);
        const __m256i p1 = _mm256_mul_epu32(c2[v], m1);
        const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p1, 32), c1[v]), kr0);
        const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p0, 32), c3[v]), kr1);
        c1[v] = _mm256_and_si256(p1, lomask);
        c3[v] = _mm256_and_si256(p0, lomask);
        c0[v] = n0;
        c2[v] = n2;
      }
    }
    for (int v = 0; v < kVec; ++v) {
      const __m256d first = open_unit_pd(c0[v], c1[v]);
      const __m256d second = open_unit_pd(c2[v], c3[v]);
      const __m256d lo = _mm256_unpacklo_pd(first, second);  // f0 s0 f2 s2
      const __m256d hi = _mm256_unpackhi_pd(first, second);  // f1 s1 f3 s3
      double* dst = out.data() + 2 * (j + 4 * v);
      _mm256_storeu_pd(dst, _mm256_permute2f128_pd(lo, hi, 0x20));
      _mm256_storeu_pd(dst + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
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
  double* p = v.data();
  std::size_t i = 0;
  const __m256d m2 = _mm256_set1_pd(-2.0);
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(p + i);
    _mm256_storeu_pd(p + i, _mm256_sqrt_pd(_mm256_mul_pd(m2, log_pd(x))));
  }
  for (; i < n; ++i) p[i] = std::sqrt(-2.0 * std::log(p[i]));
}

void box_muller(std::span<const double> pairs, std::span<double> re, std::span<double> im) {
  const std::size_t n = re.size();
  const double* p = pairs.data();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d a = _mm256_loadu_pd(p + 2 * j);
    const __m256d b = _mm256_loadu_pd(p + 2 * j + 4);
    const __m256d ur = _mm256_permute4x64_pd(_mm256_unpacklo_pd(a, b), 0xD8);
    const __m256d ut = _mm256_permute4x64_pd(_mm256_unpackhi_pd(a, b), 0xD8);
    const __m256d r = _mm256_sqrt_pd(_mm256_mul_pd(_mm256_set1_pd(-2.0), log_pd(ur)));
    __m256d c, s;
    sincos_turns(ut, c, s);
    _mm256_storeu_pd(re.data() + j, _mm256_mul_pd(r, c));
    _mm256_storeu_pd(im.data() + j, _mm256_mul_pd(r, s));
  }
  for (; j < n; ++j) {
    const double r = std::sqrt(-2.0 * std::log(p[2 * j]));
    const double theta = 2.0 * std::numbers::pi * p[2 * j + 1];
    re[j] = r * std::cos(theta);
    im[j] = r * std::sin(theta);
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void on_off_service(std::span<const double> snr, double threshold, double bits, std::span<double> out) {
  const std::size_t n = snr.size();
  const __m256d thr = _mm256_set1_pd(threshold);
  const __m256d val = _mm256_set1_pd(bits);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d on = _mm256_cmp_pd(_mm256_loadu_pd(snr.data() + i), thr, _CMP_GE_OQ);
    _mm256_storeu_pd(out.data() + i, _mm256_and_pd(on, val));
  }
  for (; i < n; ++i) out[i] = snr[i] >= threshold ? bits : 0.0;
}

void log1p_scaled(std::span<const double> snr, double scale, std::span<double> out) {
  const std::size_t n = snr.size();
  const __m256d sc = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(sc, log1p_pd(_mm256_loadu_pd(snr.data() + i))));
  }
  for (; i < n; ++i) out[i] = scale * std::log1p(snr[i]);
}

void block_sums(std::span<const double> values, std::size_t len, std::span<double> out) {
  for (std::size_t b = 0; b < out.size(); ++b) {
    const double* p = values.data() + b * len;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(p + i));
    double s = hsum(acc);
    for (; i < len; ++i) s += p[i];
    out[b] = s;
  }
}

void sum_sumsq(std::span<const double> values, double& sum, double& sumsq) {
  const std::size_t n = values.size();
  __m256d s = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(values.data() + i);
    s = _mm256_add_pd(s, x);
    s2 = _mm256_fmadd_pd(x, x, s2);
  }
  double a = hsum(s), b = hsum(s2);
  for (; i < n; ++i) {
    a += values[i];
    b += values[i] * values[i];
  }
  sum = a;
  sumsq = b;
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{Isa::avx2, uniform_pairs, rayleigh,  box_muller, dot,
                                 on_off_service, log1p_scaled, block_sums, sum_sumsq};
  return table;
}

}  // namespace irsec::simd::detail
