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

// Data-parallel inner loops of the Monte Carlo samplers and estimators.
//
// Each kernel has a scalar reference implementation and optional AVX2 and
// NEON variants. The active table is picked once at startup from CPU
// support; IRS_EC_SIMD=scalar|avx2|neon overrides the choice. Integer
// kernels (uniform generation, ON-OFF thresholding) are bit-identical
// across variants. Floating-point kernels agree to a few ulp; results are
// reproducible for a fixed variant.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "irsec/rng.hpp"

namespace irsec::simd {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  Isa isa;

  // out[2j], out[2j+1] = uniforms of Philox block (first_block + j) of
  // `sample`; out.size() must be even.
  void (*uniform_pairs)(const rng::PhiloxKey& key, std::uint64_t sample, std::uint64_t first_block,
                        std::span<double> out);

  // u -> sqrt(-2 ln u), in place. Rayleigh amplitude with unit scale.
  void (*rayleigh)(std::span<double> values);

  // Box-Muller on interleaved uniform pairs (u_r, u_theta):
  // re[j] = r cos(2 pi u_theta), im[j] = r sin(2 pi u_theta), r = sqrt(-2 ln u_r).
  void (*box_muller)(std::span<const double> pairs, std::span<double> re, std::span<double> im);

  double (*dot)(std::span<const double> a, std::span<const double> b);

  // out[i] = snr[i] >= threshold ? bits : 0.
  void (*on_off_service)(std::span<const double> snr, double threshold, double bits, std::span<double> out);

  // out[i] = scale * ln(1 + snr[i]).
  void (*log1p_scaled)(std::span<const double> snr, double scale, std::span<double> out);

  // out[b] = sum of values[b*len .. (b+1)*len).
  void (*block_sums)(std::span<const double> values, std::size_t len, std::span<double> out);

  // Returns {sum, sum of squares}.
  void (*sum_sumsq)(std::span<const double> values, double& sum, double& sumsq);
};

const KernelTable& scalar_kernels();

// nullptr when the variant is not compiled in or the CPU lacks it.
const KernelTable* kernels_for(Isa isa);

// Runtime-selected table (honours IRS_EC_SIMD).
const KernelTable& active();

std::vector<Isa> available_isas();
std::string_view isa_name(Isa isa);

namespace detail {
#if defined(IRSEC_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
#if defined(IRSEC_HAVE_NEON)
const KernelTable& neon_kernels();
#endif
}  // namespace detail

}  // namespace irsec::simd
