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

#include <cmath>
#include <numbers>

#include "irsec/simd/kernels.hpp"

namespace irsec::simd {
namespace {

void uniform_pairs(const rng::PhiloxKey& key, std::uint64_t sample, std::uint64_t first_block,
                   std::span<double> out) {
  const std::size_t blocks = out.size() / 2;
  for (std::size_t j = 0; j < blocks; ++j) {
    const auto u = rng::uniforms(rng::philox4x32_10(rng::block_counter(sample, first_block + j), key));
    out[2 * j] = u.first;
    out[2 * j + 1] = u.second;
  }
}

void rayleigh(std::span<double> v) {
  for (double& x : v) x = std::sqrt(-2.0 * std::log(x));
}

void box_muller(std::span<const double> pairs, std::span<double> re, std::span<double> im) {
  const std::size_t n = re.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double r = std::sqrt(-2.0 * std::log(pairs[2 * j]));
    const double theta = 2.0 * std::numbers::pi * pairs[2 * j + 1];
    re[j] = r * std::cos(theta);
    im[j] = r * std::sin(theta);
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void on_off_service(std::span<const double> snr, double threshold, double bits, std::span<double> out) {
  for (std::size_t i = 0; i < snr.size(); ++i) out[i] = snr[i] >= threshold ? bits : 0.0;
}

void log1p_scaled(std::span<const double> snr, double scale, std::span<double> out) {
  for (std::size_t i = 0; i < snr.size(); ++i) out[i] = scale * std::log1p(snr[i]);
}

void block_sums(std::span<const double> values, std::size_t len, std::span<double> out) {
  for (std::size_t b = 0; b < out.size(); ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += values[b * len + i];
    out[b] = s;
  }
}

void sum_sumsq(std::span<const double> values, double& sum, double& sumsq) {
  double s = 0.0, s2 = 0.0;
  for (const double x : values) {
    s += x;
    s2 += x * x;
  }
  sum = s;
  sumsq = s2;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, uniform_pairs, rayleigh,  box_muller, dot,
                                 on_off_service, log1p_scaled, block_sums, sum_sumsq};
  return table;
}

}  // namespace irsec::simd
