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

// Link model: geometry and link budget, the analytical SNR laws for the
// single- and multi-antenna base station, and Monte Carlo samplers that
// build the same SNR from per-element fading.
//
// Amplitude convention: every per-hop fading amplitude is Rayleigh with
// scale 1 (E|h|^2 = 2). Complex Gaussian entries have independent N(0, 1)
// real and imaginary parts.

#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace irsec::channel {

struct LinkConfig {
  double d1 = 50.0;      // BS to IRS, m
  double d2 = 50.0;      // IRS to UE, m
  double x_irs = 1.0;    // m
  double y_irs = 1.0;    // m
  double phi_inc = std::numbers::pi / 6.0;  // rad
  double g_t = 10.0;     // linear
  double g_r = 10.0;     // linear
  double p_t = 1e-3;     // W
  double sigma2 = 1e-6;  // W
  int n_elems = 100;
  int n_tx = 1;
  double bandwidth = 1.0;  // Hz
  double slot = 1.0;       // s
  // Empty means equal power, f_j = 1 / sqrt(n_tx).
  std::vector<std::complex<double>> precoder;

  // Throws ConfigError. p_t = 0 is accepted (samplers return zeros); the
  // analytical laws require p_t > 0.
  void validate() const;

  std::vector<std::complex<double>> effective_precoder() const;
  double precoder_power() const;  // sum |f_j|^2
};

struct ScaledNoncentralChiSq {
  double beta;
  double lambda;
};

struct Exponential {
  double kappa;
};

using SnrDistribution = std::variant<ScaledNoncentralChiSq, Exponential>;

enum class SampleKind { snr, service_bits };

struct SampleBatch {
  std::vector<double> values;
  std::uint64_t seed = 0;
  SampleKind kind = SampleKind::snr;
};

// How the exponential rate of the multi-antenna SNR is obtained.
//   direct        sigma^2 / (2 N p_t zeta sum|f|^2), the exact law of the
//                 all-ones reduced sum
//   fitted        1 / sample mean of sample_miso_snr
//   paper_squared sigma^4 / (2 N^2 (p_t zeta sum|f|^2)^2)
//   paper_linear  sigma^4 / (4 N^2 p_t zeta sum|f|^2)
enum class KappaMode { direct, fitted, paper_squared, paper_linear };

struct KappaOptions {
  KappaMode mode = KappaMode::direct;
  std::uint64_t fit_seed = 0x5EEDull;
  std::size_t fit_samples = 200000;
};

// Two-hop pathloss zeta.
double pathloss(const LinkConfig& cfg);

// Requires n_tx == 1 and p_t > 0.
SnrDistribution siso_snr_dist(const LinkConfig& cfg);

double miso_kappa(const LinkConfig& cfg, const KappaOptions& opts = {});
SnrDistribution miso_snr_dist(const LinkConfig& cfg, const KappaOptions& opts = {});

double snr_mean(const SnrDistribution& dist);
double snr_cdf(const SnrDistribution& dist, double x);
// 1 - snr_cdf without cancellation.
double snr_ccdf(const SnrDistribution& dist, double x);

// Phase-aligned coherent sum over N elements of products of two unit-scale
// Rayleigh amplitudes, squared and scaled by p_t zeta / sigma^2.
SampleBatch sample_siso_snr(const LinkConfig& cfg, std::uint64_t seed, std::size_t n);

// p_t zeta |1^T H f|^2 / sigma^2 with H an N x n_tx matrix of complex
// Gaussians; the IRS reflection makes the second hop an all-ones row.
SampleBatch sample_miso_snr(const LinkConfig& cfg, std::uint64_t seed, std::size_t n);

// Sample-range variants writing out[k] for sample index first + k.
void sample_siso_snr_into(const LinkConfig& cfg, std::uint64_t seed, std::uint64_t first, std::span<double> out);
void sample_miso_snr_into(const LinkConfig& cfg, std::uint64_t seed, std::uint64_t first, std::span<double> out);

}  // namespace irsec::channel
