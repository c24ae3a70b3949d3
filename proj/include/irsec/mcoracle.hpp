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

// Monte Carlo oracle: per-slot service simulation, the block estimator of
// the effective capacity, sample moments and the Kolmogorov-Smirnov
// distance against an analytical SNR law.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irsec/channel.hpp"
#include "irsec/eccore.hpp"

namespace irsec::mcoracle {

inline constexpr std::size_t kDefaultBlockLength = 100;
inline constexpr int kBootstrapResamples = 200;

struct EcEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t slots = 0;
  std::size_t blocks = 0;
  std::vector<std::string> warnings;
};

// -(1 / (alpha L)) ln mean_b exp(-alpha S_b) over blocks of L slots, with a
// percentile bootstrap over blocks ((q84 - q16) / 2) as standard error. The
// bootstrap stream is derived from the batch seed.
EcEstimate empirical_ec(const channel::SampleBatch& service, eccore::QosExponent alpha,
                        std::size_t block_length = kDefaultBlockLength);

// Per-slot service bits. Perfect CSI: B T log2(1 + snr). No CSI: r T when
// r <= B log2(1 + snr), else 0.
channel::SampleBatch simulate_service(const channel::LinkConfig& cfg, eccore::Scenario scenario,
                                      std::optional<double> rate, std::uint64_t seed, std::size_t slots);

// Maps an SNR batch to service bits, so one channel draw can serve several
// rates or scenarios.
channel::SampleBatch service_from_snr(const channel::SampleBatch& snr, const channel::LinkConfig& cfg,
                                      eccore::Scenario scenario, std::optional<double> rate);

struct Moments {
  double mean;
  double second_moment;
  double variance;  // unbiased
};

Moments empirical_moments(const channel::SampleBatch& samples);

double ks_distance(const channel::SampleBatch& samples, const channel::SnrDistribution& dist);

// Draws from the analytical law itself: inverse CDF for the exponential,
// (Z + sqrt(lambda))^2 beta with Box-Muller Z for the chi-square.
channel::SampleBatch sample_from_distribution(const channel::SnrDistribution& dist, std::uint64_t seed, std::size_t n);

}  // namespace irsec::mcoracle
