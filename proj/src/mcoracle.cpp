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

#include "irsec/mcoracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "irsec/errors.hpp"
#include "irsec/rng.hpp"
#include "irsec/simd/kernels.hpp"

namespace irsec::mcoracle {
namespace {

using channel::SampleBatch;
using channel::SampleKind;

constexpr double kUnderflowLog = -690.7755278982137;  // ln 1e-300

// ln mean exp(x_i)
double log_mean_exp(const std::vector<double>& x) {
  const double m = *std::max_element(x.begin(), x.end());
  double s = 0.0;
  for (const double v : x) s += std::exp(v - m);
  return m + std::log(s / static_cast<double>(x.size()));
}

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + frac * (v[i + 1] - v[i]);
}

}  // namespace

EcEstimate empirical_ec(const SampleBatch& service, eccore::QosExponent alpha, std::size_t block_length) {
  if (service.kind != SampleKind::service_bits) throw ConfigError("empirical_ec needs a service_bits batch");
  if (block_length == 0) throw ConfigError("block length must be >= 1");
  const std::size_t n = service.values.size();
  if (n == 0 || n % block_length != 0) {
    throw ConfigError("batch of " + std::to_string(n) + " slots is not a positive multiple of block length " +
                      std::to_string(block_length));
  }
  const std::size_t nb = n / block_length;
  std::vector<double> sums(nb);
  simd::active().block_sums(service.values, block_length, sums);

  const double a = alpha.value();
  const double scale = a * static_cast<double>(block_length);
  std::vector<double> x(nb);
  for (std::size_t b = 0; b < nb; ++b) x[b] = -a * sums[b];

  EcEstimate est;
  est.slots = n;
  est.blocks = nb;
  est.value = -log_mean_exp(x) / scale;
  if (*std::max_element(x.begin(), x.end()) < kUnderflowLog) {
    est.warnings.push_back("every block has exp(-alpha S) below 1e-300; alpha is large for this block length");
  }

  const rng::Stream stream(service.seed, "mcoracle/bootstrap");
  std::vector<double> reps(kBootstrapResamples), pick(nb);
  for (int r = 0; r < kBootstrapResamples; ++r) {
    for (std::size_t b = 0; b < nb; ++b) {
      pick[b] = x[stream.below(static_cast<std::uint32_t>(nb), static_cast<std::uint64_t>(r), b)];
    }
    reps[static_cast<std::size_t>(r)] = -log_mean_exp(pick) / scale;
  }
  std::sort(reps.begin(), reps.end());
  est.std_error = std::max(0.0, 0.5 * (quantile_sorted(reps, 0.84) - quantile_sorted(reps, 0.16)));
  return est;
}

SampleBatch service_from_snr(const SampleBatch& snr, const channel::LinkConfig& cfg, eccore::Scenario scenario,
                             std::optional<double> rate) {
  if (snr.kind != SampleKind::snr) throw ConfigError("service_from_snr needs an snr batch");
  const bool nocsi = eccore::is_nocsi(scenario);
  if (nocsi != rate.has_value()) throw ConfigError("a rate is required exactly for the no-CSI scenarios");
  SampleBatch out{std::vector<double>(snr.values.size()), snr.seed, SampleKind::service_bits};
  const auto& k = simd::active();
  if (nocsi) {
    if (!(*rate >= 0.0)) throw DomainError("rate must be >= 0");
    const double threshold = std::expm1(*rate * std::numbers::ln2 / cfg.bandwidth);
    k.on_off_service(snr.values, threshold, *rate * cfg.slot, out.values);
  } else {
    k.log1p_scaled(snr.values, cfg.bandwidth * cfg.slot / std::numbers::ln2, out.values);
  }
  return out;
}

SampleBatch simulate_service(const channel::LinkConfig& cfg, eccore::Scenario scenario, std::optional<double> rate,
                             std::uint64_t seed, std::size_t slots) {
  if (eccore::is_nocsi(scenario) != rate.has_value()) {
    throw ConfigError("a rate is required exactly for the no-CSI scenarios");
  }
  if (eccore::is_siso(scenario) && cfg.n_tx != 1) throw ConfigError("single-antenna scenario requires n_tx = 1");
  const SampleBatch snr =
      eccore::is_siso(scenario) ? channel::sample_siso_snr(cfg, seed, slots) : channel::sample_miso_snr(cfg, seed, slots);
  return service_from_snr(snr, cfg, scenario, rate);
}

Moments empirical_moments(const SampleBatch& samples) {
  const std::size_t n = samples.values.size();
  if (n == 0) throw ConfigError("empirical_moments needs a nonempty batch");
  // shifted sums keep the variance accurate when the mean dominates
  const double shift = samples.values.front();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = samples.values[i] - shift;
  double s = 0.0, s2 = 0.0;
  simd::active().sum_sumsq(d, s, s2);
  const double nn = static_cast<double>(n);
  const double mean_d = s / nn;
  const double mean = shift + mean_d;
  const double var = n > 1 ? std::max(0.0, (s2 - nn * mean_d * mean_d) / (nn - 1.0)) : 0.0;
  const double second = s2 / nn + 2.0 * shift * mean_d + shift * shift;
  return {mean, second, var};
}

double ks_distance(const SampleBatch& samples, const channel::SnrDistribution& dist) {
  if (samples.kind != SampleKind::snr) throw ConfigError("ks_distance needs an snr batch");
  if (samples.values.empty()) throw ConfigError("ks_distance needs a nonempty batch");
  std::vector<double> v = samples.values;
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = channel::snr_cdf(dist, std::max(0.0, v[i]));
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

SampleBatch sample_from_distribution(const channel::SnrDistribution& dist, std::uint64_t seed, std::size_t n) {
  if (n == 0) throw ConfigError("sample count must be >= 1");
  SampleBatch out{std::vector<double>(n), seed, SampleKind::snr};
  const auto key = rng::derive_key(seed, "mcoracle/distribution");
  const auto& k = simd::active();
  const std::size_t chunk = 4096;
  std::vector<double> pairs(2 * chunk), re(chunk), im(chunk);
  for (std::size_t first = 0; first < n; first += chunk) {
    const std::size_t m = std::min(chunk, n - first);
    const auto pv = std::span(pairs).first(2 * m);
    k.uniform_pairs(key, 0, first, pv);
    if (const auto* s = std::get_if<channel::ScaledNoncentralChiSq>(&dist)) {
      k.box_muller(pv, std::span(re).first(m), std::span(im).first(m));
      const double a = std::sqrt(s->lambda);
      for (std::size_t i = 0; i < m; ++i) out.values[first + i] = s->beta * (re[i] + a) * (re[i] + a);
    } else {
      const double kappa = std::get<channel::Exponential>(dist).kappa;
      for (std::size_t i = 0; i < m; ++i) out.values[first + i] = -std::log(pv[2 * i]) / kappa;
    }
  }
  return out;
}

}  // namespace irsec::mcoracle
