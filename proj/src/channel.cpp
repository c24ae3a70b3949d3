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

#include "irsec/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "irsec/errors.hpp"
#include "irsec/rng.hpp"
#include "irsec/simd/kernels.hpp"
#include "irsec/specfun.hpp"

namespace irsec::channel {
namespace {

constexpr std::string_view kSisoStream = "channel/siso_amplitudes";
constexpr std::string_view kMisoStream = "channel/miso_gains";

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("LinkConfig.") + name + " must be positive and finite");
}

double link_scale(const LinkConfig& cfg) { return cfg.p_t * pathloss(cfg) / cfg.sigma2; }

}  // namespace

void LinkConfig::validate() const {
  require_positive(d1, "d1");
  require_positive(d2, "d2");
  require_positive(x_irs, "x_irs");
  require_positive(y_irs, "y_irs");
  require_positive(g_t, "g_t");
  require_positive(g_r, "g_r");
  require_positive(sigma2, "sigma2");
  require_positive(bandwidth, "bandwidth");
  require_positive(slot, "slot");
  if (!(p_t >= 0.0) || !std::isfinite(p_t)) throw ConfigError("LinkConfig.p_t must be nonnegative and finite");
  if (!(phi_inc >= 0.0 && phi_inc <= std::numbers::pi / 2.0)) throw ConfigError("LinkConfig.phi_inc must lie in [0, pi/2]");
  if (n_elems < 1) throw ConfigError("LinkConfig.n_elems must be >= 1");
  if (n_tx < 1) throw ConfigError("LinkConfig.n_tx must be >= 1");
  if (!precoder.empty()) {
    if (precoder.size() != static_cast<std::size_t>(n_tx)) {
      throw ConfigError("LinkConfig.precoder has " + std::to_string(precoder.size()) + " weights, n_tx is " +
                        std::to_string(n_tx));
    }
    if (!(precoder_power() > 0.0)) throw ConfigError("LinkConfig.precoder has zero norm");
  }
}

std::vector<std::complex<double>> LinkConfig::effective_precoder() const {
  if (!precoder.empty()) return precoder;
  return std::vector<std::complex<double>>(static_cast<std::size_t>(n_tx), 1.0 / std::sqrt(static_cast<double>(n_tx)));
}

double LinkConfig::precoder_power() const {
  if (precoder.empty()) return 1.0;
  double s = 0.0;
  for (const auto& f : precoder) s += std::norm(f);
  return s;
}

double pathloss(const LinkConfig& cfg) {
  cfg.validate();
  const double area = cfg.x_irs * cfg.y_irs / (cfg.d1 * cfg.d2);
  const double c = std::cos(cfg.phi_inc);
  const double four_pi = 4.0 * std::numbers::pi;
  return cfg.g_t * cfg.g_r / (four_pi * four_pi) * area * area * c * c;
}

SnrDistribution siso_snr_dist(const LinkConfig& cfg) {
  cfg.validate();
  if (cfg.n_tx != 1) throw ConfigError("single-antenna SNR law requires n_tx = 1");
  const double scale = link_scale(cfg);
  if (!(scale > 0.0)) throw DomainError("SNR law needs p_t > 0 and phi_inc < pi/2");
  const double n = cfg.n_elems;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return ScaledNoncentralChiSq{n * scale * (16.0 - pi2) / 4.0, n * pi2 / (16.0 - pi2)};
}

double miso_kappa(const LinkConfig& cfg, const KappaOptions& opts) {
  cfg.validate();
  const double scale = link_scale(cfg);
  if (!(scale > 0.0)) throw DomainError("SNR law needs p_t > 0 and phi_inc < pi/2");
  const double n = cfg.n_elems;
  const double g = scale * cfg.precoder_power();  // p_t zeta sum|f|^2 / sigma^2
  switch (opts.mode) {
    case KappaMode::direct:
      return 1.0 / (2.0 * n * g);
    case KappaMode::paper_squared:
      return 1.0 / (2.0 * n * n * g * g);
    case KappaMode::paper_linear: {
      const double ptz = cfg.p_t * pathloss(cfg) * cfg.precoder_power();
      return cfg.sigma2 * cfg.sigma2 / (4.0 * n * n * ptz);
    }
    case KappaMode::fitted: {
      if (opts.fit_samples == 0) throw ConfigError("KappaOptions.fit_samples must be >= 1");
      const SampleBatch b = sample_miso_snr(cfg, opts.fit_seed, opts.fit_samples);
      double s = 0.0;
      for (const double v : b.values) s += v;
      return static_cast<double>(b.values.size()) / s;
    }
  }
  throw ConfigError("unknown KappaMode");
}

SnrDistribution miso_snr_dist(const LinkConfig& cfg, const KappaOptions& opts) {
  return Exponential{miso_kappa(cfg, opts)};
}

double snr_mean(const SnrDistribution& dist) {
  if (const auto* s = std::get_if<ScaledNoncentralChiSq>(&dist)) return s->beta * (1.0 + s->lambda);
  return 1.0 / std::get<Exponential>(dist).kappa;
}

double snr_cdf(const SnrDistribution& dist, double x) {
  if (x < 0.0 || std::isnan(x)) throw DomainError("snr_cdf: x must be >= 0");
  if (const auto* s = std::get_if<ScaledNoncentralChiSq>(&dist)) {
    return specfun::marcum_q_half_complement(std::sqrt(s->lambda), std::sqrt(x / s->beta));
  }
  return -std::expm1(-std::get<Exponential>(dist).kappa * x);
}

double snr_ccdf(const SnrDistribution& dist, double x) {
  if (x < 0.0 || std::isnan(x)) throw DomainError("snr_ccdf: x must be >= 0");
  if (const auto* s = std::get_if<ScaledNoncentralChiSq>(&dist)) {
    return specfun::marcum_q_half(std::sqrt(s->lambda), std::sqrt(x / s->beta));
  }
  return std::exp(-std::get<Exponential>(dist).kappa * x);
}

void sample_siso_snr_into(const LinkConfig& cfg, std::uint64_t seed, std::uint64_t first, std::span<double> out) {
  cfg.validate();
  const double scale = link_scale(cfg);
  if (scale == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const auto& k = simd::active();
  const auto key = rng::derive_key(seed, kSisoStream);
  const std::size_t n = static_cast<std::size_t>(cfg.n_elems);
  const std::size_t nb = (n + 1) / 2;
  std::vector<double> a(2 * nb), b(2 * nb);
  const std::span<double> av = std::span(a).first(n);
  const std::span<double> bv = std::span(b).first(n);
  for (std::size_t s = 0; s < out.size(); ++s) {
    k.uniform_pairs(key, first + s, 0, a);
    k.uniform_pairs(key, first + s, nb, b);
    k.rayleigh(av);
    k.rayleigh(bv);
    const double amp = k.dot(av, bv);
    out[s] = scale * amp * amp;
  }
}

void sample_miso_snr_into(const LinkConfig& cfg, std::uint64_t seed, std::uint64_t first, std::span<double> out) {
  cfg.validate();
  const double scale = link_scale(cfg);
  if (scale == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const auto& k = simd::active();
  const auto key = rng::derive_key(seed, kMisoStream);
  const std::size_t n = static_cast<std::size_t>(cfg.n_elems);
  const std::size_t nt = static_cast<std::size_t>(cfg.n_tx);
  const auto f = cfg.effective_precoder();
  // H is stored column by column: entry (i, j) at j * n + i.
  std::vector<double> pairs(2 * n * nt), re(n * nt), im(n * nt), col_re(nt), col_im(nt);
  for (std::size_t s = 0; s < out.size(); ++s) {
    k.uniform_pairs(key, first + s, 0, pairs);
    k.box_muller(pairs, re, im);
    k.block_sums(re, n, col_re);
    k.block_sums(im, n, col_im);
    std::complex<double> y = 0.0;
    for (std::size_t j = 0; j < nt; ++j) y += std::complex<double>(col_re[j], col_im[j]) * f[j];
    out[s] = scale * std::norm(y);
  }
}

SampleBatch sample_siso_snr(const LinkConfig& cfg, std::uint64_t seed, std::size_t n) {
  if (n == 0) throw ConfigError("sample count must be >= 1");
  SampleBatch b{std::vector<double>(n), seed, SampleKind::snr};
  sample_siso_snr_into(cfg, seed, 0, b.values);
  return b;
}

SampleBatch sample_miso_snr(const LinkConfig& cfg, std::uint64_t seed, std::size_t n) {
  if (n == 0) throw ConfigError("sample count must be >= 1");
  SampleBatch b{std::vector<double>(n), seed, SampleKind::snr};
  sample_miso_snr_into(cfg, seed, 0, b.values);
  return b;
}

}  // namespace irsec::channel
