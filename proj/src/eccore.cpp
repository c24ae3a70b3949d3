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

#include "irsec/eccore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "irsec/errors.hpp"
#include "irsec/link_config_io.hpp"
#include "irsec/specfun.hpp"

namespace irsec::eccore {
namespace {

using channel::LinkConfig;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Switch from the 3F3 expression to Gauss-Laguerre for E[ln^2(1 + X)]; the
// bracket cancels against exp(kappa) as kappa grows.
constexpr double kMisoSeriesKappaMax = 4.0;
constexpr int kMisoLaguerreNodes = 64;

double log_add_exp(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  const double m = std::max(x, y);
  return m + std::log1p(std::exp(-std::abs(x - y)));
}

// Trapezoid rule for E[g(W)] with W = |Z + a|, Z standard normal, after the
// substitution W = exp(t). The density of W is phi(w - a) + phi(w + a).
// `log_g` returns ln g(w); the result is ln E[g(W)].
template <class LogG>
double ln_expect_folded_normal(double a, LogG log_g) {
  const double h = std::min(0.02, 0.05 / (1.0 + a));
  const double t_lo = -40.0;
  const double t_hi = std::log(a + 40.0);
  const double ln_sqrt_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  const int n = static_cast<int>(std::ceil((t_hi - t_lo) / h));
  std::vector<double> lv(static_cast<std::size_t>(n) + 1);
  double m = -kInf;
  for (int i = 0; i <= n; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / n;
    const double w = std::exp(t);
    const double lw = t - 0.5 * (w - a) * (w - a) - ln_sqrt_2pi + std::log1p(std::exp(-2.0 * a * w)) + log_g(w);
    lv[static_cast<std::size_t>(i)] = lw;
    m = std::max(m, lw);
  }
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wt = (i == 0 || i == n) ? 0.5 : 1.0;
    s += wt * std::exp(lv[static_cast<std::size_t>(i)] - m);
  }
  return m + std::log(s * (t_hi - t_lo) / n);
}

// Same rule for E[g(W)] where g may change sign.
template <class G>
double expect_folded_normal(double a, G g) {
  const double h = std::min(0.02, 0.05 / (1.0 + a));
  const double t_lo = -40.0;
  const double t_hi = std::log(a + 40.0);
  const double ln_sqrt_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  const int n = static_cast<int>(std::ceil((t_hi - t_lo) / h));
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / n;
    const double w = std::exp(t);
    const double dens = std::exp(t - 0.5 * (w - a) * (w - a) - ln_sqrt_2pi) * (1.0 + std::exp(-2.0 * a * w));
    const double wt = (i == 0 || i == n) ? 0.5 : 1.0;
    s += wt * dens * g(w);
  }
  return s * (t_hi - t_lo) / n;
}

double require_rate(double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError("rate must be nonnegative and finite");
  return rate;
}

void finish(EcResult& res, double ec_raw, const char* what) {
  res.diagnostics["ec_raw"] = ec_raw;
  if (ec_raw < 0.0) {
    res.warnings.push_back(std::string(what) + " gives a negative EC (" + channel::format_double(ec_raw) +
                           "); clamped to 0");
  }
  res.ec_bits_per_slot = std::max(0.0, ec_raw);
}

}  // namespace

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::siso_csi:
      return "siso_csi";
    case Scenario::siso_nocsi:
      return "siso_nocsi";
    case Scenario::miso_csi:
      return "miso_csi";
    case Scenario::miso_nocsi:
      return "miso_nocsi";
  }
  return "?";
}

Scenario parse_scenario(std::string_view name) {
  for (const Scenario s : {Scenario::siso_csi, Scenario::siso_nocsi, Scenario::miso_csi, Scenario::miso_nocsi}) {
    if (name == scenario_name(s)) return s;
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "' (siso_csi, siso_nocsi, miso_csi, miso_nocsi)");
}

bool is_nocsi(Scenario s) { return s == Scenario::siso_nocsi || s == Scenario::miso_nocsi; }
bool is_siso(Scenario s) { return s == Scenario::siso_csi || s == Scenario::siso_nocsi; }

QosExponent::QosExponent(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("QoS exponent must be positive and finite");
}

void OnOffChannel::validate() const {
  if (!(p_on >= 0.0 && p_on <= 1.0)) throw DomainError("OnOffChannel.p_on outside [0, 1]");
  if (!(p_off >= 0.0 && p_off <= 1.0)) throw DomainError("OnOffChannel.p_off outside [0, 1]");
  if (std::abs(p_on + p_off - 1.0) > 1e-12) throw DomainError("OnOffChannel probabilities do not sum to 1");
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError("OnOffChannel.rate must be nonnegative");
  if (!(slot > 0.0) || !std::isfinite(slot)) throw DomainError("OnOffChannel.slot must be positive");
}

double shannon_rate(double snr, double bandwidth) {
  if (!(snr >= 0.0)) throw DomainError("shannon_rate: snr must be >= 0");
  return bandwidth * std::log1p(snr) / std::numbers::ln2;
}

OnOffProbs on_off_probs(const channel::SnrDistribution& dist, double rate, double bandwidth) {
  require_rate(rate);
  if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be positive");
  const double threshold = std::expm1(rate * std::numbers::ln2 / bandwidth);
  return {channel::snr_ccdf(dist, threshold), channel::snr_cdf(dist, threshold)};
}

double on_off_rho(const OnOffChannel& chain, QosExponent alpha) {
  chain.validate();
  return chain.p_on * std::exp(-alpha.value() * chain.rate * chain.slot) + chain.p_off;
}

double on_off_spectral_radius(const OnOffChannel& chain, QosExponent alpha) {
  chain.validate();
  const double theta_on = std::exp(-alpha.value() * chain.rate * chain.slot);
  // P Theta(-alpha): both rows (p_on theta_on, p_off) for i.i.d. slots.
  const double a = chain.p_on * theta_on, b = chain.p_off;
  const double c = chain.p_on * theta_on, d = chain.p_off;
  const double tr = a + d;
  const double disc = (a - d) * (a - d) + 4.0 * b * c;
  return 0.5 * (tr + std::sqrt(disc));
}

EcResult ec_on_off(const OnOffChannel& chain, QosExponent alpha) {
  chain.validate();
  const double x = alpha.value() * chain.rate * chain.slot;
  const double rho = chain.p_on * std::exp(-x) + chain.p_off;
  double ln_rho;
  if (rho >= 0.5) {
    ln_rho = std::log1p(chain.p_on * std::expm1(-x));
  } else {
    const double lp_on = chain.p_on > 0.0 ? std::log(chain.p_on) - x : -kInf;
    const double lp_off = chain.p_off > 0.0 ? std::log(chain.p_off) : -kInf;
    ln_rho = log_add_exp(lp_on, lp_off);
  }
  EcResult res;
  res.diagnostics["p_on"] = chain.p_on;
  res.diagnostics["rho"] = rho;
  res.diagnostics["ln_rho"] = ln_rho;
  res.diagnostics["spectral_radius"] = on_off_spectral_radius(chain, alpha);
  res.diagnostics["mean_service"] = chain.p_on * chain.rate * chain.slot;
  res.ec_bits_per_slot = std::max(0.0, -ln_rho / alpha.value());
  return res;
}

double siso_ln_mgf_relaxed(double beta, double lambda, double k) {
  if (k >= 0.5) return kInf;
  return -0.5 * lambda - specfun::ln_gamma(0.5) - k * std::log(2.0 * beta) + specfun::ln_gamma(0.5 - k) +
         specfun::ln_hyp1f1(0.5 - k, 0.5, 0.5 * lambda);
}

double siso_ln_mgf_printed(double beta, double lambda, double k) {
  return -0.5 * lambda - 0.5 * std::numbers::ln2 - specfun::ln_gamma(0.5) - k * std::log(beta) -
         (k + 0.5) * std::log(lambda / 4.0) + (k + 1.5) * std::log(lambda / 2.0) + specfun::ln_gamma(k + 1.5) +
         specfun::ln_hyp1f1(k + 1.5, 0.5, 0.5 * lambda);
}

double siso_ln_mgf_exact(double beta, double lambda, double k) {
  return ln_expect_folded_normal(std::sqrt(lambda), [&](double w) { return -k * std::log1p(beta * w * w); });
}

double siso_mean_service(const LinkConfig& cfg, bool relaxed) {
  const auto d = std::get<channel::ScaledNoncentralChiSq>(channel::siso_snr_dist(cfg));
  const double scale = cfg.bandwidth * cfg.slot / std::numbers::ln2;
  if (relaxed) {
    return scale * expect_folded_normal(std::sqrt(d.lambda), [&](double w) { return std::log(d.beta * w * w); });
  }
  return scale * expect_folded_normal(std::sqrt(d.lambda), [&](double w) { return std::log1p(d.beta * w * w); });
}

EcResult ec_siso_csi(const LinkConfig& cfg, QosExponent alpha, const EcOptions& opts) {
  const auto d = std::get<channel::ScaledNoncentralChiSq>(channel::siso_snr_dist(cfg));
  const double a = alpha.value();
  const double k = a * cfg.bandwidth * cfg.slot / std::numbers::ln2;
  EcResult res;
  res.scenario = Scenario::siso_csi;
  auto& dg = res.diagnostics;
  dg["beta"] = d.beta;
  dg["lambda"] = d.lambda;
  dg["k"] = k;

  const double p_low = channel::snr_cdf(d, kRelaxationSnr);
  dg["p_snr_below_relaxation"] = p_low;
  if (opts.siso_form != SisoMgfForm::exact && p_low > kRelaxationProb) {
    res.warnings.push_back("high-SNR relaxation is poor here: P(snr < 9) = " + channel::format_double(p_low));
  }

  const double ln_mgf_exact = siso_ln_mgf_exact(d.beta, d.lambda, k);
  dg["ec_unrelaxed"] = -ln_mgf_exact / a;

  double ln_mgf = 0.0;
  switch (opts.siso_form) {
    case SisoMgfForm::relaxed:
      if (k >= 0.5) {
        dg["mgf_divergent"] = 1.0;
        res.warnings.push_back("relaxed MGF diverges for alpha B T / ln2 >= 1/2; EC set to 0");
        res.ec_bits_per_slot = 0.0;
        return res;
      }
      dg["term_exp"] = -0.5 * d.lambda;
      dg["term_gamma_half"] = -specfun::ln_gamma(0.5);
      dg["term_scale"] = -k * std::log(2.0 * d.beta);
      dg["term_gamma"] = specfun::ln_gamma(0.5 - k);
      dg["term_hyp1f1"] = specfun::ln_hyp1f1(0.5 - k, 0.5, 0.5 * d.lambda);
      ln_mgf = siso_ln_mgf_relaxed(d.beta, d.lambda, k);
      break;
    case SisoMgfForm::printed:
      dg["term_exp"] = -0.5 * d.lambda;
      dg["term_ln2"] = -0.5 * std::numbers::ln2;
      dg["term_gamma_half"] = -specfun::ln_gamma(0.5);
      dg["term_beta"] = -k * std::log(d.beta);
      dg["term_lambda_quarter"] = -(k + 0.5) * std::log(d.lambda / 4.0);
      dg["term_lambda_half"] = (k + 1.5) * std::log(d.lambda / 2.0);
      dg["term_gamma"] = specfun::ln_gamma(k + 1.5);
      dg["term_hyp1f1"] = specfun::ln_hyp1f1(k + 1.5, 0.5, 0.5 * d.lambda);
      ln_mgf = siso_ln_mgf_printed(d.beta, d.lambda, k);
      break;
    case SisoMgfForm::exact:
      ln_mgf = ln_mgf_exact;
      break;
  }
  dg["ln_mgf"] = ln_mgf;
  const double ec_raw = -ln_mgf / a;
  dg["relaxation_gap"] = ec_raw - dg["ec_unrelaxed"];
  finish(res, ec_raw, "the MGF expression");
  return res;
}

EcResult ec_siso_nocsi(const LinkConfig& cfg, QosExponent alpha, double rate, const EcOptions&) {
  const auto dist = channel::siso_snr_dist(cfg);
  const auto& d = std::get<channel::ScaledNoncentralChiSq>(dist);
  const auto p = on_off_probs(dist, rate, cfg.bandwidth);
  EcResult res = ec_on_off({p.p_on, p.p_off, rate, cfg.slot}, alpha);
  res.scenario = Scenario::siso_nocsi;
  const double threshold = std::expm1(rate * std::numbers::ln2 / cfg.bandwidth);
  res.diagnostics["beta"] = d.beta;
  res.diagnostics["lambda"] = d.lambda;
  res.diagnostics["threshold_snr"] = threshold;
  res.diagnostics["xi"] = std::sqrt(threshold / d.beta);
  return res;
}

ServiceMoments miso_service_moments(double kappa, double bandwidth, double slot) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be positive and finite");
  const double c = bandwidth * slot / std::numbers::ln2;
  const double mean_ln = specfun::expint_e1_scaled(kappa);
  double second_ln;
  if (kappa <= kMisoSeriesKappaMax) {
    const double g = specfun::kEulerGamma;
    const double lk = std::log(kappa);
    const double bracket = std::numbers::pi * std::numbers::pi / 6.0 + g * g + 2.0 * g * lk + lk * lk -
                           2.0 * kappa * specfun::hyp3f3_unit(-kappa);
    second_ln = std::exp(kappa) * bracket;
  } else {
    // E ln^2(1 + X) = int 2 ln(1 + x) / (1 + x) exp(-kappa x) dx, x = u / kappa
    const auto& rule = specfun::gauss_laguerre(kMisoLaguerreNodes);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = rule.nodes[i] / kappa;
      s += rule.weights[i] * 2.0 * std::log1p(x) / (1.0 + x);
    }
    second_ln = s / kappa;
  }
  return {c * mean_ln, c * c * second_ln};
}

EcResult ec_miso_csi(const LinkConfig& cfg, QosExponent alpha, const EcOptions& opts) {
  const double kappa = channel::miso_kappa(cfg, opts.kappa);
  const auto m = miso_service_moments(kappa, cfg.bandwidth, cfg.slot);
  const double var = std::max(0.0, m.second_moment - m.mean * m.mean);
  EcResult res;
  res.scenario = Scenario::miso_csi;
  res.diagnostics["kappa"] = kappa;
  res.diagnostics["mu"] = m.mean;
  res.diagnostics["eta"] = m.second_moment;
  res.diagnostics["variance"] = var;
  finish(res, m.mean - 0.5 * alpha.value() * var, "the Gaussian approximation");
  return res;
}

EcResult ec_miso_nocsi(const LinkConfig& cfg, QosExponent alpha, double rate, const EcOptions& opts) {
  const double kappa = channel::miso_kappa(cfg, opts.kappa);
  const auto p = on_off_probs(channel::Exponential{kappa}, rate, cfg.bandwidth);
  EcResult res = ec_on_off({p.p_on, p.p_off, rate, cfg.slot}, alpha);
  res.scenario = Scenario::miso_nocsi;
  res.diagnostics["kappa"] = kappa;
  res.diagnostics["threshold_snr"] = std::expm1(rate * std::numbers::ln2 / cfg.bandwidth);
  return res;
}

EcResult evaluate(const LinkConfig& cfg, const EcQuery& q, const EcOptions& opts) {
  const QosExponent alpha(q.alpha);
  if (is_nocsi(q.scenario) && !q.rate) throw ConfigError("no-CSI scenarios need a rate");
  if (!is_nocsi(q.scenario) && q.rate) throw ConfigError("perfect-CSI scenarios take no rate");
  switch (q.scenario) {
    case Scenario::siso_csi:
      return ec_siso_csi(cfg, alpha, opts);
    case Scenario::siso_nocsi:
      return ec_siso_nocsi(cfg, alpha, *q.rate, opts);
    case Scenario::miso_csi:
      return ec_miso_csi(cfg, alpha, opts);
    case Scenario::miso_nocsi:
      return ec_miso_nocsi(cfg, alpha, *q.rate, opts);
  }
  throw ConfigError("unknown scenario");
}

}  // namespace irsec::eccore
