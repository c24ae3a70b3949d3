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

// Effective capacity for the four link scenarios (single or multi-antenna
// base station, with or without channel state at the transmitter) and the
// two-state ON-OFF Markov service model.
//
// Units: EC is in bits per slot. Rates are bits/s, slot length T in s,
// bandwidth B in Hz. alpha is per bit.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irsec/channel.hpp"

namespace irsec::eccore {

enum class Scenario { siso_csi, siso_nocsi, miso_csi, miso_nocsi };

std::string_view scenario_name(Scenario s);
Scenario parse_scenario(std::string_view name);  // throws ConfigError
bool is_nocsi(Scenario s);
bool is_siso(Scenario s);

class QosExponent {
 public:
  // Throws DomainError unless alpha > 0 and finite.
  explicit QosExponent(double alpha);
  double value() const { return alpha_; }

 private:
  double alpha_;
};

struct OnOffProbs {
  double p_on;
  double p_off;
};

struct OnOffChannel {
  double p_on;
  double p_off;
  double rate;  // bits/s
  double slot;  // s

  // Throws DomainError on p_on outside [0, 1], |p_on + p_off - 1| > 1e-12,
  // negative rate or nonpositive slot.
  void validate() const;
};

struct EcResult {
  double ec_bits_per_slot = 0.0;
  Scenario scenario = Scenario::siso_csi;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> warnings;
};

// Moment-generating function used for the single-antenna perfect-CSI EC.
//   relaxed  closed form of E[(beta X)^(-k)], k = alpha B T / ln 2, i.e. the
//            high-SNR relaxation 1 + beta X ~ beta X. Finite only for k < 1/2.
//   printed  the Gamma * 1F1 expression with argument k + 3/2, kept for
//            side-by-side reporting; it does not tend to 1 as alpha -> 0.
//   exact    E[(1 + beta X)^(-k)] by numerical integration, no relaxation.
enum class SisoMgfForm { relaxed, printed, exact };

struct EcOptions {
  SisoMgfForm siso_form = SisoMgfForm::relaxed;
  channel::KappaOptions kappa;
};

// P(beta X < kRelaxationSnr) above kRelaxationProb flags the relaxation.
inline constexpr double kRelaxationSnr = 9.0;
inline constexpr double kRelaxationProb = 0.1;

// B log2(1 + snr).
double shannon_rate(double snr, double bandwidth);

OnOffProbs on_off_probs(const channel::SnrDistribution& dist, double rate, double bandwidth);

// -(1/alpha) ln(p_on exp(-alpha r T) + p_off).
EcResult ec_on_off(const OnOffChannel& chain, QosExponent alpha);
// Scalar argument of the log above, and the largest eigenvalue of the 2x2
// matrix P Theta(-alpha) computed from its characteristic polynomial.
double on_off_rho(const OnOffChannel& chain, QosExponent alpha);
double on_off_spectral_radius(const OnOffChannel& chain, QosExponent alpha);

EcResult ec_siso_csi(const channel::LinkConfig& cfg, QosExponent alpha, const EcOptions& opts = {});
EcResult ec_siso_nocsi(const channel::LinkConfig& cfg, QosExponent alpha, double rate, const EcOptions& opts = {});
EcResult ec_miso_csi(const channel::LinkConfig& cfg, QosExponent alpha, const EcOptions& opts = {});
EcResult ec_miso_nocsi(const channel::LinkConfig& cfg, QosExponent alpha, double rate, const EcOptions& opts = {});

struct EcQuery {
  Scenario scenario = Scenario::siso_csi;
  double alpha = 1.0;
  std::optional<double> rate;  // required for the no-CSI scenarios
};

EcResult evaluate(const channel::LinkConfig& cfg, const EcQuery& query, const EcOptions& opts = {});

// ln MGF pieces of the single-antenna perfect-CSI EC for X noncentral
// chi-square (1 dof, noncentrality lambda), k = alpha B T / ln 2.
double siso_ln_mgf_relaxed(double beta, double lambda, double k);
double siso_ln_mgf_printed(double beta, double lambda, double k);
double siso_ln_mgf_exact(double beta, double lambda, double k);

// Mean service per slot B T E[log2(1 + beta X)], or B T E[log2(beta X)]
// when relaxed.
double siso_mean_service(const channel::LinkConfig& cfg, bool relaxed = false);

// First and second moments of B T log2(1 + X), X ~ Exp(kappa).
struct ServiceMoments {
  double mean;
  double second_moment;
};
ServiceMoments miso_service_moments(double kappa, double bandwidth, double slot);

}  // namespace irsec::eccore
