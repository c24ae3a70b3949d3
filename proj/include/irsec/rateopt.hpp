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

// Fixed-rate optimization for the no-CSI scenarios.
//
// Single antenna: fixed-step gradient descent on rho(r) = p_on e^{-alpha r T}
// + p_off, the argument of the EC logarithm. Multi-antenna: the stationarity
// condition of the ON-OFF EC solved by bisection, its closed-form high-rate
// approximation, and a grid oracle for both.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "irsec/channel.hpp"
#include "irsec/eccore.hpp"

namespace irsec::rateopt {

struct DescentSettings {
  double r0 = 1.0;         // bits/s
  double step = 0.05;      // delta
  double conv_tol = 1e-8;  // epsilon_c
  long max_iters = 100000;

  void validate() const;  // throws ConfigError
  // r0 = B, delta = 0.05 B, epsilon_c = 1e-8 B, 100000 iterations.
  static DescentSettings defaults(double bandwidth);
};

enum class Method { gradient_descent, closed_form, root_find, grid };
std::string_view method_name(Method m);

struct RateSolution {
  double r_star = 0.0;
  double ec_at_r_star = 0.0;
  long iterations = 0;
  Method method = Method::grid;
  bool valid = true;  // closed form: e^{alpha r* T} >= 10
  std::string note;
};

// Descent hit max_iters, or stalled where rho is numerically 1 and the
// gradient vanishes.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double last_rate, long iterations)
      : std::runtime_error(what), last_rate_(last_rate), iterations_(iterations) {}
  double last_rate() const { return last_rate_; }
  long iterations() const { return iterations_; }

 private:
  double last_rate_;
  long iterations_;
};

// Form of the multi-antenna optimal-rate equation.
//   corrected  (r/B) ln2 + ln(e^{alpha r T} - 1) = ln(B alpha T / (kappa ln2))
//   printed    same left side, right side without the logarithm
enum class MisoRateForm { corrected, printed };

struct MisoRateOptions {
  MisoRateForm form = MisoRateForm::corrected;
  channel::KappaOptions kappa;
};

double siso_rho(const channel::LinkConfig& cfg, eccore::QosExponent alpha, double rate);

// d rho / d r from the Marcum-Q derivative. Throws DomainError at rate <= 0.
double siso_ec_gradient(const channel::LinkConfig& cfg, eccore::QosExponent alpha, double rate);

// The fixed-step control law r <- r - delta * d rho/dr, stopping when
// |r(m) - r(m-1)| <= epsilon_c. Nonpositive iterates are projected to
// epsilon_c.
RateSolution optimize_rate_siso(const channel::LinkConfig& cfg, eccore::QosExponent alpha,
                                const DescentSettings& settings);

// Warm start by the control law with delta = 0.5 / rho''(r) re-picked at
// every iterate (rho'' by finite differences of the analytical gradient,
// moves capped at r / 4), then the fixed-step law with delta picked at the
// warm-start point. When `start` is not given it starts from the rate
// matching the SNR one standard deviation below the mean.
RateSolution optimize_rate_siso_auto(const channel::LinkConfig& cfg, eccore::QosExponent alpha,
                                     std::optional<double> start = std::nullopt, double conv_tol = 0.0);

// Curvature-matched step at rate r: 0.5 / rho''(r), or 0 when rho'' <= 0.
double siso_calibrated_step(const channel::LinkConfig& cfg, eccore::QosExponent alpha, double rate);

// Left and right sides of the multi-antenna optimal-rate equation.
double miso_rate_lhs(double rate, double alpha, double bandwidth, double slot);
double miso_rate_rhs(double kappa, double alpha, double bandwidth, double slot, MisoRateForm form);

RateSolution optimize_rate_miso_closed(const channel::LinkConfig& cfg, eccore::QosExponent alpha,
                                       const MisoRateOptions& opts = {});
RateSolution solve_rate_miso_exact(const channel::LinkConfig& cfg, eccore::QosExponent alpha,
                                   const MisoRateOptions& opts = {});

// Uniform grid r_i = r_max i / points, i = 1..points, then Brent
// (parabolic interpolation with golden-section fallback) between the
// neighbours of the best grid point.
RateSolution grid_argmax_rate(const channel::LinkConfig& cfg, eccore::QosExponent alpha, eccore::Scenario scenario,
                              double r_max, int points, const eccore::EcOptions& opts = {});

// Rate used when a no-CSI EC is requested without one: calibrated descent
// for the single antenna, the exact root for the multi-antenna link.
RateSolution optimal_rate(const channel::LinkConfig& cfg, eccore::QosExponent alpha, eccore::Scenario scenario,
                          const eccore::EcOptions& opts = {});

// EC at `rate` for a no-CSI scenario.
double nocsi_ec(const channel::LinkConfig& cfg, eccore::QosExponent alpha, eccore::Scenario scenario, double rate,
                const eccore::EcOptions& opts = {});

}  // namespace irsec::rateopt
