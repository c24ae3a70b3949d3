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

// Special functions needed by the effective-capacity closed forms.
//
// Everything here is a pure function of its arguments. Series routines take
// a SeriesControl that bounds the number of terms and sets the relative
// stopping tolerance; exhausting the budget raises ConvergenceError.

#pragma once

#include <numbers>
#include <span>
#include <vector>

namespace irsec::specfun {

struct SeriesControl {
  int max_terms = 10000;
  double rel_tol = 1e-12;

  // Throws ConfigError unless max_terms >= 1 and 0 < rel_tol < 1.
  void validate() const;
};

inline constexpr double kEulerGamma = std::numbers::egamma;

// ln_hyp1f1 uses the large-argument expansion at and above this x; below
// it, a compensated series. The two branches are overlap-tested around it.
inline constexpr double kHyp1f1AsymptoticThreshold = 30.0;

// ln Gamma(x) for x > 0.
double ln_gamma(double x);

// P(Z > x) for a standard normal Z.
double gaussian_tail(double x);

// Marcum Q-function of order 1/2, Q(b - a) + Q(b + a), clamped to [0, 1].
double marcum_q_half(double a, double b);

// 1 - Q_{1/2}(a, b) evaluated without cancellation when Q is close to 1.
double marcum_q_half_complement(double a, double b);

// d Q_{1/2}(a, b) / d b via the Bessel form
//   -sqrt(b) * sqrt(a) * exp(-(a^2 + b^2) / 2) * I_{-1/2}(a b),
// assembled in the log domain. Requires a > 0, b > 0.
double marcum_q_half_db(double a, double b);

// Modified Bessel function I_{-1/2}(z) = sqrt(2 / (pi z)) cosh z, z > 0.
// Overflows to +inf for z beyond ~710; use the log variant there.
double bessel_i_minus_half(double z);
double ln_bessel_i_minus_half(double z);

// 0F1(;c;x), x >= 0.
double hyp0f1(double c, double x, const SeriesControl& ctl = {});

// ln 1F1(a;b;x). a > 0, b > 0. Negative x goes through Kummer's
// transformation; a non-positive function value raises DomainError.
double ln_hyp1f1(double a, double b, double x, const SeriesControl& ctl = {});

// 3F3([1,1,1];[2,2,2];x) = sum_n x^n / ((n+1)^3 n!).
double hyp3f3_unit(double x, const SeriesControl& ctl = {});

// exp(x) * E1(x) for x > 0.
double expint_e1_scaled(double x);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Laguerre rule for integrals of f(u) exp(-u) over [0, inf).
// Computed once per n and cached.
const QuadratureRule& gauss_laguerre(int n);

// Internal helpers exposed for tests.
namespace detail {
double ln_hyp1f1_series(double a, double b, double x, const SeriesControl& ctl);
// Returns false when the asymptotic series cannot reach ctl.rel_tol.
bool ln_hyp1f1_asymptotic(double a, double b, double x, const SeriesControl& ctl, double& out);
}  // namespace detail

}  // namespace irsec::specfun
