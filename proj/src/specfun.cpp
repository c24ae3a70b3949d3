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

#include "irsec/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "irsec/errors.hpp"

namespace irsec::specfun {
namespace {

constexpr double kLn2 = std::numbers::ln2;

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
  void scale(double s) {
    sum *= s;
    comp *= s;
  }
};

[[noreturn]] void fail_convergence(const char* what, int terms) {
  throw ConvergenceError(std::string(what) + ": no convergence within " + std::to_string(terms) + " terms");
}

}  // namespace

void SeriesControl::validate() const {
  if (max_terms < 1) throw ConfigError("SeriesControl: max_terms must be >= 1");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ConfigError("SeriesControl: rel_tol must lie in (0, 1)");
}

double ln_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("ln_gamma: argument must be positive");
  return std::lgamma(x);
}

double gaussian_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double marcum_q_half(double a, double b) {
  if (a < 0.0 || b < 0.0) throw DomainError("marcum_q_half: arguments must be nonnegative");
  const double q = gaussian_tail(b - a) + gaussian_tail(b + a);
  return std::clamp(q, 0.0, 1.0);
}

double marcum_q_half_complement(double a, double b) {
  if (a < 0.0 || b < 0.0) throw DomainError("marcum_q_half_complement: arguments must be nonnegative");
  // P(|Z + a| <= b) = Phi(b - a) - Phi(-b - a)
  double p;
  if (b <= a) {
    p = gaussian_tail(a - b) - gaussian_tail(a + b);
  } else {
    p = 1.0 - gaussian_tail(b - a) - gaussian_tail(b + a);
  }
  return std::clamp(p, 0.0, 1.0);
}

double ln_bessel_i_minus_half(double z) {
  if (!(z > 0.0)) throw DomainError("bessel_i_minus_half: argument must be positive");
  // I_{-1/2}(z) = sqrt(2/(pi z)) (e^z + e^-z) / 2
  return 0.5 * std::log(2.0 / (std::numbers::pi * z)) + z + std::log1p(std::exp(-2.0 * z)) - kLn2;
}

double bessel_i_minus_half(double z) {
  if (!(z > 0.0)) throw DomainError("bessel_i_minus_half: argument must be positive");
  if (z > 700.0) return std::exp(ln_bessel_i_minus_half(z));
  return std::sqrt(2.0 / (std::numbers::pi * z)) * std::cosh(z);
}

double marcum_q_half_db(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("marcum_q_half_db: arguments must be positive");
  const double ln_mag = 0.5 * std::log(b) + 0.5 * std::log(a) - 0.5 * (a * a + b * b) + ln_bessel_i_minus_half(a * b);
  return -std::exp(ln_mag);
}

double hyp0f1(double c, double x, const SeriesControl& ctl) {
  ctl.validate();
  if (!(c > 0.0)) throw DomainError("hyp0f1: c must be positive");
  CompensatedSum s;
  s.add(1.0);
  double term = 1.0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    term *= x / ((c + k) * (k + 1.0));
    s.add(term);
    const bool shrinking = std::abs(x) < (c + k + 1.0) * (k + 2.0);
    if (shrinking && std::abs(term) <= ctl.rel_tol * std::abs(s.value())) return s.value();
  }
  fail_convergence("hyp0f1", ctl.max_terms);
}

namespace detail {

double ln_hyp1f1_series(double a, double b, double x, const SeriesControl& ctl) {
  // Terms are rescaled whenever the running sum grows large so that the
  // series works for arguments whose function value overflows a double.
  constexpr double kRescaleAt = 1e280;
  CompensatedSum s;
  s.add(1.0);
  double term = 1.0;
  double ln_scale = 0.0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    term *= (a + k) / (b + k) * x / (k + 1.0);
    s.add(term);
    if (std::abs(s.sum) > kRescaleAt) {
      s.scale(1.0 / kRescaleAt);
      term /= kRescaleAt;
      ln_scale += std::log(kRescaleAt);
    }
    if (term == 0.0) break;
    const bool shrinking = std::abs((a + k + 1.0) * x) < std::abs((b + k + 1.0) * (k + 2.0));
    if (shrinking && std::abs(term) <= ctl.rel_tol * std::abs(s.value())) {
      const double v = s.value();
      if (!(v > 0.0)) throw DomainError("ln_hyp1f1: function value is not positive");
      return ln_scale + std::log(v);
    }
  }
  if (term == 0.0) {
    const double v = s.value();
    if (!(v > 0.0)) throw DomainError("ln_hyp1f1: function value is not positive");
    return ln_scale + std::log(v);
  }
  fail_convergence("ln_hyp1f1", ctl.max_terms);
}

bool ln_hyp1f1_asymptotic(double a, double b, double x, const SeriesControl& ctl, double& out) {
  // 1F1(a;b;x) ~ Gamma(b)/Gamma(a) e^x x^(a-b) sum_k (b-a)_k (1-a)_k / (k! x^k)
  if (!(a > 0.0) || !(b > 0.0) || !(x > 0.0)) return false;
  CompensatedSum s;
  s.add(1.0);
  double term = 1.0;
  bool done = false;
  for (int k = 0; k < ctl.max_terms; ++k) {
    const double next = term * (b - a + k) * (1.0 - a + k) / ((k + 1.0) * x);
    if (next == 0.0) {
      done = true;
      break;
    }
    if (std::abs(next) > std::abs(term)) return false;  // diverging before tolerance was met
    term = next;
    s.add(term);
    if (std::abs(term) <= ctl.rel_tol * std::abs(s.value())) {
      done = true;
      break;
    }
  }
  if (!done || !(s.value() > 0.0)) return false;
  out = std::lgamma(b) - std::lgamma(a) + x + (a - b) * std::log(x) + std::log(s.value());
  return true;
}

}  // namespace detail

double ln_hyp1f1(double a, double b, double x, const SeriesControl& ctl) {
  ctl.validate();
  if (!(b > 0.0)) throw DomainError("ln_hyp1f1: b must be positive");
  if (!(a > 0.0)) throw DomainError("ln_hyp1f1: a must be positive");
  if (x == 0.0) return 0.0;
  if (x < 0.0) {
    // Kummer: 1F1(a;b;x) = e^x 1F1(b-a;b;-x)
    const double c = b - a;
    const double y = -x;
    if (c == 0.0) return x;
    if (c > 0.0 && y >= kHyp1f1AsymptoticThreshold) {
      double v;
      if (detail::ln_hyp1f1_asymptotic(c, b, y, ctl, v)) return x + v;
    }
    return x + detail::ln_hyp1f1_series(c, b, y, ctl);
  }
  if (x >= kHyp1f1AsymptoticThreshold) {
    double v;
    if (detail::ln_hyp1f1_asymptotic(a, b, x, ctl, v)) return v;
  }
  return detail::ln_hyp1f1_series(a, b, x, ctl);
}

double hyp3f3_unit(double x, const SeriesControl& ctl) {
  ctl.validate();
  CompensatedSum s;
  s.add(1.0);
  double term = 1.0;
  for (int n = 0; n < ctl.max_terms; ++n) {
    const double np1 = n + 1.0;
    term *= x * np1 * np1 / ((np1 + 1.0) * (np1 + 1.0) * (np1 + 1.0));
    s.add(term);
    if (term == 0.0) return s.value();
    if (std::abs(x) < np1 + 1.0 && std::abs(term) <= ctl.rel_tol * std::abs(s.value())) return s.value();
  }
  fail_convergence("hyp3f3_unit", ctl.max_terms);
}

double expint_e1_scaled(double x) {
  if (!(x > 0.0)) throw DomainError("expint_e1_scaled: argument must be positive");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (x < 1.0) {
    // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    CompensatedSum s;
    double fact_term = 1.0;
    for (int k = 1; k < 200; ++k) {
      fact_term *= -x / k;
      const double t = fact_term / k;
      s.add(t);
      if (std::abs(t) < eps * std::abs(s.value())) break;
    }
    const double e1 = -kEulerGamma - std::log(x) - s.value();
    return std::exp(x) * e1;
  }
  // Continued fraction for e^x E1(x), modified Lentz.
  constexpr double tiny = 1e-300;
  double bcf = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / bcf;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * i;
    bcf += 2.0;
    d = 1.0 / (an * d + bcf);
    c = bcf + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) <= eps) return h;
  }
  fail_convergence("expint_e1_scaled", 10000);
}

const QuadratureRule& gauss_laguerre(int n) {
  if (n < 2 || n > 256) throw ConfigError("gauss_laguerre: n must lie in [2, 256]");
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = 3.0 / (1.0 + 2.4 * n);
    } else if (i == 1) {
      z += 15.0 / (1.0 + 2.5 * n);
    } else {
      const double ai = i - 1;
      z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - rule.nodes[i - 2]);
    }
    double p1 = 0.0, p2 = 0.0, pp = 0.0;
    int it = 0;
    double step = 0.0;
    for (; it < 100; ++it) {
      p1 = 1.0;
      p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
      }
      pp = (n * p1 - n * p2) / z;
      const double z1 = z;
      z = z1 - p1 / pp;
      step = std::abs(z - z1);
      if (step <= 4e-16 * std::abs(z)) break;
    }
    // Newton may dither at the last ulp for the outer nodes.
    if (it == 100 && step > 1e-13 * std::abs(z)) fail_convergence("gauss_laguerre", 100);
    rule.nodes[i] = z;
    rule.weights[i] = -1.0 / (pp * n * p2);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace irsec::specfun
