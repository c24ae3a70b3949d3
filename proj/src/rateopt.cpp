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

#include "irsec/rateopt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "irsec/errors.hpp"
#include "irsec/link_config_io.hpp"
#include "irsec/specfun.hpp"

namespace irsec::rateopt {
namespace {

using channel::LinkConfig;
using eccore::QosExponent;
using eccore::Scenario;

// ln(e^x - 1) for x > 0.
double log_expm1(double x) { return x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x)); }

// Minimizes f on [a, b] by Brent's method.
template <class F>
double brent_minimize(F f, double a, double b, double tol, int max_iter = 500) {
  constexpr double cgold = 0.3819660112501051;
  double x = a + cgold * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double xm = 0.5 * (a + b);
    const double tol1 = tol * std::abs(x) + 1e-15;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (!(std::abs(p) >= std::abs(0.5 * q * etemp) || p <= q * (a - x) || p >= q * (b - x))) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = std::copysign(tol1, xm - x);
        golden = false;
      }
    }
    if (golden) {
      e = (x >= xm) ? a - x : b - x;
      d = cgold * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + std::copysign(tol1, d);
    const double fu = f(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return x;
}

// Second derivative of rho by central differences of the analytical gradient.
double siso_rho_curvature(const LinkConfig& cfg, QosExponent alpha, double rate) {
  const double h = 1e-4 * rate;
  return (siso_ec_gradient(cfg, alpha, rate + h) - siso_ec_gradient(cfg, alpha, rate - h)) / (2.0 * h);
}

}  // namespace

void DescentSettings::validate() const {
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw ConfigError("DescentSettings.r0 must be positive");
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("DescentSettings.step must be positive");
  if (!(conv_tol > 0.0) || !std::isfinite(conv_tol)) throw ConfigError("DescentSettings.conv_tol must be positive");
  if (max_iters < 1) throw ConfigError("DescentSettings.max_iters must be >= 1");
}

DescentSettings DescentSettings::defaults(double bandwidth) {
  return {bandwidth, 0.05 * bandwidth, 1e-8 * bandwidth, 100000};
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::gradient_descent:
      return "gradient_descent";
    case Method::closed_form:
      return "closed_form";
    case Method::root_find:
      return "root_find";
    case Method::grid:
      return "grid";
  }
  return "?";
}

double siso_rho(const LinkConfig& cfg, QosExponent alpha, double rate) {
  const auto dist = channel::siso_snr_dist(cfg);
  const auto p = eccore::on_off_probs(dist, rate, cfg.bandwidth);
  return eccore::on_off_rho({p.p_on, p.p_off, rate, cfg.slot}, alpha);
}

double siso_ec_gradient(const LinkConfig& cfg, QosExponent alpha, double rate) {
  if (!(rate > 0.0)) throw DomainError("rho gradient is singular at rate <= 0");
  const auto d = std::get<channel::ScaledNoncentralChiSq>(channel::siso_snr_dist(cfg));
  const double a = std::sqrt(d.lambda);
  const double ln2_b = std::numbers::ln2 / cfg.bandwidth;
  const double g = std::expm1(rate * ln2_b);  // 2^{r/B} - 1
  const double xi = std::sqrt(g / d.beta);
  const double dq = specfun::marcum_q_half_db(a, xi);
  const double dp_on = dq == 0.0 ? 0.0 : dq * ln2_b * (g + 1.0) / (2.0 * d.beta * xi);
  const double p_on = specfun::marcum_q_half(a, xi);
  const double at = alpha.value() * cfg.slot;
  const double e = std::exp(-at * rate);
  return dp_on * e - at * p_on * e - dp_on;
}

double siso_calibrated_step(const LinkConfig& cfg, QosExponent alpha, double rate) {
  const double c = siso_rho_curvature(cfg, alpha, rate);
  return c > 0.0 ? 0.5 / c : 0.0;
}

RateSolution optimize_rate_siso(const LinkConfig& cfg, QosExponent alpha, const DescentSettings& s) {
  s.validate();
  double r = s.r0;
  long it = 0;
  bool converged = false;
  while (it < s.max_iters) {
    ++it;
    double next = r - s.step * siso_ec_gradient(cfg, alpha, r);
    if (!(next > 0.0)) next = s.conv_tol;
    const bool done = std::abs(next - r) <= s.conv_tol;
    r = next;
    if (done) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NonConvergence("gradient descent hit max_iters", r, it);
  const double rho = siso_rho(cfg, alpha, r);
  if (rho >= 1.0 - 1e-12 || siso_rho_curvature(cfg, alpha, r) <= 0.0) {
    throw NonConvergence("gradient descent stalled at r = " + channel::format_double(r) +
                             " where rho is flat (vanishing gradient); try a smaller r0",
                         r, it);
  }
  RateSolution sol;
  sol.r_star = r;
  sol.ec_at_r_star = eccore::ec_siso_nocsi(cfg, alpha, r).ec_bits_per_slot;
  sol.iterations = it;
  sol.method = Method::gradient_descent;
  return sol;
}

RateSolution optimize_rate_siso_auto(const LinkConfig& cfg, QosExponent alpha, std::optional<double> start,
                                     double conv_tol) {
  DescentSettings s = DescentSettings::defaults(cfg.bandwidth);
  if (conv_tol > 0.0) s.conv_tol = conv_tol;
  if (start) {
    s.r0 = *start;
  } else {
    const auto d = std::get<channel::ScaledNoncentralChiSq>(channel::siso_snr_dist(cfg));
    const double z = std::sqrt(d.lambda) - 1.0;
    const double snr = z * z > 1e-6 ? d.beta * z * z : 0.5 * d.beta * (1.0 + d.lambda);
    s.r0 = cfg.bandwidth * std::log1p(snr) / std::numbers::ln2;
  }
  // Warm start: the control law with delta re-picked at every iterate and
  // each move capped at a quarter of the current rate. rho spans many orders
  // of magnitude between the start and the optimum, so no single delta
  // suits the whole path.
  double r = s.r0;
  long warm = 0;
  for (; warm < 2000; ++warm) {
    const double g = siso_ec_gradient(cfg, alpha, r);
    const double c = siso_rho_curvature(cfg, alpha, r);
    double move = c > 0.0 ? -0.5 * g / c : -std::copysign(0.25 * r, g);
    move = std::clamp(move, -0.25 * r, 0.25 * r);
    r += move;
    if (std::abs(move) <= s.conv_tol) break;
  }
  s.r0 = r;
  if (const double step = siso_calibrated_step(cfg, alpha, r); step > 0.0) s.step = step;
  RateSolution sol = optimize_rate_siso(cfg, alpha, s);
  sol.iterations += warm;
  sol.note = "step " + channel::format_double(s.step);
  return sol;
}

double miso_rate_lhs(double rate, double alpha, double bandwidth, double slot) {
  return rate / bandwidth * std::numbers::ln2 + log_expm1(alpha * rate * slot);
}

double miso_rate_rhs(double kappa, double alpha, double bandwidth, double slot, MisoRateForm form) {
  const double v = bandwidth * alpha * slot / (kappa * std::numbers::ln2);
  return form == MisoRateForm::corrected ? std::log(v) : v;
}

RateSolution optimize_rate_miso_closed(const LinkConfig& cfg, QosExponent alpha, const MisoRateOptions& opts) {
  const double kappa = channel::miso_kappa(cfg, opts.kappa);
  const double b = cfg.bandwidth, t = cfg.slot, a = alpha.value();
  const double denom = std::numbers::ln2 / b + a * t;
  double r = 0.0;
  RateSolution sol;
  sol.method = Method::closed_form;
  if (opts.form == MisoRateForm::corrected) {
    r = std::log(b * a * t / (kappa * std::numbers::ln2)) / denom;
  } else {
    r = b * a * t / (kappa * std::numbers::ln2 * denom);
  }
  if (r <= 0.0) {
    sol.note = "approximation gives r* <= 0; clamped to 0";
    r = 0.0;
  }
  sol.r_star = r;
  sol.valid = std::exp(a * r * t) >= 10.0;
  if (!sol.valid && sol.note.empty()) sol.note = "e^{alpha r T} < 10: high-rate approximation not valid";
  sol.ec_at_r_star = eccore::ec_miso_nocsi(cfg, alpha, r, {eccore::SisoMgfForm::relaxed, opts.kappa}).ec_bits_per_slot;
  return sol;
}

RateSolution solve_rate_miso_exact(const LinkConfig& cfg, QosExponent alpha, const MisoRateOptions& opts) {
  const double kappa = channel::miso_kappa(cfg, opts.kappa);
  const double b = cfg.bandwidth, t = cfg.slot, a = alpha.value();
  const double rhs = miso_rate_rhs(kappa, a, b, t, opts.form);
  auto f = [&](double r) { return miso_rate_lhs(r, a, b, t) - rhs; };
  double lo = 0.0, hi = b;
  int doublings = 0;
  while (!(f(hi) > 0.0)) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 1100 || !std::isfinite(hi)) {
      throw ConvergenceError("optimal-rate equation: cannot bracket the root (right side " +
                             channel::format_double(rhs) + ")");
    }
  }
  long it = 0;
  for (; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0) hi = mid; else lo = mid;
  }
  const double r = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
  const double residual = std::abs(f(r));
  RateSolution sol;
  sol.method = Method::root_find;
  sol.r_star = r;
  sol.iterations = it;
  sol.ec_at_r_star = eccore::ec_miso_nocsi(cfg, alpha, r, {eccore::SisoMgfForm::relaxed, opts.kappa}).ec_bits_per_slot;
  if (residual > 1e-10) {
    sol.valid = false;
    sol.note = "residual " + channel::format_double(residual) + " above 1e-10";
  }
  return sol;
}

double nocsi_ec(const LinkConfig& cfg, QosExponent alpha, Scenario scenario, double rate,
                const eccore::EcOptions& opts) {
  switch (scenario) {
    case Scenario::siso_nocsi:
      return eccore::ec_siso_nocsi(cfg, alpha, rate, opts).ec_bits_per_slot;
    case Scenario::miso_nocsi:
      return eccore::ec_miso_nocsi(cfg, alpha, rate, opts).ec_bits_per_slot;
    default:
      throw ConfigError("rate optimization needs a no-CSI scenario");
  }
}

RateSolution optimal_rate(const LinkConfig& cfg, QosExponent alpha, Scenario scenario, const eccore::EcOptions& opts) {
  switch (scenario) {
    case Scenario::siso_nocsi:
      return optimize_rate_siso_auto(cfg, alpha);
    case Scenario::miso_nocsi:
      return solve_rate_miso_exact(cfg, alpha, {MisoRateForm::corrected, opts.kappa});
    default:
      throw ConfigError("rate optimization needs a no-CSI scenario");
  }
}

RateSolution grid_argmax_rate(const LinkConfig& cfg, QosExponent alpha, Scenario scenario, double r_max, int points,
                              const eccore::EcOptions& opts) {
  if (points < 3) throw ConfigError("grid needs at least 3 points");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw ConfigError("grid r_max must be positive");
  const double h = r_max / points;
  int best = 1;
  double best_ec = -1.0;
  for (int i = 1; i <= points; ++i) {
    const double ec = nocsi_ec(cfg, alpha, scenario, h * i, opts);
    if (ec > best_ec) {
      best_ec = ec;
      best = i;
    }
  }
  RateSolution sol;
  sol.method = Method::grid;
  sol.iterations = points;
  if (!(best_ec > 0.0)) {
    sol.r_star = h;
    sol.ec_at_r_star = 0.0;
    sol.note = "EC is zero on the whole grid";
    return sol;
  }
  const double lo = h * (best - 1) > 0.0 ? h * (best - 1) : 1e-3 * h;
  const double hi = h * std::min(best + 1, points);
  const double r = brent_minimize([&](double x) { return -nocsi_ec(cfg, alpha, scenario, x, opts); }, lo, hi, 3e-9);
  const double ec = nocsi_ec(cfg, alpha, scenario, r, opts);
  if (ec >= best_ec) {
    sol.r_star = r;
    sol.ec_at_r_star = ec;
  } else {
    sol.r_star = h * best;
    sol.ec_at_r_star = best_ec;
  }
  return sol;
}

}  // namespace irsec::rateopt
