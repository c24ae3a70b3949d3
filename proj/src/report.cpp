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

#include "irsec/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "irsec/link_config_io.hpp"
#include "irsec/mcoracle.hpp"
#include "irsec/rateopt.hpp"

namespace irsec::report {
namespace {

using eccore::Scenario;

constexpr double kNoCsiTol = 0.03;
constexpr double kMisoCsiTol = 0.03;
constexpr double kSisoCsiTol = 0.05;

channel::LinkConfig for_scenario(const ValidationSettings& s, Scenario sc, int n_elems) {
  channel::LinkConfig cfg = s.base;
  cfg.n_elems = n_elems;
  cfg.n_tx = eccore::is_siso(sc) ? 1 : s.miso_n_tx;
  cfg.precoder.clear();
  return cfg;
}

ValidationLine oracle_line(const ValidationSettings& s, Scenario sc, int n_elems, double alpha_v) {
  ValidationLine line;
  line.check = "oracle";
  line.scenario = sc;
  line.n_elems = n_elems;
  line.alpha = alpha_v;
  try {
    const auto cfg = for_scenario(s, sc, n_elems);
    line.n_tx = cfg.n_tx;
    const eccore::QosExponent alpha(alpha_v);
    if (eccore::is_nocsi(sc)) line.rate = rateopt::optimal_rate(cfg, alpha, sc, s.options).r_star;
    const auto res = eccore::evaluate(cfg, {sc, alpha_v, line.rate}, s.options);
    line.analytical = res.ec_bits_per_slot;
    const auto est = mcoracle::empirical_ec(mcoracle::simulate_service(cfg, sc, line.rate, s.seed, s.slots), alpha);
    line.oracle = est.value;
    line.std_error = est.std_error;
    line.rel_diff = est.value != 0.0 ? (line.analytical - est.value) / est.value : line.analytical;
    line.tolerance = sc == Scenario::siso_csi ? kSisoCsiTol : sc == Scenario::miso_csi ? kMisoCsiTol : kNoCsiTol;
    const double allowed = eccore::is_nocsi(sc) ? std::max(line.tolerance * std::abs(est.value), 3.0 * est.std_error)
                                                : line.tolerance * std::abs(est.value);
    line.pass = std::abs(line.analytical - est.value) <= allowed;
    if (sc == Scenario::siso_csi) {
      line.note = "unrelaxed " + channel::format_double(res.diagnostics.at("ec_unrelaxed"));
    }
    for (const auto& w : res.warnings) line.note += (line.note.empty() ? "" : "; ") + w;
  } catch (const std::exception& e) {
    line.note = e.what();
  }
  return line;
}

double ec_at(const channel::LinkConfig& cfg, Scenario sc, double alpha_v, const eccore::EcOptions& opts) {
  const eccore::QosExponent alpha(alpha_v);
  std::optional<double> rate;
  if (eccore::is_nocsi(sc)) rate = rateopt::optimal_rate(cfg, alpha, sc, opts).r_star;
  return eccore::evaluate(cfg, {sc, alpha_v, rate}, opts).ec_bits_per_slot;
}

ValidationLine trend_line(const ValidationSettings& s, Scenario sc, const std::string& what,
                          const std::vector<double>& xs, bool increasing) {
  ValidationLine line;
  line.check = "trend:" + what;
  line.scenario = sc;
  line.n_elems = s.base.n_elems;
  line.alpha = 0.1;
  try {
    std::vector<double> ec;
    for (const double x : xs) {
      auto cfg = for_scenario(s, sc, s.base.n_elems);
      double alpha = 0.1;
      if (what == "p_t") cfg.p_t = x;
      else if (what == "N") cfg.n_elems = static_cast<int>(x);
      else if (what == "alpha") alpha = x;
      line.n_tx = cfg.n_tx;
      ec.push_back(ec_at(cfg, sc, alpha, s.options));
    }
    line.pass = true;
    for (std::size_t i = 1; i < ec.size(); ++i) {
      const bool ok = increasing ? ec[i] >= ec[i - 1] - 1e-12 : ec[i] <= ec[i - 1] + 1e-12;
      line.pass = line.pass && ok;
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < ec.size(); ++i) os << (i ? " " : "") << channel::format_double(ec[i]);
    line.note = (increasing ? "nondecreasing: " : "nonincreasing: ") + os.str();
  } catch (const std::exception& e) {
    line.note = e.what();
  }
  return line;
}

}  // namespace

std::vector<ValidationLine> run_validation(const ValidationSettings& s) {
  std::vector<ValidationLine> out;
  for (const int n : {16, 100}) {
    for (const double a : {0.1, 10.0}) out.push_back(oracle_line(s, Scenario::siso_nocsi, n, a));
  }
  for (const double a : {0.1, 10.0}) out.push_back(oracle_line(s, Scenario::miso_nocsi, s.base.n_elems, a));
  out.push_back(oracle_line(s, Scenario::miso_csi, s.base.n_elems, 0.1));
  out.push_back(oracle_line(s, Scenario::siso_csi, s.base.n_elems, 0.1));
  for (const Scenario sc : {Scenario::siso_csi, Scenario::siso_nocsi, Scenario::miso_csi, Scenario::miso_nocsi}) {
    out.push_back(trend_line(s, sc, "p_t", {1e-4, 1e-3, 1e-2}, true));
    out.push_back(trend_line(s, sc, "N", {16, 64, 100, 256}, true));
    out.push_back(trend_line(s, sc, "alpha", {0.01, 0.1, 1.0, 10.0}, false));
  }
  return out;
}

std::string format_validation(const std::vector<ValidationLine>& lines) {
  std::ostringstream os;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-12s %-11s %5s %4s %7s %10s %12s %12s %10s %9s %5s  %s\n", "check", "scenario", "N",
                "N_t", "alpha", "rate", "analytical", "oracle", "stderr", "rel_diff", "pass", "note");
  os << buf;
  auto num = [](const char* f, double v) {
    char b[32];
    std::snprintf(b, sizeof b, f, v);
    return std::string(b);
  };
  for (const auto& l : lines) {
    const bool oracle = l.check == "oracle";
    const std::string rate = l.rate ? num("%.7g", *l.rate) : "-";
    std::snprintf(buf, sizeof buf, "%-12s %-11s %5d %4d %7.3g %10s %12s %12s %10s %9s %5s  %s\n",
                  l.check.c_str(), std::string(eccore::scenario_name(l.scenario)).c_str(), l.n_elems, l.n_tx, l.alpha,
                  rate.c_str(), oracle ? num("%.6g", l.analytical).c_str() : "-",
                  oracle ? num("%.6g", l.oracle).c_str() : "-", oracle ? num("%.2g", l.std_error).c_str() : "-",
                  oracle ? num("%.3g", l.rel_diff).c_str() : "-", l.pass ? "yes" : "NO", l.note.c_str());
    os << buf;
  }
  return os.str();
}

}  // namespace irsec::report
