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

#include "irsec/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "irsec/errors.hpp"
#include "irsec/link_config_io.hpp"
#include "irsec/mcoracle.hpp"
#include "irsec/rateopt.hpp"

namespace irsec::sweep {
namespace {

using eccore::Scenario;

bool is_integer(double v) { return v == std::floor(v) && v >= 1.0 && v <= 1e6; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string opt_double(const std::optional<double>& v) { return v ? channel::format_double(*v) : std::string(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

std::string_view sweep_var_name(SweepVar v) {
  switch (v) {
    case SweepVar::p_t:
      return "p_t";
    case SweepVar::n_elems:
      return "N";
    case SweepVar::n_tx:
      return "N_t";
    case SweepVar::alpha:
      return "alpha";
    case SweepVar::rate:
      return "rate";
  }
  return "?";
}

SweepVar parse_sweep_var(std::string_view name) {
  if (name == "p_t") return SweepVar::p_t;
  if (name == "N" || name == "n_elems") return SweepVar::n_elems;
  if (name == "N_t" || name == "n_tx") return SweepVar::n_tx;
  if (name == "alpha") return SweepVar::alpha;
  if (name == "rate") return SweepVar::rate;
  throw ConfigError("unknown sweep variable '" + std::string(name) + "' (p_t, N, N_t, alpha, rate)");
}

void SweepSpec::validate() const {
  if (values.empty()) throw ConfigError("sweep values are empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw ConfigError("sweep values must be strictly increasing");
  }
  for (const double v : values) {
    if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
  }
  if (sweep_var == SweepVar::rate && !eccore::is_nocsi(scenario)) {
    throw ConfigError("rate sweeps need a no-CSI scenario");
  }
  if (sweep_var == SweepVar::n_tx && eccore::is_siso(scenario)) {
    throw ConfigError("N_t sweeps need a multi-antenna scenario");
  }
  if (sweep_var == SweepVar::n_elems || sweep_var == SweepVar::n_tx) {
    for (const double v : values) {
      if (!is_integer(v)) throw ConfigError("N and N_t sweep values must be positive integers");
    }
  }
  if (sweep_var != SweepVar::alpha && alpha_list.empty()) throw ConfigError("alpha list is empty");
  if (mc_slots % mcoracle::kDefaultBlockLength != 0) {
    throw ConfigError("mc_slots must be a multiple of " + std::to_string(mcoracle::kDefaultBlockLength));
  }
  fixed.validate();
  if (eccore::is_siso(scenario) && fixed.n_tx != 1) throw ConfigError("single-antenna scenario requires n_tx = 1");
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows;
  for (const double value : spec.values) {
    const std::vector<double> alphas = spec.sweep_var == SweepVar::alpha ? std::vector<double>{value} : spec.alpha_list;
    for (const double alpha_v : alphas) {
      SweepRow row;
      row.var = spec.sweep_var;
      row.value = value;
      row.alpha = alpha_v;
      try {
        channel::LinkConfig cfg = spec.fixed;
        std::optional<double> rate;
        switch (spec.sweep_var) {
          case SweepVar::p_t:
            cfg.p_t = value;
            break;
          case SweepVar::n_elems:
            cfg.n_elems = static_cast<int>(value);
            break;
          case SweepVar::n_tx:
            cfg.n_tx = static_cast<int>(value);
            cfg.precoder.clear();
            break;
          case SweepVar::alpha:
            break;
          case SweepVar::rate:
            rate = value;
            break;
        }
        const eccore::QosExponent alpha(alpha_v);
        if (eccore::is_nocsi(spec.scenario) && !rate) {
          const auto sol = rateopt::optimal_rate(cfg, alpha, spec.scenario, spec.options);
          rate = sol.r_star;
          row.r_star = sol.r_star;
        }
        row.ec_analytical = eccore::evaluate(cfg, {spec.scenario, alpha_v, rate}, spec.options).ec_bits_per_slot;
        if (spec.mc_slots > 0) {
          const auto service = mcoracle::simulate_service(cfg, spec.scenario, rate, spec.seed, spec.mc_slots);
          const auto est = mcoracle::empirical_ec(service, alpha);
          row.ec_oracle = est.value;
          row.oracle_stderr = est.std_error;
        }
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.value != b.value ? a.value < b.value : a.alpha < b.alpha;
  });
  return rows;
}

std::string format_csv(const std::vector<SweepRow>& rows) {
  std::string out(kCsvHeader);
  out += "\r\n";
  for (const auto& r : rows) {
    out += std::string(sweep_var_name(r.var)) + ',' + channel::format_double(r.value) + ',' +
           channel::format_double(r.alpha) + ',' + opt_double(r.ec_analytical) + ',' + opt_double(r.ec_oracle) + ',' +
           opt_double(r.oracle_stderr) + ',' + opt_double(r.r_star) + ',' + csv_field(r.error) + "\r\n";
  }
  return out;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  write_file(path, format_csv(rows));
}

std::string render_svg(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw ConfigError("cannot plot an empty table");
  const SweepVar var = rows.front().var;
  const bool log_x = var == SweepVar::p_t;
  constexpr double W = 720, H = 480, L = 80, R = 150, T = 30, B = 60;
  const double pw = W - L - R, ph = H - T - B;

  auto xval = [&](double v) { return log_x ? std::log10(v) : v; };

  std::map<double, std::vector<const SweepRow*>> series;
  double x0 = INFINITY, x1 = -INFINITY, y1 = 0.0;
  for (const auto& r : rows) {
    if (!r.ec_analytical || (log_x && !(r.value > 0.0))) continue;
    series[r.alpha].push_back(&r);
    x0 = std::min(x0, xval(r.value));
    x1 = std::max(x1, xval(r.value));
    y1 = std::max(y1, *r.ec_analytical);
    if (r.ec_oracle) y1 = std::max(y1, *r.ec_oracle);
  }
  if (series.empty()) throw ConfigError("no plottable rows (all rows have errors)");
  if (x1 <= x0) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  y1 = y1 > 0.0 ? 1.05 * y1 : 1.0;
  auto px = [&](double v) { return L + (xval(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return T + ph - y / y1 * ph; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" viewBox=\"0 0 720 480\" "
       "font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n"
    << "<rect x=\"" << fmt("%.2f", L) << "\" y=\"" << fmt("%.2f", T) << "\" width=\"" << fmt("%.2f", pw)
    << "\" height=\"" << fmt("%.2f", ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  // y ticks
  for (int i = 0; i <= 5; ++i) {
    const double y = y1 * i / 5.0;
    s << "<line x1=\"" << fmt("%.2f", L - 4) << "\" y1=\"" << fmt("%.2f", py(y)) << "\" x2=\"" << fmt("%.2f", L)
      << "\" y2=\"" << fmt("%.2f", py(y)) << "\" stroke=\"black\"/>"
      << "<text x=\"" << fmt("%.2f", L - 6) << "\" y=\"" << fmt("%.2f", py(y) + 4) << "\" text-anchor=\"end\">"
      << fmt("%.3g", y) << "</text>\n";
  }
  // x ticks
  if (log_x) {
    for (double d = std::ceil(x0 - 1e-9); d <= x1 + 1e-9; d += 1.0) {
      const double xp = L + (d - x0) / (x1 - x0) * pw;
      s << "<line x1=\"" << fmt("%.2f", xp) << "\" y1=\"" << fmt("%.2f", T + ph) << "\" x2=\"" << fmt("%.2f", xp)
        << "\" y2=\"" << fmt("%.2f", T + ph + 4) << "\" stroke=\"black\"/>"
        << "<text x=\"" << fmt("%.2f", xp) << "\" y=\"" << fmt("%.2f", T + ph + 18) << "\" text-anchor=\"middle\">1e"
        << fmt("%.0f", d) << "</text>\n";
    }
  } else {
    for (int i = 0; i <= 5; ++i) {
      const double xv = x0 + (x1 - x0) * i / 5.0;
      const double xp = L + pw * i / 5.0;
      s << "<line x1=\"" << fmt("%.2f", xp) << "\" y1=\"" << fmt("%.2f", T + ph) << "\" x2=\"" << fmt("%.2f", xp)
        << "\" y2=\"" << fmt("%.2f", T + ph + 4) << "\" stroke=\"black\"/>"
        << "<text x=\"" << fmt("%.2f", xp) << "\" y=\"" << fmt("%.2f", T + ph + 18) << "\" text-anchor=\"middle\">"
        << fmt("%.4g", xv) << "</text>\n";
    }
  }
  s << "<text x=\"" << fmt("%.2f", L + pw / 2) << "\" y=\"" << fmt("%.2f", H - 15) << "\" text-anchor=\"middle\">"
    << sweep_var_name(var) << (log_x ? " (log scale)" : "") << "</text>\n"
    << "<text transform=\"translate(20 " << fmt("%.2f", T + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << "EC (bits/slot)</text>\n";

  int idx = 0;
  for (const auto& [alpha, pts] : series) {
    const char* color = palette[idx % 8];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      s << (i ? " " : "") << fmt("%.2f", px(pts[i]->value)) << ',' << fmt("%.2f", py(*pts[i]->ec_analytical));
    }
    s << "\"/>\n";
    for (const auto* p : pts) {
      if (!p->ec_oracle) continue;
      s << "<circle cx=\"" << fmt("%.2f", px(p->value)) << "\" cy=\"" << fmt("%.2f", py(*p->ec_oracle))
        << "\" r=\"3\" fill=\"none\" stroke=\"" << color << "\"/>\n";
    }
    const double ly = T + 20 + 20 * idx;
    s << "<line x1=\"" << fmt("%.2f", L + pw + 15) << "\" y1=\"" << fmt("%.2f", ly) << "\" x2=\""
      << fmt("%.2f", L + pw + 40) << "\" y2=\"" << fmt("%.2f", ly) << "\" stroke=\"" << color
      << "\" stroke-width=\"1.5\"/>"
      << "<text x=\"" << fmt("%.2f", L + pw + 45) << "\" y=\"" << fmt("%.2f", ly + 4) << "\">alpha = "
      << fmt("%.4g", alpha) << "</text>\n";
    ++idx;
  }
  s << "</svg>\n";
  return s.str();
}

void emit_plot(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  write_file(path, render_svg(rows));
}

}  // namespace irsec::sweep
