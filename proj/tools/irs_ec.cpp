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

// irs_ec: effective capacity of IRS-assisted links from the command line.
//
//   irs_ec ec --scenario siso_nocsi --alpha 0.1 [--rate 1.2]
//   irs_ec sweep --scenario miso_csi --var p_t --values 1e-4,1e-3,1e-2 --csv out.csv --svg out.svg
//   irs_ec optimize-rate --scenario siso_nocsi --alpha 0.1
//   irs_ec validate --slots 1000000
//
// Every verb accepts --config FILE and per-field overrides such as --p_t or
// --g_t_db. Errors print one JSON line on stderr and exit nonzero.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "irsec/channel.hpp"
#include "irsec/eccore.hpp"
#include "irsec/errors.hpp"
#include "irsec/link_config_io.hpp"
#include "irsec/mcoracle.hpp"
#include "irsec/rateopt.hpp"
#include "irsec/report.hpp"
#include "irsec/sweep.hpp"

namespace {

using nlohmann::json;
using namespace irsec;

constexpr int kMisoDefaultNtx = 10;

const std::vector<std::string> kConfigKeys = {"d1",     "d2",     "x_irs",   "y_irs",  "phi_inc", "phi_inc_deg",
                                              "g_t",    "g_r",    "g_t_db",  "g_r_db", "p_t",     "sigma2",
                                              "n_elems", "n_tx",  "bandwidth", "slot", "precoder"};

struct Common {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "LinkConfig file (name = value lines)");
  app->add_option("--seed", c.seed, "RNG seed (falls back to IRS_EC_SEED, then 1)");
  for (const auto& key : kConfigKeys) {
    app->add_option_function<std::string>(
        "--" + key, [&c, key](const std::string& v) { c.overrides[key] = v; }, "LinkConfig." + key);
  }
}

std::uint64_t resolve_seed(const Common& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("IRS_EC_SEED"); env != nullptr && *env != '\0') {
    const long long v = channel::parse_integer(env);
    if (v < 0) throw ConfigError("IRS_EC_SEED must be nonnegative");
    return static_cast<std::uint64_t>(v);
  }
  return 1;
}

channel::LinkConfig resolve_config(const Common& c, bool miso) {
  channel::LinkConfig cfg;
  bool n_tx_given = c.overrides.count("n_tx") > 0;
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    if (!in) throw IoError("cannot open config file " + c.config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    for (const auto& k : channel::config_keys(ss.str())) n_tx_given = n_tx_given || k == "n_tx";
    cfg = channel::load_link_config(c.config_path);
  }
  for (const auto& [k, v] : c.overrides) channel::apply_setting(cfg, k, v);
  if (miso && !n_tx_given) cfg.n_tx = kMisoDefaultNtx;
  cfg.validate();
  return cfg;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(channel::parse_double(item));
  }
  if (out.empty()) throw ConfigError("empty list '" + text + "'");
  return out;
}

eccore::SisoMgfForm parse_siso_form(const std::string& s) {
  if (s == "relaxed") return eccore::SisoMgfForm::relaxed;
  if (s == "printed") return eccore::SisoMgfForm::printed;
  if (s == "exact") return eccore::SisoMgfForm::exact;
  throw ConfigError("--siso-form must be relaxed, printed or exact");
}

channel::KappaMode parse_kappa_mode(const std::string& s) {
  if (s == "direct") return channel::KappaMode::direct;
  if (s == "fitted") return channel::KappaMode::fitted;
  if (s == "paper_squared") return channel::KappaMode::paper_squared;
  if (s == "paper_linear") return channel::KappaMode::paper_linear;
  throw ConfigError("--kappa-mode must be direct, fitted, paper_squared or paper_linear");
}

struct ModelFlags {
  std::string siso_form = "relaxed";
  std::string kappa_mode = "direct";
};

void add_model_flags(CLI::App* app, ModelFlags& m) {
  app->add_option("--siso-form", m.siso_form, "single-antenna CSI MGF: relaxed, printed, exact")->capture_default_str();
  app->add_option("--kappa-mode", m.kappa_mode, "multi-antenna SNR rate: direct, fitted, paper_squared, paper_linear")
      ->capture_default_str();
}

eccore::EcOptions make_options(const ModelFlags& m, std::uint64_t seed) {
  eccore::EcOptions o;
  o.siso_form = parse_siso_form(m.siso_form);
  o.kappa.mode = parse_kappa_mode(m.kappa_mode);
  o.kappa.fit_seed = seed;
  return o;
}

json solution_json(const rateopt::RateSolution& s) {
  return {{"r_star", s.r_star},     {"ec_at_r_star", s.ec_at_r_star}, {"iterations", s.iterations},
          {"method", std::string(rateopt::method_name(s.method))},      {"valid", s.valid},
          {"note", s.note}};
}

void print_error(const std::string& type, const std::string& msg) {
  std::cerr << json{{"error", {{"type", type}, {"message", msg}}}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective capacity of IRS-assisted SISO/MISO links"};
  app.require_subcommand(1);

  // ec
  Common ec_common;
  ModelFlags ec_model;
  std::string ec_scenario;
  double ec_alpha = 0.0;
  std::optional<double> ec_rate;
  auto* ec = app.add_subcommand("ec", "evaluate one effective capacity");
  add_common(ec, ec_common);
  add_model_flags(ec, ec_model);
  ec->add_option("--scenario", ec_scenario, "siso_csi, siso_nocsi, miso_csi, miso_nocsi")->required();
  ec->add_option("--alpha", ec_alpha, "QoS exponent")->required();
  ec->add_option("--rate", ec_rate, "fixed rate (no-CSI); optimal rate when omitted");

  // sweep
  Common sw_common;
  ModelFlags sw_model;
  std::string sw_scenario, sw_var, sw_values, sw_alphas = "0.1", sw_csv, sw_svg;
  std::size_t sw_slots = 0;
  auto* sw = app.add_subcommand("sweep", "sweep one parameter, write CSV and SVG");
  add_common(sw, sw_common);
  add_model_flags(sw, sw_model);
  sw->add_option("--scenario", sw_scenario)->required();
  sw->add_option("--var", sw_var, "p_t, N, N_t, alpha, rate")->required();
  sw->add_option("--values", sw_values, "comma-separated, strictly increasing")->required();
  sw->add_option("--alpha-list", sw_alphas, "comma-separated QoS exponents")->capture_default_str();
  sw->add_option("--mc-slots", sw_slots, "Monte Carlo slots per row (0: no oracle)")->capture_default_str();
  sw->add_option("--csv", sw_csv, "CSV output path (default: stdout)");
  sw->add_option("--svg", sw_svg, "SVG output path");

  // optimize-rate
  Common op_common;
  ModelFlags op_model;
  std::string op_scenario, op_method = "auto", op_form = "corrected";
  double op_alpha = 0.0;
  std::optional<double> op_r0, op_step, op_tol, op_rmax;
  long op_iters = 100000;
  int op_points = 1000;
  auto* op = app.add_subcommand("optimize-rate", "optimal fixed rate for a no-CSI scenario");
  add_common(op, op_common);
  add_model_flags(op, op_model);
  op->add_option("--scenario", op_scenario, "siso_nocsi or miso_nocsi")->required();
  op->add_option("--alpha", op_alpha)->required();
  op->add_option("--method", op_method, "auto, descent, closed, exact, grid")->capture_default_str();
  op->add_option("--equation", op_form, "multi-antenna equation: corrected or printed")->capture_default_str();
  op->add_option("--r0", op_r0, "descent start (default B)");
  op->add_option("--step", op_step, "descent step delta (default 0.05 B)");
  op->add_option("--tol", op_tol, "descent tolerance epsilon_c (default 1e-8 B)");
  op->add_option("--max-iters", op_iters)->capture_default_str();
  op->add_option("--r-max", op_rmax, "grid upper end (default 20 B)");
  op->add_option("--points", op_points)->capture_default_str();

  // validate
  Common va_common;
  ModelFlags va_model;
  std::size_t va_slots = 1000000;
  int va_ntx = kMisoDefaultNtx;
  bool va_json = false, va_strict = false;
  auto* va = app.add_subcommand("validate", "closed forms against the Monte Carlo oracle");
  add_common(va, va_common);
  add_model_flags(va, va_model);
  va->add_option("--slots", va_slots, "slots per oracle run (multiple of 100)")->capture_default_str();
  va->add_option("--miso-n-tx", va_ntx)->capture_default_str();
  va->add_flag("--json", va_json, "JSON instead of a text table");
  va->add_flag("--strict", va_strict, "exit 3 when any check fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (ec->parsed()) {
      const auto sc = eccore::parse_scenario(ec_scenario);
      const auto cfg = resolve_config(ec_common, !eccore::is_siso(sc));
      const auto opts = make_options(ec_model, resolve_seed(ec_common));
      const eccore::QosExponent alpha(ec_alpha);
      std::optional<double> rate = ec_rate;
      json out;
      if (eccore::is_nocsi(sc) && !rate) {
        const auto sol = rateopt::optimal_rate(cfg, alpha, sc, opts);
        rate = sol.r_star;
        out["rate_solution"] = solution_json(sol);
      }
      const auto res = eccore::evaluate(cfg, {sc, ec_alpha, rate}, opts);
      out["scenario"] = std::string(eccore::scenario_name(sc));
      out["alpha"] = ec_alpha;
      out["rate"] = rate ? json(*rate) : json(nullptr);
      out["ec_bits_per_slot"] = res.ec_bits_per_slot;
      out["diagnostics"] = res.diagnostics;
      out["warnings"] = res.warnings;
      std::cout << out.dump(2) << std::endl;
    } else if (sw->parsed()) {
      sweep::SweepSpec spec;
      spec.scenario = eccore::parse_scenario(sw_scenario);
      spec.sweep_var = sweep::parse_sweep_var(sw_var);
      spec.values = parse_list(sw_values);
      spec.alpha_list = parse_list(sw_alphas);
      spec.fixed = resolve_config(sw_common, !eccore::is_siso(spec.scenario));
      spec.seed = resolve_seed(sw_common);
      spec.mc_slots = sw_slots;
      spec.options = make_options(sw_model, spec.seed);
      const auto rows = sweep::run_sweep(spec);
      if (sw_csv.empty()) {
        std::cout << sweep::format_csv(rows);
      } else {
        sweep::emit_csv(rows, sw_csv);
      }
      if (!sw_svg.empty()) sweep::emit_plot(rows, sw_svg);
    } else if (op->parsed()) {
      const auto sc = eccore::parse_scenario(op_scenario);
      if (!eccore::is_nocsi(sc)) throw ConfigError("optimize-rate needs siso_nocsi or miso_nocsi");
      const auto cfg = resolve_config(op_common, !eccore::is_siso(sc));
      const auto opts = make_options(op_model, resolve_seed(op_common));
      const eccore::QosExponent alpha(op_alpha);
      rateopt::MisoRateOptions mopts;
      mopts.kappa = opts.kappa;
      if (op_form == "printed") mopts.form = rateopt::MisoRateForm::printed;
      else if (op_form != "corrected") throw ConfigError("--equation must be corrected or printed");
      rateopt::RateSolution sol;
      if (op_method == "auto") {
        sol = rateopt::optimal_rate(cfg, alpha, sc, opts);
      } else if (op_method == "descent") {
        if (sc != eccore::Scenario::siso_nocsi) throw ConfigError("descent applies to siso_nocsi");
        auto s = rateopt::DescentSettings::defaults(cfg.bandwidth);
        if (op_r0) s.r0 = *op_r0;
        if (op_step) s.step = *op_step;
        if (op_tol) s.conv_tol = *op_tol;
        s.max_iters = op_iters;
        sol = rateopt::optimize_rate_siso(cfg, alpha, s);
      } else if (op_method == "closed") {
        if (sc != eccore::Scenario::miso_nocsi) throw ConfigError("closed applies to miso_nocsi");
        sol = rateopt::optimize_rate_miso_closed(cfg, alpha, mopts);
      } else if (op_method == "exact") {
        if (sc != eccore::Scenario::miso_nocsi) throw ConfigError("exact applies to miso_nocsi");
        sol = rateopt::solve_rate_miso_exact(cfg, alpha, mopts);
      } else if (op_method == "grid") {
        sol = rateopt::grid_argmax_rate(cfg, alpha, sc, op_rmax.value_or(20.0 * cfg.bandwidth), op_points, opts);
      } else {
        throw ConfigError("--method must be auto, descent, closed, exact or grid");
      }
      json out = solution_json(sol);
      out["scenario"] = std::string(eccore::scenario_name(sc));
      out["alpha"] = op_alpha;
      std::cout << out.dump(2) << std::endl;
    } else if (va->parsed()) {
      report::ValidationSettings s;
      s.base = resolve_config(va_common, false);
      s.miso_n_tx = va_ntx;
      s.seed = resolve_seed(va_common);
      s.slots = va_slots;
      s.options = make_options(va_model, s.seed);
      const auto lines = report::run_validation(s);
      bool all = true;
      for (const auto& l : lines) all = all && l.pass;
      if (va_json) {
        json arr = json::array();
        for (const auto& l : lines) {
          arr.push_back({{"check", l.check},
                         {"scenario", std::string(eccore::scenario_name(l.scenario))},
                         {"n_elems", l.n_elems},
                         {"n_tx", l.n_tx},
                         {"alpha", l.alpha},
                         {"rate", l.rate ? json(*l.rate) : json(nullptr)},
                         {"analytical", l.analytical},
                         {"oracle", l.oracle},
                         {"std_error", l.std_error},
                         {"rel_diff", l.rel_diff},
                         {"tolerance", l.tolerance},
                         {"pass", l.pass},
                         {"note", l.note}});
        }
        std::cout << json{{"all_pass", all}, {"checks", arr}}.dump(2) << std::endl;
      } else {
        std::cout << report::format_validation(lines);
      }
      if (va_strict && !all) return 3;
    }
  } catch (const rateopt::NonConvergence& e) {
    print_error("non_convergence", e.what());
    return 1;
  } catch (const ConfigError& e) {
    print_error("config", e.what());
    return 2;
  } catch (const DomainError& e) {
    print_error("domain", e.what());
    return 1;
  } catch (const ConvergenceError& e) {
    print_error("convergence", e.what());
    return 1;
  } catch (const IoError& e) {
    print_error("io", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
