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

// Parameter sweeps over the link configuration and their CSV / SVG output.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irsec/channel.hpp"
#include "irsec/eccore.hpp"

namespace irsec::sweep {

enum class SweepVar { p_t, n_elems, n_tx, alpha, rate };

// Column labels: p_t, N, N_t, alpha, rate.
std::string_view sweep_var_name(SweepVar v);
SweepVar parse_sweep_var(std::string_view name);  // also accepts n_elems, n_tx

struct SweepSpec {
  eccore::Scenario scenario = eccore::Scenario::siso_csi;
  SweepVar sweep_var = SweepVar::p_t;
  std::vector<double> values;
  channel::LinkConfig fixed;
  std::vector<double> alpha_list{0.1};  // ignored when sweeping alpha
  std::uint64_t seed = 1;
  std::size_t mc_slots = 0;  // 0: no oracle column; else a multiple of 100
  eccore::EcOptions options;

  // Throws ConfigError: values empty or not strictly increasing, rate sweep
  // on a perfect-CSI scenario, N_t sweep on a single-antenna scenario,
  // non-integer N or N_t, mc_slots not a multiple of the block length.
  void validate() const;
};

struct SweepRow {
  SweepVar var = SweepVar::p_t;
  double value = 0.0;
  double alpha = 0.0;
  std::optional<double> ec_analytical;
  std::optional<double> ec_oracle;
  std::optional<double> oracle_stderr;
  std::optional<double> r_star;
  std::string error;
};

// One row per (value, alpha), ordered by value then alpha. No-CSI rows use
// the optimal rate unless the rate itself is swept. Errors of one row are
// stored in that row.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

inline constexpr std::string_view kCsvHeader = "sweep_var,value,alpha,ec_analytical,ec_oracle,oracle_stderr,r_star,error";

std::string format_csv(const std::vector<SweepRow>& rows);
void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

// One polyline per alpha; log x axis for p_t sweeps.
std::string render_svg(const std::vector<SweepRow>& rows);
void emit_plot(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

}  // namespace irsec::sweep
