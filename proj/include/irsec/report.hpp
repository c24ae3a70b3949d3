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

// Analytical-versus-oracle comparison over a fixed parameter grid, plus
// monotonicity checks of the closed forms.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irsec/channel.hpp"
#include "irsec/eccore.hpp"

namespace irsec::report {

struct ValidationLine {
  std::string check;  // "oracle" or "trend:<what>"
  eccore::Scenario scenario = eccore::Scenario::siso_csi;
  int n_elems = 0;
  int n_tx = 0;
  double alpha = 0.0;
  std::optional<double> rate;
  double analytical = 0.0;
  double oracle = 0.0;
  double std_error = 0.0;
  double rel_diff = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct ValidationSettings {
  channel::LinkConfig base;  // n_tx is overridden per scenario
  int miso_n_tx = 10;
  std::uint64_t seed = 1;
  std::size_t slots = 1000000;
  eccore::EcOptions options;
};

std::vector<ValidationLine> run_validation(const ValidationSettings& settings);

// Fixed-width text table.
std::string format_validation(const std::vector<ValidationLine>& lines);

}  // namespace irsec::report
