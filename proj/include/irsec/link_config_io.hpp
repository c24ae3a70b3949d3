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

// Flat text config files for LinkConfig.
//
//   # comment
//   d1 = 50
//   g_t_db = 10          (any gain may be given in dB with a _db suffix)
//   phi_inc_deg = 30     (or phi_inc in radians)
//   precoder = equal     (or 2 * n_tx reals: re0 im0 re1 im1 ...)
//
// Unknown keys and malformed values raise ConfigError with the line number.
// Keys not present keep the value from the base config (Table I defaults).

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "irsec/channel.hpp"

namespace irsec::channel {

LinkConfig parse_link_config(std::string_view text, const LinkConfig& base = {});
LinkConfig load_link_config(const std::filesystem::path& path, const LinkConfig& base = {});

// Keys assigned in a config text, in file order (no validation of values).
std::vector<std::string> config_keys(std::string_view text);

// Sets one field by config-file key; used for command-line overrides.
void apply_setting(LinkConfig& cfg, std::string_view key, std::string_view value);

// Every field in linear SI units, doubles in shortest round-trip form, so
// parse_link_config(format_link_config(c)) reproduces c exactly.
std::string format_link_config(const LinkConfig& cfg);
void save_link_config(const LinkConfig& cfg, const std::filesystem::path& path);

// Shortest decimal string that reads back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

}  // namespace irsec::channel
