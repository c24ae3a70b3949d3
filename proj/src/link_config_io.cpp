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

#include "irsec/link_config_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "irsec/errors.hpp"

namespace irsec::channel {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != ',') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

double from_db(double db) { return std::pow(10.0, db / 10.0); }

int parse_count(std::string_view v, std::string_view key) {
  const long long n = parse_integer(v);
  if (n < 1 || n > 1000000) throw ConfigError(std::string(key) + " out of range: " + std::string(v));
  return static_cast<int>(n);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  const std::string_view t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  const auto res = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

long long parse_integer(std::string_view text) {
  const std::string_view t = trim(text);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError("not an integer: '" + std::string(text) + "'");
  }
  return v;
}

void apply_setting(LinkConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "d1") cfg.d1 = parse_double(value);
  else if (key == "d2") cfg.d2 = parse_double(value);
  else if (key == "x_irs") cfg.x_irs = parse_double(value);
  else if (key == "y_irs") cfg.y_irs = parse_double(value);
  else if (key == "phi_inc") cfg.phi_inc = parse_double(value);
  else if (key == "phi_inc_deg") cfg.phi_inc = parse_double(value) * std::numbers::pi / 180.0;
  else if (key == "g_t") cfg.g_t = parse_double(value);
  else if (key == "g_r") cfg.g_r = parse_double(value);
  else if (key == "g_t_db") cfg.g_t = from_db(parse_double(value));
  else if (key == "g_r_db") cfg.g_r = from_db(parse_double(value));
  else if (key == "p_t") cfg.p_t = parse_double(value);
  else if (key == "sigma2") cfg.sigma2 = parse_double(value);
  else if (key == "n_elems") cfg.n_elems = parse_count(value, key);
  else if (key == "n_tx") cfg.n_tx = parse_count(value, key);
  else if (key == "bandwidth") cfg.bandwidth = parse_double(value);
  else if (key == "slot") cfg.slot = parse_double(value);
  else if (key == "precoder") {
    cfg.precoder.clear();
    if (value == "equal" || value.empty()) return;
    const auto words = split_words(value);
    if (words.size() % 2 != 0) throw ConfigError("precoder needs an even count of reals (re im pairs)");
    for (std::size_t i = 0; i < words.size(); i += 2) {
      cfg.precoder.emplace_back(parse_double(words[i]), parse_double(words[i + 1]));
    }
  } else {
    throw ConfigError("unknown LinkConfig key '" + std::string(key) + "'");
  }
}

LinkConfig parse_link_config(std::string_view text, const LinkConfig& base) {
  LinkConfig cfg = base;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'name = value'");
    }
    try {
      apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

std::vector<std::string> config_keys(std::string_view text) {
  std::vector<std::string> keys;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (const auto eq = line.find('='); eq != std::string_view::npos) keys.emplace_back(trim(line.substr(0, eq)));
  }
  return keys;
}

LinkConfig load_link_config(const std::filesystem::path& path, const LinkConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_link_config(ss.str(), base);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string format_link_config(const LinkConfig& cfg) {
  std::ostringstream os;
  os << "d1 = " << format_double(cfg.d1) << '\n'
     << "d2 = " << format_double(cfg.d2) << '\n'
     << "x_irs = " << format_double(cfg.x_irs) << '\n'
     << "y_irs = " << format_double(cfg.y_irs) << '\n'
     << "phi_inc = " << format_double(cfg.phi_inc) << '\n'
     << "g_t = " << format_double(cfg.g_t) << '\n'
     << "g_r = " << format_double(cfg.g_r) << '\n'
     << "p_t = " << format_double(cfg.p_t) << '\n'
     << "sigma2 = " << format_double(cfg.sigma2) << '\n'
     << "n_elems = " << cfg.n_elems << '\n'
     << "n_tx = " << cfg.n_tx << '\n'
     << "bandwidth = " << format_double(cfg.bandwidth) << '\n'
     << "slot = " << format_double(cfg.slot) << '\n'
     << "precoder =";
  if (cfg.precoder.empty()) {
    os << " equal";
  } else {
    for (const auto& f : cfg.precoder) os << ' ' << format_double(f.real()) << ' ' << format_double(f.imag());
  }
  os << '\n';
  return os.str();
}

void save_link_config(const LinkConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config file " + path.string());
  out << format_link_config(cfg);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace irsec::channel
