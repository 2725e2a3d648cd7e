// Copyright 2026 The darecache Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>
#include <type_traits>

namespace darecli {

const std::vector<KeySpec>& key_schema() {
  static const std::vector<KeySpec> schema = {
      {"catalog.files", "uint", "200", "number of files M"},
      {"catalog.alpha", "real", "0.95", "Zipf exponent; rates are 1/m^alpha"},
      {"catalog.rates", "list", "", "explicit arrival rates; overrides files and alpha"},
      {"catalog.delays", "list", "1", "one uniform delay or one per file"},
      {"catalog.normalize", "bool", "false", "rescale rates to sum to one"},
      {"damage.coefficients", "list", "0,1", "a_1..a_n of f(x) = sum a_k x^k"},
      {"workload.seed", "uint", "", "root seed; required by stochastic commands"},
      {"workload.slots", "uint", "20000", "offline trace length T"},
      {"workload.events", "uint", "100000", "online request count"},
      {"workload.trace", "list", "", "literal request string of file ids"},
      {"workload.trace_file", "path", "", "trace file to replay ('-' for stdin)"},
      {"workload.initial_cache", "list", "", "files resident at slot 0"},
      {"cache.capacity", "uint|inf", "inf", "cache size B"},
      {"policy.name", "name", "fif", "offline policy: lru fifo rnd fif dare dare* fif* lru*"},
      {"policy.rule", "name", "dare-delta", "online rule: dare-delta lru fifo rnd"},
      {"policy.delta", "real", "", "delay budget (equals the miss budget for unit delays)"},
      {"policy.tau", "real", "", "deterministic retention"},
      {"policy.mu", "list", "", "retention rates, +inf or 'inf' for never-write, or 'lambda'"},
      {"policy.tau_grid", "list", "", "retention grid for sweep; default 0.25..20 by 0.25"},
      {"policy.replications", "uint", "5", "seeds per sweep point"},
      {"policy.cost_mode", "name", "delay-plus-damage",
       "per-miss cost: delay-plus-damage damage-only delay-only"},
      {"policy.tolerance", "real", "1e-10", "retention solver tolerance"},
      {"oracle.kind", "name", "mdp", "mdp (eviction rule check) or offline (brute force)"},
      {"oracle.horizon", "uint", "6", "value-iteration steps"},
      {"oracle.costs", "list", "", "per-file miss costs; default from the cost model"},
      {"experiment.id", "name", "",
       "offline-tradeoff delta-sweep online-compare star-tradeoff competitive-ratio"},
      {"experiment.capacities", "list", "", "capacity grid"},
      {"experiment.alphas", "list", "", "Zipf exponent grid"},
      {"experiment.files", "list", "", "catalog sizes"},
      {"experiment.slots", "uint", "", "offline horizon"},
      {"experiment.events", "uint", "", "online request count"},
      {"experiment.epsilons", "list", "", "delay budgets for delta-sweep"},
      {"experiment.degrees", "list", "", "monomial degrees for delta-sweep"},
      {"experiment.delta", "real", "", "delay budget for online-compare"},
      {"experiment.tau_grid", "list", "", "baseline retention grid"},
      {"experiment.policies", "list", "", "online-compare rules"},
      {"experiment.replications", "uint", "", "replications per cell"},
      {"experiment.cost_mode", "name", "", "per-miss cost mode"},
      {"experiment.damage", "list", "", "damage coefficients"},
      {"experiment.threads", "uint", "", "worker threads (0 = hardware)"},
      {"output.path", "path", "-", "output file ('-' for stdout)"},
      {"output.format", "name", "csv", "csv or json (json: online only)"},
      {"output.plot_data", "bool", "false", "experiments: long-format figure data"},
      {"output.event_log", "path", "", "online: write the event log CSV here"},
  };
  return schema;
}

namespace {

const KeySpec* find_key(const std::string& key) {
  for (const auto& k : key_schema()) {
    if (key == k.key) return &k;
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const std::string t = trim(text);
  const char* end = t.data() + t.size();
  auto [p, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || p != end) {
    throw ConfigError(key, key + ": expected " +
                               (std::is_floating_point_v<T> ? "a number" : "a non-negative integer") +
                               ", got '" + text + "'");
  }
  return v;
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  return parse_number<double>(key, t);
}

bool check_flag(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, key + ": expected true or false, got '" + text + "'");
}

// 0 stands for an unbounded cache.
std::uint32_t check_capacity(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  if (v == "inf" || v == "infinite") return 0;
  const auto b = parse_number<std::uint32_t>(key, v);
  if (b == 0) throw ConfigError(key, key + ": must be >= 1 or 'inf'");
  return b;
}

}  // namespace

std::string describe_keys() {
  std::ostringstream out;
  out << "Configuration keys (file sections or --set section.key=value):\n";
  for (const auto& k : key_schema()) {
    out << "  " << k.key << " <" << k.type << ">";
    if (*k.default_value) out << " [default " << k.default_value << "]";
    out << "\n      " << k.help << "\n";
  }
  return out.str();
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  for (char c : value + ",") {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  return out;
}

void Config::load_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::string section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string where = origin + ":" + std::to_string(number);
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("", where + ": malformed section header '" + t + "'");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("", where + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    if (key.find('.') == std::string::npos) {
      if (section.empty()) throw ConfigError(key, where + ": key '" + key + "' outside a section");
      key = section + "." + key;
    }
    std::string value = t.substr(eq + 1);
    // Inline comment: '#' or ';' after whitespace.
    for (std::size_t i = 1; i < value.size(); ++i) {
      if ((value[i] == '#' || value[i] == ';') && (value[i - 1] == ' ' || value[i - 1] == '\t')) {
        value.resize(i);
        break;
      }
    }
    try {
      set(key, trim(value));
    } catch (const ConfigError& e) {
      throw ConfigError(e.field(), where + ": " + e.what());
    }
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  load_text(text.str(), path);
}

void Config::apply_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("", "--set expects section.key=value, got '" + assignment + "'");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) {
  const KeySpec* spec = find_key(key);
  if (spec == nullptr) throw ConfigError(key, "unknown config key '" + key + "'");
  // Scalars are checked here so file errors carry their line; lists and names
  // are parsed by the command that uses them.
  const std::string_view type = spec->type;
  if (type == "uint") {
    parse_number<std::uint64_t>(key, value);
  } else if (type == "real") {
    parse_real(key, value);
  } else if (type == "bool") {
    check_flag(key, value);
  } else if (type == "uint|inf") {
    check_capacity(key, value);
  }
  values_[key] = value;
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::optional<std::string> Config::raw(const std::string& key) const {
  const KeySpec* spec = find_key(key);
  if (spec == nullptr) throw ConfigError(key, "unknown config key '" + key + "'");
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  if (*spec->default_value) return std::string(spec->default_value);
  return std::nullopt;
}

std::string Config::str(const std::string& key) const {
  auto v = raw(key);
  if (!v) throw ConfigError(key, key + " is required");
  return *v;
}

std::uint64_t Config::u64(const std::string& key) const {
  return parse_number<std::uint64_t>(key, str(key));
}

std::uint32_t Config::u32(const std::string& key) const {
  return parse_number<std::uint32_t>(key, str(key));
}

double Config::real(const std::string& key) const { return parse_real(key, str(key)); }

bool Config::flag(const std::string& key) const { return check_flag(key, str(key)); }

std::vector<double> Config::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(str(key))) out.push_back(parse_real(key, item));
  return out;
}

std::vector<std::uint32_t> Config::ids(const std::string& key) const {
  std::vector<std::uint32_t> out;
  for (const auto& item : split_list(str(key))) {
    out.push_back(parse_number<std::uint32_t>(key, item));
  }
  return out;
}

std::uint32_t Config::capacity(const std::string& key) const {
  return check_capacity(key, str(key));
}

std::string Config::echo() const {
  std::string out;
  for (const auto& [k, v] : values_) out += "# " + k + " = " + v + "\n";
  return out;
}

}  // namespace darecli
