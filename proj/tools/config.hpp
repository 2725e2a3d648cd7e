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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace darecli {

/// Configuration or usage problem; `field` names the offending key when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct KeySpec {
  const char* key;
  const char* type;
  const char* default_value;
  const char* help;
};

/// Every accepted key, in display order.
const std::vector<KeySpec>& key_schema();

/// Text listing every key, for --help.
std::string describe_keys();

/// Flat section.key -> value store. Values from set() replace earlier ones,
/// so loading the file first and applying flags afterwards lets flags win.
class Config {
 public:
  /// INI-style text: "[section]" headers, "key = value" lines, '#' or ';'
  /// comments (whole-line, or inline after whitespace). Dotted
  /// "section.key = value" lines are accepted anywhere.
  void load_text(const std::string& text, const std::string& origin);
  void load_file(const std::string& path);
  /// "section.key=value".
  void apply_assignment(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  /// Explicit value, else the schema default, else nullopt.
  std::optional<std::string> raw(const std::string& key) const;
  std::string str(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  std::uint32_t u32(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::uint32_t> ids(const std::string& key) const;
  /// Capacity: a positive integer, or 0 for "inf".
  std::uint32_t capacity(const std::string& key) const;

  /// Explicitly set keys as "# key = value" lines, sorted by key.
  std::string echo() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::vector<std::string> split_list(const std::string& value);

}  // namespace darecli
