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

#include <charconv>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace dare {

/// Shortest round-trip decimal form, locale independent; "inf"/"nan" for
/// non-finite values.
inline std::string csv_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename Int>
std::string csv_int(Int v) {
  return std::to_string(v);
}

/// Comma separated, LF terminated, header first.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : width_(header.size()) {
    append(header);
  }

  void row(const std::vector<std::string>& cells) { append(cells); }

  const std::string& str() const { return out_; }
  std::size_t width() const { return width_; }

 private:
  void append(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        out_ += '"';
        for (char ch : c) {
          if (ch == '"') out_ += '"';
          out_ += ch;
        }
        out_ += '"';
      } else {
        out_ += c;
      }
    }
    out_ += '\n';
  }

  std::size_t width_;
  std::string out_;
};

}  // namespace dare
