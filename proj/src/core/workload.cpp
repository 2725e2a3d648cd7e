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

#include "workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "error.hpp"

namespace dare {

RequestTrace make_trace(std::uint32_t files, std::vector<FileId> requests,
                        std::vector<FileId> initial_cache, std::uint64_t seed) {
  require(files >= 1, "trace needs M >= 1");
  require(!requests.empty(), "trace needs T >= 1 requests");
  for (FileId id : requests) {
    require(id >= 1 && id <= files, "request id " + std::to_string(id) + " outside [1, " +
                                        std::to_string(files) + "]");
  }
  std::set<FileId> seen;
  for (FileId id : initial_cache) {
    require(id >= 1 && id <= files, "initial cache id " + std::to_string(id) + " out of range");
    require(seen.insert(id).second, "initial cache lists file " + std::to_string(id) + " twice");
  }
  RequestTrace trace;
  trace.files = files;
  trace.seed = seed;
  trace.requests = std::move(requests);
  trace.initial_cache = std::move(initial_cache);
  return trace;
}

FileSampler::FileSampler(const Catalog& catalog) {
  cumulative_.reserve(catalog.size());
  double acc = 0.0;
  for (double p : catalog.probabilities()) {
    acc += p;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

FileId FileSampler::draw(Rng& rng) const {
  const double u = rng.uniform01();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<FileId>(it - cumulative_.begin()) + 1;
}

RequestTrace generate_trace(const Catalog& catalog, std::uint64_t slots, std::uint64_t seed) {
  require(slots >= 1, "trace horizon T must be >= 1");
  FileSampler sampler(catalog);
  Rng rng(derive_seed(seed, Stream::Trace));
  std::vector<FileId> requests(slots);
  for (auto& r : requests) r = sampler.draw(rng);
  return make_trace(catalog.size(), std::move(requests), {}, seed);
}

std::string format_trace(const RequestTrace& trace) {
  std::string out = std::to_string(trace.horizon()) + " " + std::to_string(trace.files) + " " +
                    std::to_string(trace.seed) + "\n";
  for (FileId id : trace.requests) {
    out += std::to_string(id);
    out += '\n';
  }
  return out;
}

namespace {

template <typename T>
T parse_number(std::string_view token, const char* what, std::size_t line) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    fail(ErrorCode::InvalidArgument, "trace line " + std::to_string(line) + ": bad " + what +
                                         " '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

RequestTrace parse_trace(std::string_view text) {
  bool have_header = false;
  std::uint64_t horizon = 0;
  std::uint32_t files = 0;
  std::uint64_t seed = 0;
  std::vector<FileId> requests;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.front() == '#') continue;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (!have_header) {
      if (tokens.size() != 3) {
        fail(ErrorCode::InvalidArgument, "trace header must be 'T M seed'");
      }
      horizon = parse_number<std::uint64_t>(tokens[0], "T", line_no);
      files = parse_number<std::uint32_t>(tokens[1], "M", line_no);
      seed = parse_number<std::uint64_t>(tokens[2], "seed", line_no);
      have_header = true;
      requests.reserve(horizon);
      continue;
    }
    if (tokens.size() != 1) {
      fail(ErrorCode::InvalidArgument, "trace line " + std::to_string(line_no) +
                                           ": expected one file id");
    }
    requests.push_back(parse_number<FileId>(tokens[0], "file id", line_no));
  }
  require(have_header, "trace text has no header line");
  require(requests.size() == horizon, "trace header declares T=" + std::to_string(horizon) +
                                          " but has " + std::to_string(requests.size()) +
                                          " requests");
  return make_trace(files, std::move(requests), {}, seed);
}

ArrivalStream::ArrivalStream(const Catalog& catalog, std::uint64_t seed)
    : sampler_(catalog),
      total_rate_(catalog.total_rate()),
      rng_(derive_seed(seed, Stream::Arrivals)) {}

ArrivalEvent ArrivalStream::next() {
  clock_ += rng_.exponential(total_rate_);
  return {clock_, sampler_.draw(rng_)};
}

std::vector<ArrivalEvent> generate_arrivals(const Catalog& catalog, double horizon,
                                            std::uint64_t seed) {
  require(horizon > 0.0 && std::isfinite(horizon), "arrival horizon must be positive");
  ArrivalStream stream(catalog, seed);
  std::vector<ArrivalEvent> out;
  for (;;) {
    ArrivalEvent e = stream.next();
    if (e.time > horizon) break;
    out.push_back(e);
  }
  return out;
}

}  // namespace dare
