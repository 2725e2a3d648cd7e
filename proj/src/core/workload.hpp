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
#include <string>
#include <string_view>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace dare {

/// Slotted request string: requests[t-1] is the file requested in slot t.
struct RequestTrace {
  std::uint32_t files = 0;
  std::uint64_t seed = 0;
  std::vector<FileId> requests;
  /// Files resident at slot 0; treated as written at slot 0.
  std::vector<FileId> initial_cache;

  std::uint64_t horizon() const { return requests.size(); }
  FileId at(std::uint64_t slot) const { return requests[slot - 1]; }
};

/// Validates ids against `files` and checks that the initial cache has no
/// duplicates.
RequestTrace make_trace(std::uint32_t files, std::vector<FileId> requests,
                        std::vector<FileId> initial_cache = {}, std::uint64_t seed = 0);

/// IRM trace: each slot draws file m independently with probability p_m.
RequestTrace generate_trace(const Catalog& catalog, std::uint64_t slots, std::uint64_t seed);

/// Text form: optional '#' comment lines, a header line "T M seed", then one
/// file id per line.
std::string format_trace(const RequestTrace& trace);
RequestTrace parse_trace(std::string_view text);

struct ArrivalEvent {
  double time = 0.0;
  FileId file = 0;
};

/// Inverse-CDF sampler over a catalog's request probabilities.
class FileSampler {
 public:
  explicit FileSampler(const Catalog& catalog);
  FileId draw(Rng& rng) const;

 private:
  std::vector<double> cumulative_;
};

/// Superposition of per-file Poisson processes, generated as one Poisson
/// process of rate sum(lambda) with marks drawn by probability.
class ArrivalStream {
 public:
  ArrivalStream(const Catalog& catalog, std::uint64_t seed);
  ArrivalEvent next();

 private:
  FileSampler sampler_;
  double total_rate_;
  Rng rng_;
  double clock_ = 0.0;
};

std::vector<ArrivalEvent> generate_arrivals(const Catalog& catalog, double horizon,
                                            std::uint64_t seed);

}  // namespace dare
