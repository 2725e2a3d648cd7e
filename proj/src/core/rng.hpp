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

// Portable pseudo-random streams. Every draw is defined here in terms of
// 64-bit integer arithmetic so that sequences are identical across compilers
// and standard libraries (std::*_distribution is not).
//
//   seeding:     SplitMix64 (Steele, Lea, Flood 2014)
//   generator:   xoshiro256** 1.0 (Blackman, Vigna 2018)
//   uniform01:   top 53 bits * 2^-53, in [0, 1)
//   exponential: -log(1 - u) / rate
//   index:       Lemire multiply-shift with rejection, unbiased

#include <array>
#include <cmath>
#include <cstdint>

namespace dare {

/// Purposes that get their own substream of a root seed.
enum class Stream : std::uint64_t {
  Trace = 1,
  Arrivals = 2,
  Retention = 3,
  Eviction = 4,
  Instance = 5,
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// derive_seed(root, purpose, index) = SplitMix64 output after absorbing the
/// three words in order. Distinct (purpose, index) pairs give unrelated seeds.
inline std::uint64_t derive_seed(std::uint64_t root, Stream purpose,
                                 std::uint64_t index = 0) {
  std::uint64_t state = root;
  std::uint64_t a = splitmix64(state);
  state = a ^ (static_cast<std::uint64_t>(purpose) * 0xD1B54A32D192ED03ULL);
  std::uint64_t b = splitmix64(state);
  state = b ^ (index * 0x8CB92BA72F3D8DD7ULL);
  return splitmix64(state);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t index(std::uint64_t n) {
    __extension__ using u128 = unsigned __int128;
    u128 m = static_cast<u128>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<u128>(next()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace dare
