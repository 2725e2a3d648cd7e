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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "error.hpp"
#include "model.hpp"
#include "workload.hpp"

using namespace dare;

TEST_SUITE("workload") {
  TEST_CASE("single-file trace") {
    const RequestTrace t = generate_trace(Catalog::zipf(1, 0.7), 5, 3);
    CHECK(t.requests == std::vector<FileId>{1, 1, 1, 1, 1});
    CHECK(t.horizon() == 5);
    CHECK(t.seed == 3);
  }

  TEST_CASE("two equally popular files split evenly") {
    const RequestTrace t = generate_trace(Catalog::zipf(2, 0.0), 100000, 17);
    double ones = 0;
    for (FileId f : t.requests) ones += f == 1;
    CHECK(std::abs(ones / 1e5 - 0.5) <= 0.005);
  }

  TEST_CASE("same seed gives the same trace, different seeds differ") {
    const Catalog c = Catalog::zipf(30, 0.8);
    CHECK(generate_trace(c, 500, 9).requests == generate_trace(c, 500, 9).requests);
    CHECK(generate_trace(c, 500, 9).requests != generate_trace(c, 500, 10).requests);
  }

  TEST_CASE("zero-length trace is rejected") {
    CHECK_THROWS_AS(generate_trace(Catalog::zipf(3, 1.0), 0, 1), Error);
  }

  TEST_CASE("chi-square goodness of fit at 99 percent") {
    const Catalog c = Catalog::zipf(10, 0.85);
    const RequestTrace t = generate_trace(c, 100000, 23);
    std::vector<double> counts(10, 0.0);
    for (FileId f : t.requests) counts[f - 1] += 1;
    double chi2 = 0.0;
    for (FileId m = 1; m <= 10; ++m) {
      const double expected = 1e5 * c.probability(m);
      chi2 += (counts[m - 1] - expected) * (counts[m - 1] - expected) / expected;
    }
    CHECK(chi2 < 21.666);  // chi-square(9) 0.99 quantile
  }

  TEST_CASE("arrival count for one unit-rate file") {
    const auto events = generate_arrivals(Catalog::zipf(1, 0.0), 1e4, 5);
    CHECK(std::abs(static_cast<double>(events.size()) - 1e4) <= 300);
  }

  TEST_CASE("arrival marks follow the rates") {
    const std::vector<double> rates{2.0, 1.0};
    const auto events = generate_arrivals(Catalog::from_rates(rates), 1e4, 6);
    double first = 0;
    for (const auto& e : events) first += e.file == 1;
    CHECK(std::abs(first / static_cast<double>(events.size()) - 2.0 / 3.0) <= 0.015);
  }

  TEST_CASE("arrivals are strictly increasing and exponential per file") {
    const Catalog c = Catalog::zipf(4, 1.0);
    const auto events = generate_arrivals(c, 2e4, 8);
    for (std::size_t i = 1; i < events.size(); ++i) CHECK(events[i].time > events[i - 1].time);
    CHECK(events.back().time <= 2e4);
    for (FileId m = 1; m <= 4; ++m) {
      double last = 0.0;
      double sum = 0.0;
      double n = 0.0;
      for (const auto& e : events) {
        if (e.file != m) continue;
        sum += e.time - last;
        last = e.time;
        n += 1;
      }
      const double mean = sum / n;
      const double sigma = (1.0 / c.rate(m)) / std::sqrt(n);
      CHECK(std::abs(mean - 1.0 / c.rate(m)) < 3 * sigma);
    }
  }

  TEST_CASE("arrival streams are reproducible") {
    const Catalog c = Catalog::zipf(20, 0.6);
    const auto a = generate_arrivals(c, 100.0, 99);
    const auto b = generate_arrivals(c, 100.0, 99);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].time == b[i].time);
      CHECK(a[i].file == b[i].file);
    }
    CHECK_THROWS_AS(generate_arrivals(c, 0.0, 1), Error);
  }

  TEST_CASE("trace text round trip") {
    const RequestTrace t = generate_trace(Catalog::zipf(7, 0.9), 40, 1234);
    const std::string text = format_trace(t);
    CHECK(text.rfind("40 7 1234\n", 0) == 0);
    const RequestTrace back = parse_trace("# comment\n" + text);
    CHECK(back.requests == t.requests);
    CHECK(back.files == 7);
    CHECK(back.seed == 1234);
  }

  TEST_CASE("malformed trace text") {
    CHECK_THROWS_AS(parse_trace(""), Error);
    CHECK_THROWS_AS(parse_trace("3 2 0\n1\n2\n"), Error);
    CHECK_THROWS_AS(parse_trace("2 2 0\n1\n3\n"), Error);
    CHECK_THROWS_AS(parse_trace("2 2 0\n1\nx\n"), Error);
  }

  TEST_CASE("explicit traces are validated") {
    CHECK_NOTHROW(make_trace(5, {1, 5, 3}, {1, 2, 3}));
    CHECK_THROWS_AS(make_trace(5, {1, 6}), Error);
    CHECK_THROWS_AS(make_trace(5, {0}), Error);
    CHECK_THROWS_AS(make_trace(5, {1}, {2, 2}), Error);
    CHECK_THROWS_AS(make_trace(5, {}), Error);
  }
}
