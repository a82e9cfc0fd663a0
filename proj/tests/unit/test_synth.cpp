// Copyright 2026 The aisport Authors
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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "aisport/codec.hpp"
#include "aisport/error.hpp"
#include "aisport/pipeline.hpp"
#include "aisport/synth.hpp"

using namespace aisport;
using namespace aisport::synth;
using Hours = std::chrono::hours;
using std::chrono::minutes;

namespace {

Scenario small_traffic(std::uint64_t seed, double error_rate) {
  Scenario s;
  s.seed = seed;
  s.start = from_unix(1704067200);
  s.port = builtin_port();
  s.error_rate = error_rate;
  PoissonTraffic t;
  t.per_day = 12;
  t.days = 1;
  s.traffic = t;
  return s;
}

}  // namespace

TEST(Synth, Deterministic) {
  const auto a = generate(small_traffic(5, 0.2));
  const auto b = generate(small_traffic(5, 0.2));
  EXPECT_EQ(a.nmea, b.nmea);
  EXPECT_EQ(truth_jsonl(a.truth), truth_jsonl(b.truth));
  EXPECT_NE(generate(small_traffic(6, 0.2)).nmea, a.nmea);
}

TEST(Synth, EverySentenceParses) {
  const auto out = generate(small_traffic(7, 0.0));
  ASSERT_FALSE(out.nmea.empty());
  for (const auto& line : out.nmea) EXPECT_NO_THROW(codec::parse_sentence(line)) << line;
  const auto d = pipeline::decode_lines(out.nmea);
  EXPECT_EQ(d.errors.size(), 0u);
  EXPECT_EQ(d.summary.positions, out.truth.messages.size());
}

TEST(Synth, PhasesTileEachVisit) {
  const auto s = small_traffic(8, 0.0);
  const auto out = generate(s);
  struct Span {
    Duration total{0};
    Timestamp first = Timestamp::max();
    Timestamp last = Timestamp::min();
  };
  std::map<std::pair<std::uint32_t, int>, Span> spans;
  for (const auto& p : out.truth.phases) {
    EXPECT_GE(p.end, p.start);
    auto& sp = spans[{p.mmsi, p.visit}];
    sp.total += p.end - p.start;
    sp.first = std::min(sp.first, p.start);
    sp.last = std::max(sp.last, p.end);
  }
  ASSERT_FALSE(out.truth.visits.empty());
  for (const auto& v : out.truth.visits) {
    const auto& sp = spans[{v.mmsi, v.visit}];
    EXPECT_EQ(sp.total, sp.last - sp.first) << v.mmsi << "/" << v.visit;
    EXPECT_EQ(v.entry, sp.first);
    // The last report precedes the end of the final leg by at most one cadence.
    EXPECT_LE(v.exit, sp.last);
    EXPECT_LE(sp.last - v.exit, s.underway_cadence);
    const Duration moored = v.berth_arrival ? *v.berth_departure - *v.berth_arrival : Duration{0};
    EXPECT_EQ(v.underway + v.anchorage_wait + moored, sp.total);
  }
}

TEST(Synth, TruthMatchesReportedAtZeroErrorRate) {
  const auto out = generate(small_traffic(9, 0.0));
  for (const auto& m : out.truth.messages) EXPECT_EQ(m.true_navstat, m.reported_navstat);
  const auto noisy = generate(small_traffic(9, 0.3));
  std::size_t wrong = 0;
  for (const auto& m : noisy.truth.messages) wrong += m.true_navstat != m.reported_navstat ? 1 : 0;
  const double rate = static_cast<double>(wrong) / static_cast<double>(noisy.truth.messages.size());
  EXPECT_NEAR(rate, 0.3, 0.03);
}

TEST(Synth, CleanInputValidatesUnchanged) {
  const auto out = generate(small_traffic(10, 0.0));
  const auto d = pipeline::decode_lines(out.nmea);
  validate::ValidatorConfig cfg;
  cfg.hysteresis_msgs = 1;
  const auto v = pipeline::run_validate(d.records, builtin_port(), cfg);
  EXPECT_DOUBLE_EQ(v.summary.agreement_rate(), 1.0);
}

TEST(Synth, ScenarioErrors) {
  for (const char* bad : {"", "[]", "{\"seed\":\"x\"}", R"({"port":"/no/such/port.geojson"})",
                          R"({"vessels":[{"mmsi":1,"visits":[{"entry":"yesterday"}]}]})",
                          R"({"vessels":[{"mmsi":1,"visits":[{"entry":"2024-01-01T00:00:00Z","anchorages_h":["x"]}]}]})",
                          R"({"error_rate":1.5})",
                          R"({"outages":[{"start":"2024-01-02T00:00:00Z","end":"2024-01-01T00:00:00Z"}]})"}) {
    try {
      parse_scenario(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidScenario) << bad;
    }
  }
}

TEST(Synth, ParsedScenarioRuns) {
  const auto s = parse_scenario(R"({
    "seed": 3, "start": "2024-03-01T00:00:00Z", "port": "builtin",
    "vessels": [{"mmsi": 211000001, "ship_type": 70, "name": "ALPHA",
                 "visits": [{"entry": "2024-03-01T02:00:00Z", "anchorages_h": [4], "moored_h": 10}]}]
  })");
  const auto out = generate(s);
  ASSERT_EQ(out.truth.visits.size(), 1u);
  const auto& v = out.truth.visits[0];
  EXPECT_EQ(v.ship_type, 70);
  EXPECT_EQ(v.anchorage_wait, Hours{4});
  ASSERT_TRUE(v.berth_arrival && v.berth_departure);
  EXPECT_EQ(*v.berth_departure - *v.berth_arrival, Hours{10});
}

TEST(Synth, FerrySkipDoublesStay) {
  Scenario s;
  s.start = from_unix(1704067200);
  s.port = builtin_port();
  FerryService f;
  f.mmsi = 237000001;
  f.days = 5;
  f.skip = {2};
  s.ferries = {f};
  const auto out = generate(s);
  std::vector<Duration> stays;
  for (const auto& v : out.truth.visits) {
    ASSERT_TRUE(v.berth_arrival && v.berth_departure);
    stays.push_back(*v.berth_departure - *v.berth_arrival);
  }
  ASSERT_EQ(stays.size(), 4u);
  const Duration modal = Hours{14} + minutes{10};  // 14:10 to 04:20 next day
  std::size_t long_stays = 0;
  for (const auto d : stays) {
    if (d == modal + Hours{24}) {
      ++long_stays;
    } else {
      EXPECT_EQ(d, modal);
    }
  }
  EXPECT_EQ(long_stays, 1u);
}
