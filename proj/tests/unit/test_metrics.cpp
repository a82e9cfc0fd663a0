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
#include <cmath>
#include <map>
#include <random>

#include "aisport/error.hpp"
#include "aisport/metrics.hpp"
#include "fixtures.hpp"

using namespace aisport;
using namespace aisport::metrics;
using voyage::Phase;
using voyage::PhaseKind;
using Hours = std::chrono::hours;
using std::chrono::minutes;

namespace {

Timestamp at(const char* iso) { return *parse_iso(iso); }
Date day(const char* ymd) { return *parse_date(ymd); }

Phase phase(PhaseKind kind, Timestamp start, Timestamp end, geo::LatLon where = {37.94, 23.62},
            std::optional<double> sog = std::nullopt, std::size_t n = 10) {
  Phase p;
  p.kind = kind;
  p.start = start;
  p.end = end;
  p.location = where;
  p.mean_sog = sog;
  p.messages = n;
  p.sog_samples = sog ? n : 0;
  return p;
}

Voyage voyage_of(std::vector<Phase> phases, std::uint32_t mmsi = 1, std::optional<int> type = std::nullopt) {
  Voyage v;
  v.mmsi = mmsi;
  v.phases = std::move(phases);
  v.arrival = v.phases.front().start;
  v.departure = v.phases.back().end;
  v.ship_type = type;
  return v;
}

Voyage arriving(const char* iso, int ship_type) {
  const Timestamp t = at(iso);
  return voyage_of({phase(PhaseKind::Underway, t, t + Hours{1})}, 1, ship_type);
}

}  // namespace

TEST(Category, MappingIsTotal) {
  for (int t = 0; t <= 99; ++t) {
    const auto c = categorize(t);
    const bool cargo = t >= 70 && t <= 79;
    const bool tanker = t >= 80 && t <= 89;
    const bool passenger = (t >= 40 && t <= 49) || (t >= 60 && t <= 69);
    EXPECT_EQ(c == VesselCategory::Cargo, cargo) << t;
    EXPECT_EQ(c == VesselCategory::Tanker, tanker) << t;
    EXPECT_EQ(c == VesselCategory::Passenger, passenger) << t;
    EXPECT_EQ(c == VesselCategory::Other, !cargo && !tanker && !passenger) << t;
  }
  EXPECT_EQ(categorize(std::nullopt), VesselCategory::Other);
  for (const auto c : kAllCategories) EXPECT_EQ(parse_category(to_string(c)), c);
}

TEST(Turnaround, DirectSubtraction) {
  const auto v = voyage_of({phase(PhaseKind::Underway, at("2019-09-12T13:50:00Z"), at("2019-09-12T14:28:00Z")),
                            phase(PhaseKind::Moored, at("2019-09-12T14:28:00Z"), at("2019-09-13T04:25:00Z")),
                            phase(PhaseKind::Underway, at("2019-09-13T04:25:00Z"), at("2019-09-13T05:00:00Z"))});
  const auto t = turnaround(v);
  ASSERT_TRUE(t);
  EXPECT_EQ(t->turnaround(), Hours{13} + minutes{57});
  EXPECT_EQ(t->turnaround(), t->departure - t->arrival);
  EXPECT_EQ(format_days_hm(t->turnaround()), "0 days 13:57");
}

TEST(Turnaround, NoMooringAndZeroLength) {
  EXPECT_FALSE(turnaround(voyage_of({phase(PhaseKind::Underway, at("2020-01-01T00:00:00Z"), at("2020-01-01T02:00:00Z"))})));
  const Timestamp t = at("2020-01-01T01:00:00Z");
  const auto z = turnaround(voyage_of({phase(PhaseKind::Underway, t - Hours{1}, t), phase(PhaseKind::Moored, t, t)}));
  ASSERT_TRUE(z);
  EXPECT_EQ(z->turnaround(), Duration{0});
}

TEST(Turnaround, ShortShiftsAtOneTerminalMerge) {
  const Timestamp t = at("2020-01-01T00:00:00Z");
  const geo::LatLon berth{37.94, 23.62};
  const geo::LatLon far{37.99, 23.62};
  const auto merged = voyage_of({phase(PhaseKind::Underway, t, t + Hours{1}),
                                 phase(PhaseKind::Moored, t + Hours{1}, t + Hours{5}, berth),
                                 phase(PhaseKind::Underway, t + Hours{5}, t + Hours{5} + minutes{20}),
                                 phase(PhaseKind::Moored, t + Hours{5} + minutes{20}, t + Hours{9}, berth),
                                 phase(PhaseKind::Underway, t + Hours{9}, t + Hours{10})});
  EXPECT_EQ(turnaround(merged)->turnaround(), Hours{8});

  auto moved = merged;
  moved.phases[3].location = far;
  EXPECT_EQ(turnaround(moved)->turnaround(), Hours{4});

  auto long_gap = merged;
  long_gap.phases[2].end = t + Hours{7};
  long_gap.phases[3].start = t + Hours{7};
  EXPECT_EQ(turnaround(long_gap)->turnaround(), Hours{4});
}

TEST(Turnaround, PolygonsDecideSameTerminal) {
  const Timestamp t = at("2020-01-01T00:00:00Z");
  geo::PortGeometry port{"p",
                         {fixture::box("A", geo::AreaKind::Terminal, 0, 0, 0.001, 0.001),
                          fixture::box("B", geo::AreaKind::Terminal, 0, 0.002, 0.001, 0.003)}};
  const auto v = voyage_of({phase(PhaseKind::Moored, t, t + Hours{2}, {0.0005, 0.0005}),
                            phase(PhaseKind::Underway, t + Hours{2}, t + Hours{2} + minutes{10}),
                            phase(PhaseKind::Moored, t + Hours{2} + minutes{10}, t + Hours{4}, {0.0005, 0.0025})});
  // Without polygons the berths are ~220 m apart and merge; with them they are two terminals.
  EXPECT_EQ(turnaround(v)->turnaround(), Hours{4});
  const auto r = turnaround(v, &port);
  EXPECT_EQ(r->turnaround(), Hours{2});
  EXPECT_EQ(r->terminal_name, "A");
}

TEST(Anchorage, WaitBeforeFirstBerth) {
  const Timestamp t = at("2020-01-01T00:00:00Z");
  const auto v = voyage_of({phase(PhaseKind::Underway, t, t + Hours{1}),
                            phase(PhaseKind::Anchored, t + Hours{1}, t + Hours{5}),
                            phase(PhaseKind::Underway, t + Hours{5}, t + Hours{6}),
                            phase(PhaseKind::Moored, t + Hours{6}, t + Hours{9}),
                            phase(PhaseKind::Anchored, t + Hours{9}, t + Hours{12})});
  EXPECT_EQ(anchorage_wait(v), Hours{4});
  const auto direct = voyage_of({phase(PhaseKind::Underway, t, t + Hours{1}), phase(PhaseKind::Moored, t + Hours{1}, t + Hours{3})});
  EXPECT_EQ(anchorage_wait(direct), Duration{0});
  const auto two = voyage_of({phase(PhaseKind::Anchored, t, t + Hours{2}), phase(PhaseKind::Underway, t + Hours{2}, t + Hours{3}),
                              phase(PhaseKind::Anchored, t + Hours{3}, t + Hours{4}), phase(PhaseKind::Moored, t + Hours{4}, t + Hours{5})});
  EXPECT_EQ(anchorage_wait(two), Hours{3});
}

TEST(Movement, Stats) {
  const Timestamp t = at("2020-01-01T00:00:00Z");
  const auto one = voyage_of({phase(PhaseKind::Underway, t, t + minutes{30}, {}, 10.0)});
  EXPECT_EQ(movement_stats(one), (MovementStats{minutes{30}, 10.0}));
  const auto none = voyage_of({phase(PhaseKind::Moored, t, t + Hours{3})});
  EXPECT_EQ(movement_stats(none), (MovementStats{Duration{0}, std::nullopt}));
  const auto mixed = voyage_of({phase(PhaseKind::Underway, t, t + Hours{1}, {}, 10.0, 30),
                                phase(PhaseKind::Moored, t + Hours{1}, t + Hours{3}),
                                phase(PhaseKind::Underway, t + Hours{3}, t + Hours{4}, {}, 6.0, 10)});
  const auto s = movement_stats(mixed);
  EXPECT_EQ(s.underway, Hours{2});
  EXPECT_DOUBLE_EQ(*s.mean_sog, (10.0 * 30 + 6.0 * 10) / 40);
  // With full phase coverage the three durations add up to the voyage.
  const auto full = voyage_of({phase(PhaseKind::Underway, t, t + Hours{1}), phase(PhaseKind::Anchored, t + Hours{1}, t + Hours{4}),
                               phase(PhaseKind::Underway, t + Hours{4}, t + Hours{5}), phase(PhaseKind::Moored, t + Hours{5}, t + Hours{9}),
                               phase(PhaseKind::Underway, t + Hours{9}, t + Hours{10})});
  EXPECT_EQ(turnaround(full)->turnaround() + anchorage_wait(full) + movement_stats(full).underway, full.duration());
}

TEST(Daily, CountsByCategory) {
  EXPECT_TRUE(daily_arrivals({}).rows.empty());
  const auto zeros = daily_arrivals({}, day("2020-01-01"), day("2020-01-03"));
  EXPECT_EQ(zeros.rows.size(), 3u);
  for (const auto& [d, row] : zeros.rows) EXPECT_EQ(row, (CategoryCounts{0, 0, 0, 0}));

  std::vector<Voyage> vs{arriving("2020-01-02T01:00:00Z", 70), arriving("2020-01-02T05:00:00Z", 75),
                         arriving("2020-01-02T23:59:59Z", 79), arriving("2020-01-02T12:00:00Z", 84),
                         arriving("2020-01-03T00:00:00Z", 30)};
  const auto t = daily_arrivals(vs);
  EXPECT_EQ(t.rows.at(day("2020-01-02")), (CategoryCounts{3, 1, 0, 0}));
  EXPECT_EQ(t.count(day("2020-01-03"), VesselCategory::Other), 1u);
  EXPECT_EQ(t.total(day("2020-01-02")), 4u);

  // Ship types from a separate map override the voyage field.
  const auto mapped = daily_arrivals(vs, std::map<std::uint32_t, int>{{1, 60}});
  EXPECT_EQ(mapped.rows.at(day("2020-01-02")), (CategoryCounts{0, 0, 4, 0}));
}

TEST(GroundTruth, CountAndEventModes) {
  const auto c = parse_ground_truth_csv("date,category,arrivals\n2020-01-01,cargo,3\n2020-01-01,tanker,1\n2020-01-02,cargo,0\n");
  EXPECT_EQ(c.table.count(day("2020-01-01"), VesselCategory::Cargo), 3u);
  EXPECT_EQ(c.categories, (std::vector<VesselCategory>{VesselCategory::Cargo, VesselCategory::Tanker}));

  const auto e = parse_ground_truth_csv(
      "timestamp,mmsi,category\n2020-01-01T01:30:00Z,1,passenger\n2020-01-01T23:00:00Z,2,passenger\n", Hours{2});
  // Local 01:30 at UTC+2 is the previous UTC day.
  EXPECT_EQ(e.table.count(day("2019-12-31"), VesselCategory::Passenger), 1u);
  EXPECT_EQ(e.table.count(day("2020-01-01"), VesselCategory::Passenger), 1u);
}

TEST(GroundTruth, Malformed) {
  for (const char* text : {"", "foo,bar\n", "date,category,arrivals\n2020-13-01,cargo,1\n",
                           "date,category,arrivals\n2020-01-01,boats,1\n", "date,category,arrivals\n2020-01-01,cargo,-1\n",
                           "date,category,arrivals\n2020-01-01,cargo\n", "timestamp,mmsi,category\nyesterday,1,cargo\n"}) {
    try {
      parse_ground_truth_csv(text);
      ADD_FAILURE() << text;
    } catch (const Error& err) {
      EXPECT_EQ(err.code(), ErrorCode::MalformedGroundTruth) << text;
    }
  }
}

TEST(Mae, BasicProperties) {
  DailyTable t;
  t.rows[day("2020-01-01")] = {3, 1, 2, 0};
  t.rows[day("2020-01-02")] = {5, 0, 1, 1};
  GroundTruthCalls truth{t, {kAllCategories.begin(), kAllCategories.end()}};
  EXPECT_EQ(arrivals_mae(t, truth).macro, 0.0);

  DailyTable off = t;
  for (auto& [d, row] : off.rows) row[0] += 2;
  const auto r = arrivals_mae(off, truth);
  EXPECT_EQ(r.per_category.at(VesselCategory::Cargo), 2.0);
  EXPECT_EQ(r.per_category.at(VesselCategory::Tanker), 0.0);
  EXPECT_EQ(r.macro, 0.5);

  DailyTable elsewhere;
  elsewhere.rows[day("2021-01-01")] = {1, 1, 1, 1};
  EXPECT_THROW(arrivals_mae(elsewhere, truth), Error);
  EXPECT_THROW(arrivals_mae(t, truth, {day("2020-01-01"), day("2020-01-02")}), Error);
}

TEST(Mae, SymmetricAndMatchesRecomputation) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> n(0, 60);
  for (int trial = 0; trial < 20; ++trial) {
    DailyTable a, b;
    for (int d = 0; d < 30; ++d) {
      const Date date = utc_date(*parse_iso("2020-03-01T00:00:00Z") + Hours{24 * d});
      for (std::size_t c = 0; c < 4; ++c) {
        a.rows[date][c] = static_cast<std::size_t>(n(rng));
        b.rows[date][c] = static_cast<std::size_t>(n(rng));
      }
    }
    const std::vector<VesselCategory> cats{kAllCategories.begin(), kAllCategories.end()};
    const auto ab = arrivals_mae(a, {b, cats});
    const auto ba = arrivals_mae(b, {a, cats});
    EXPECT_NEAR(ab.macro, ba.macro, 1e-12);
    EXPECT_GE(ab.macro, 0.0);
    double total = 0;
    for (const auto& [date, row] : a.rows) {
      for (std::size_t c = 0; c < 4; ++c) total += std::fabs(double(row[c]) - double(b.rows[date][c]));
    }
    EXPECT_NEAR(ab.macro, total / 30 / 4, 1e-12);
  }
}

TEST(Missing, GlobalOutagesOnly) {
  std::vector<validate::Outage> os{
      {validate::OutageScope::Global, at("2020-01-01T23:00:00Z"), at("2020-01-02T01:00:00Z"), {}, {}},
      {validate::OutageScope::Vessel, at("2020-01-05T00:00:00Z"), at("2020-01-05T03:00:00Z"), 1u, {}}};
  EXPECT_EQ(dates_with_missing_data(os), (std::set<Date>{day("2020-01-01"), day("2020-01-02")}));
}

TEST(Schedule, OrderedAndEmpty) {
  EXPECT_TRUE(schedule_table({}).empty());
  const Timestamp t = at("2020-01-01T14:10:00Z");
  std::vector<Voyage> vs;
  for (int d : {2, 0, 1}) {
    vs.push_back(voyage_of({phase(PhaseKind::Moored, t + Hours{24 * d}, t + Hours{24 * d + 14})}, 5));
  }
  const auto s = schedule_table(vs);
  ASSERT_EQ(s.size(), 3u);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_EQ(s[i].arrival - s[i - 1].arrival, Hours{24});
}

TEST(Weekly, Aggregates) {
  const Timestamp mon = at("2020-01-06T10:00:00Z");
  const std::vector<DurationSample> one{{mon, Hours{7}}};
  EXPECT_EQ(weekly_aggregate(one, Statistic::Mean).at("2020-W02"), 7.0);
  const std::vector<DurationSample> two{{mon, Hours{10}}, {mon + Hours{48}, Hours{14}}};
  EXPECT_EQ(weekly_aggregate(two, Statistic::Mean).at("2020-W02"), 12.0);
  EXPECT_EQ(weekly_aggregate(two, Statistic::Count).at("2020-W02"), 2.0);
  const std::vector<DurationSample> three{{mon, Hours{1}}, {mon, Hours{2}}, {mon, Hours{30}}};
  EXPECT_EQ(weekly_aggregate(three, Statistic::Median).at("2020-W02"), 2.0);
}

TEST(Weekly, MatchesGroupByOverAYear) {
  std::mt19937_64 rng(5);
  std::vector<DurationSample> samples;
  std::map<std::string, std::vector<double>> groups;
  for (int i = 0; i < 2000; ++i) {
    const Timestamp when = at("2021-01-01T00:00:00Z") + Duration{static_cast<long>(rng() % (365ull * 86400))};
    const Duration value{static_cast<long>(rng() % 100000)};
    samples.push_back({when, value});
    groups[iso_week(utc_date(when))].push_back(hours(value));
  }
  const auto got = weekly_aggregate(samples, Statistic::Mean);
  ASSERT_EQ(got.size(), groups.size());
  for (const auto& [week, values] : groups) {
    double sum = 0;
    for (double v : values) sum += v;
    EXPECT_NEAR(got.at(week), sum / double(values.size()), 1e-9) << week;
  }
}

TEST(Time, IsoWeekAndDurations) {
  EXPECT_EQ(iso_week(day("2020-01-01")), "2020-W01");
  EXPECT_EQ(iso_week(day("2021-01-03")), "2020-W53");
  EXPECT_EQ(iso_week(day("2024-12-30")), "2025-W01");
  EXPECT_EQ(format_days_hm(Hours{36} + minutes{26}), "1 days 12:26");
  EXPECT_EQ(format_days_hm(Hours{13} + minutes{46} + std::chrono::seconds{29}), "0 days 13:46");
  EXPECT_EQ(format_iso(*parse_iso("2019-09-12 14:28:00")), "2019-09-12T14:28:00Z");
}
