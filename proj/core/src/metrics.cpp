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

#include "aisport/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "aisport/error.hpp"

namespace aisport::metrics {

namespace {

using voyage::Phase;
using voyage::PhaseKind;

std::size_t category_index(VesselCategory c) { return static_cast<std::size_t>(c); }

bool same_terminal(const Phase& a, const Phase& b, const geo::PortGeometry* port,
                   const TurnaroundOptions& opts) {
  if (port != nullptr && !port->empty()) {
    const auto* ta = port->terminal_at(a.location);
    const auto* tb = port->terminal_at(b.location);
    if (ta != nullptr || tb != nullptr) {
      return ta == tb;
    }
  }
  return geo::haversine_m(a.location, b.location) <= opts.same_berth_m;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    std::string_view field = line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!field.empty() && (field.front() == ' ' || field.front() == '"')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '"' || field.back() == '\r')) field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

[[noreturn]] void bad_truth(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::MalformedGroundTruth, "line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

VesselCategory categorize(std::optional<int> ship_type) noexcept {
  if (!ship_type) return VesselCategory::Other;
  const int t = *ship_type;
  if (t >= 70 && t <= 79) return VesselCategory::Cargo;
  if (t >= 80 && t <= 89) return VesselCategory::Tanker;
  if ((t >= 40 && t <= 49) || (t >= 60 && t <= 69)) return VesselCategory::Passenger;
  return VesselCategory::Other;
}

std::string_view to_string(VesselCategory c) noexcept {
  switch (c) {
    case VesselCategory::Cargo: return "cargo";
    case VesselCategory::Tanker: return "tanker";
    case VesselCategory::Passenger: return "passenger";
    case VesselCategory::Other: return "other";
  }
  return "other";
}

std::optional<VesselCategory> parse_category(std::string_view text) noexcept {
  if (text == "cargo") return VesselCategory::Cargo;
  if (text == "tanker") return VesselCategory::Tanker;
  if (text == "passenger") return VesselCategory::Passenger;
  if (text == "other") return VesselCategory::Other;
  return std::nullopt;
}

std::optional<TurnaroundRecord> turnaround(const Voyage& v, const geo::PortGeometry* port,
                                           const TurnaroundOptions& opts) {
  const auto& phases = v.phases;
  std::size_t first = phases.size();
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (phases[i].kind == PhaseKind::Moored) {
      first = i;
      break;
    }
  }
  if (first == phases.size()) {
    return std::nullopt;
  }

  std::size_t last = first;
  std::size_t i = first + 1;
  while (i < phases.size()) {
    std::size_t j = i;
    while (j < phases.size() && phases[j].kind == PhaseKind::Underway) {
      ++j;
    }
    if (j == phases.size() || j == i || phases[j].kind != PhaseKind::Moored) {
      break;
    }
    if (phases[j].start - phases[last].end >= opts.merge_gap ||
        !same_terminal(phases[last], phases[j], port, opts)) {
      break;
    }
    last = j;
    i = j + 1;
  }

  TurnaroundRecord rec;
  rec.mmsi = v.mmsi;
  rec.arrival = phases[first].start;
  rec.departure = phases[last].end;
  if (port != nullptr) {
    if (const auto* t = port->terminal_at(phases[first].location)) {
      rec.terminal_name = t->name;
    }
  }
  return rec;
}

Duration anchorage_wait(const Voyage& v) {
  Duration total{0};
  for (const auto& p : v.phases) {
    if (p.kind == PhaseKind::Moored) {
      break;
    }
    if (p.kind == PhaseKind::Anchored) {
      total += p.duration();
    }
  }
  return total;
}

MovementStats movement_stats(const Voyage& v) {
  MovementStats s;
  double weighted = 0.0;
  std::size_t samples = 0;
  for (const auto& p : v.phases) {
    if (p.kind != PhaseKind::Underway) {
      continue;
    }
    s.underway += p.duration();
    if (p.mean_sog && p.sog_samples > 0) {
      weighted += *p.mean_sog * static_cast<double>(p.sog_samples);
      samples += p.sog_samples;
    }
  }
  if (samples > 0) {
    s.mean_sog = weighted / static_cast<double>(samples);
  }
  return s;
}

std::size_t DailyTable::count(Date d, VesselCategory c) const {
  const auto it = rows.find(d);
  return it == rows.end() ? 0 : it->second[category_index(c)];
}

std::size_t DailyTable::total(Date d) const {
  const auto it = rows.find(d);
  if (it == rows.end()) return 0;
  std::size_t sum = 0;
  for (const auto n : it->second) sum += n;
  return sum;
}

DailyTable daily_arrivals(std::span<const Voyage> voyages, const std::map<std::uint32_t, int>& ship_types,
                          std::optional<Date> from, std::optional<Date> to) {
  DailyTable table;
  std::optional<Date> lo = from;
  std::optional<Date> hi = to;
  if (!lo || !hi) {
    for (const auto& v : voyages) {
      const Date d = utc_date(v.arrival);
      if (!from && (!lo || d < *lo)) lo = d;
      if (!to && (!hi || d > *hi)) hi = d;
    }
  }
  if (!lo || !hi) {
    return table;
  }
  for (auto d = std::chrono::sys_days{*lo}; d <= std::chrono::sys_days{*hi}; d += std::chrono::days{1}) {
    table.rows[Date{d}] = CategoryCounts{0, 0, 0, 0};
  }
  for (const auto& v : voyages) {
    const Date d = utc_date(v.arrival);
    auto it = table.rows.find(d);
    if (it == table.rows.end()) {
      continue;
    }
    std::optional<int> type = v.ship_type;
    if (auto st = ship_types.find(v.mmsi); st != ship_types.end()) {
      type = st->second;
    }
    ++it->second[category_index(categorize(type))];
  }
  return table;
}

DailyTable daily_arrivals(std::span<const Voyage> voyages, std::optional<Date> from,
                          std::optional<Date> to) {
  return daily_arrivals(voyages, {}, from, to);
}

GroundTruthCalls parse_ground_truth_csv(std::string_view text, Duration local_offset) {
  GroundTruthCalls truth;
  std::set<VesselCategory> cats;
  enum class Mode { Unknown, Count, Event } mode = Mode::Unknown;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    const auto nl = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (mode == Mode::Unknown) {
      if (f.size() == 3 && f[0] == "date" && f[1] == "category" && f[2] == "arrivals") {
        mode = Mode::Count;
      } else if (f.size() == 3 && f[0] == "timestamp" && f[1] == "mmsi" && f[2] == "category") {
        mode = Mode::Event;
      } else {
        bad_truth(line_no, "header must be 'date,category,arrivals' or 'timestamp,mmsi,category'");
      }
      continue;
    }
    if (f.size() != 3) bad_truth(line_no, "expected 3 fields");

    if (mode == Mode::Count) {
      const auto date = parse_date(f[0]);
      if (!date) bad_truth(line_no, "bad date '" + std::string(f[0]) + "'");
      const auto cat = parse_category(f[1]);
      if (!cat) bad_truth(line_no, "unknown category '" + std::string(f[1]) + "'");
      long long n = 0;
      auto [ptr, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), n);
      if (ec != std::errc{} || ptr != f[2].data() + f[2].size() || n < 0) {
        bad_truth(line_no, "arrivals must be a non-negative integer");
      }
      auto& row = truth.table.rows[*date];
      row[category_index(*cat)] += static_cast<std::size_t>(n);
      cats.insert(*cat);
    } else {
      const auto ts = parse_iso(f[0]);
      if (!ts) bad_truth(line_no, "bad timestamp '" + std::string(f[0]) + "'");
      const auto cat = parse_category(f[2]);
      if (!cat) bad_truth(line_no, "unknown category '" + std::string(f[2]) + "'");
      auto& row = truth.table.rows[utc_date(*ts - local_offset)];
      ++row[category_index(*cat)];
      cats.insert(*cat);
    }
  }
  if (mode == Mode::Unknown) {
    bad_truth(line_no, "empty ground truth file");
  }
  truth.categories.assign(cats.begin(), cats.end());
  return truth;
}

GroundTruthCalls load_ground_truth_csv(const std::string& path, Duration local_offset) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::MissingFile, "cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ground_truth_csv(ss.str(), local_offset);
}

MaeReport arrivals_mae(const DailyTable& predicted, const GroundTruthCalls& truth,
                       const std::set<Date>& excluded) {
  MaeReport report;
  for (const auto& [date, row] : truth.table.rows) {
    if (predicted.rows.count(date) != 0 && excluded.count(date) == 0) {
      report.dates.push_back(date);
    }
  }
  if (report.dates.empty() || truth.categories.empty()) {
    throw Error(ErrorCode::EmptyOverlap, "predicted and ground-truth tables share no dates");
  }
  double macro = 0.0;
  for (const auto cat : truth.categories) {
    double sum = 0.0;
    for (const auto d : report.dates) {
      const auto p = static_cast<double>(predicted.count(d, cat));
      const auto t = static_cast<double>(truth.table.count(d, cat));
      sum += std::abs(p - t);
    }
    const double mae = sum / static_cast<double>(report.dates.size());
    report.per_category[cat] = mae;
    macro += mae;
  }
  report.macro = macro / static_cast<double>(truth.categories.size());
  return report;
}

std::set<Date> dates_with_missing_data(std::span<const validate::Outage> outages) {
  std::set<Date> out;
  for (const auto& o : outages) {
    if (o.scope != validate::OutageScope::Global) {
      continue;
    }
    for (auto d = std::chrono::floor<std::chrono::days>(o.start);
         d <= std::chrono::floor<std::chrono::days>(o.end); d += std::chrono::days{1}) {
      out.insert(Date{d});
    }
  }
  return out;
}

std::vector<TurnaroundRecord> schedule_table(std::span<const Voyage> voyages,
                                             const geo::PortGeometry* port,
                                             const TurnaroundOptions& opts) {
  std::vector<TurnaroundRecord> out;
  for (const auto& v : voyages) {
    if (auto rec = turnaround(v, port, opts)) {
      out.push_back(std::move(*rec));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const TurnaroundRecord& a, const TurnaroundRecord& b) {
    return a.arrival < b.arrival;
  });
  return out;
}

std::string_view to_string(Statistic s) noexcept {
  switch (s) {
    case Statistic::Mean: return "mean";
    case Statistic::Median: return "median";
    case Statistic::Count: return "count";
  }
  return "mean";
}

std::optional<Statistic> parse_statistic(std::string_view text) noexcept {
  if (text == "mean") return Statistic::Mean;
  if (text == "median") return Statistic::Median;
  if (text == "count") return Statistic::Count;
  return std::nullopt;
}

std::map<std::string, double> weekly_aggregate(std::span<const DurationSample> samples,
                                               Statistic statistic) {
  std::map<std::string, std::vector<double>> groups;
  for (const auto& s : samples) {
    groups[iso_week(utc_date(s.when))].push_back(hours(s.value));
  }
  std::map<std::string, double> out;
  for (auto& [week, values] : groups) {
    switch (statistic) {
      case Statistic::Count:
        out[week] = static_cast<double>(values.size());
        break;
      case Statistic::Mean: {
        double sum = 0.0;
        for (const double v : values) sum += v;
        out[week] = sum / static_cast<double>(values.size());
        break;
      }
      case Statistic::Median: {
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();
        out[week] = n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
        break;
      }
    }
  }
  return out;
}

}  // namespace aisport::metrics
