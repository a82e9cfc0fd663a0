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

#include "aisport/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "aisport/error.hpp"

namespace aisport::pipeline {

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

struct Stats {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
};

Stats describe(std::vector<double> v) {
  Stats s;
  s.count = v.size();
  if (v.empty()) return s;
  double sum = 0.0;
  for (const double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  s.median = n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
  return s;
}

io::Json stats_json(const Stats& s) {
  io::Json j;
  j["count"] = s.count;
  j["mean"] = s.count ? io::Json(s.mean) : io::Json(nullptr);
  j["median"] = s.count ? io::Json(s.median) : io::Json(nullptr);
  return j;
}

std::vector<validate::Outage> merge_outages(std::vector<validate::Outage> a,
                                            std::span<const validate::Outage> extra) {
  a.insert(a.end(), extra.begin(), extra.end());
  std::stable_sort(a.begin(), a.end(), [](const validate::Outage& x, const validate::Outage& y) {
    return std::tie(x.start, x.end) < std::tie(y.start, y.end);
  });
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

Decoded decode_lines(std::span<const std::string> lines, Timestamp synthetic_start, Duration cadence) {
  Decoded d;
  ingest::CollectingSink sink;
  ingest::LineProcessor proc(sink, d.summary);
  std::size_t index = 0;
  for (const auto& line : lines) {
    proc.process(line, synthetic_start + cadence * static_cast<long>(index++));
  }
  proc.finish();
  d.records = std::move(sink.records);
  d.errors = std::move(sink.errors);
  return d;
}

std::vector<std::string> records_jsonl(std::span<const io::Record> records) {
  std::vector<std::string> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(io::dump_record(r));
  return out;
}

std::vector<std::string> errors_jsonl(std::span<const codec::DecodeError> errors) {
  std::vector<std::string> out;
  out.reserve(errors.size());
  for (const auto& e : errors) out.push_back(io::dump(io::to_json(e)));
  return out;
}

namespace {

std::map<std::uint32_t, int> latest_types(std::vector<const codec::StaticReport*> statics) {
  std::stable_sort(statics.begin(), statics.end(),
                   [](const auto* a, const auto* b) { return a->timestamp < b->timestamp; });
  std::map<std::uint32_t, int> out;
  for (const auto* s : statics) out[s->mmsi] = s->ship_type;
  return out;
}

}  // namespace

std::map<std::uint32_t, int> ship_types(std::span<const io::Record> records) {
  std::vector<const codec::StaticReport*> statics;
  for (const auto& r : records) {
    if (const auto* s = std::get_if<codec::StaticReport>(&r)) statics.push_back(s);
  }
  return latest_types(std::move(statics));
}

Validated run_validate(std::span<const io::Record> records, const geo::PortGeometry& port,
                       const validate::ValidatorConfig& cfg, std::span<const validate::Outage> extra_outages,
                       int jobs) {
  std::vector<codec::PositionReport> positions;
  Validated out;
  for (const auto& r : records) {
    if (const auto* p = std::get_if<codec::PositionReport>(&r)) {
      positions.push_back(*p);
    } else {
      out.statics.push_back(std::get<codec::StaticReport>(r));
    }
  }
  auto result = validate::validate_stream(positions, port, cfg, jobs);
  out.messages = std::move(result.messages);
  out.outages = merge_outages(std::move(result.outages), extra_outages);
  out.summary = result.summary;
  return out;
}

std::vector<std::string> validated_jsonl(const Validated& v) {
  std::vector<std::string> out;
  out.reserve(v.messages.size() + v.statics.size() + v.outages.size());
  for (const auto& m : v.messages) out.push_back(io::dump(io::to_json(m)));
  for (const auto& s : v.statics) out.push_back(io::dump(io::to_json(s)));
  for (const auto& o : v.outages) out.push_back(io::dump(io::to_json(o)));
  return out;
}

Validated parse_validated_jsonl(std::span<const std::string> lines) {
  Validated v;
  std::size_t n = 0;
  for (const auto& line : lines) {
    ++n;
    if (line.empty()) continue;
    try {
      const auto j = io::parse_line(line);
      const auto type = j.value("type", std::string{});
      if (type == "validated") {
        v.messages.push_back(io::validated_from_json(j));
      } else if (type == "static") {
        v.statics.push_back(io::static_from_json(j));
      } else if (type == "outage") {
        v.outages.push_back(io::outage_from_json(j));
      } else {
        throw Error(ErrorCode::CorruptLine, "expected validated, static or outage record, got '" + type + "'");
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptLine, "line " + std::to_string(n) + ": " + e.what());
    }
  }
  v.summary.messages = v.messages.size();
  for (const auto& m : v.messages) {
    v.summary.agreed += m.agreed_with_reported ? 1 : 0;
    v.summary.gap_flagged += m.gap_flag ? 1 : 0;
    ++v.summary.by_method[static_cast<int>(m.method)];
  }
  return v;
}

VoyageSet run_voyages(const Validated& v, const VoyageOptions& opts) {
  VoyageSet set;
  set.outages = v.outages;
  auto voyages = voyage::extract_voyages(voyage::filter_area(v.messages, opts.area), opts.rules);
  for (auto& voy : voyages) {
    voy = voyage::flag_gaps(voyage::segment_phases(std::move(voy)), set.outages, opts.cell_deg);
  }
  std::vector<const codec::StaticReport*> statics;
  for (const auto& s : v.statics) statics.push_back(&s);
  voyage::attach_ship_types(voyages, latest_types(std::move(statics)));
  set.voyages = std::move(voyages);
  return set;
}

std::vector<std::string> voyages_jsonl(const VoyageSet& v) {
  std::vector<std::string> out;
  for (const auto& voy : v.voyages) out.push_back(io::dump(io::to_json(voy)));
  for (const auto& o : v.outages) out.push_back(io::dump(io::to_json(o)));
  return out;
}

VoyageSet parse_voyages_jsonl(std::span<const std::string> lines) {
  VoyageSet set;
  std::size_t n = 0;
  for (const auto& line : lines) {
    ++n;
    if (line.empty()) continue;
    try {
      const auto j = io::parse_line(line);
      const auto type = j.value("type", std::string{});
      if (type == "voyage") {
        set.voyages.push_back(io::voyage_from_json(j));
      } else if (type == "outage") {
        set.outages.push_back(io::outage_from_json(j));
      } else {
        throw Error(ErrorCode::CorruptLine, "expected voyage or outage record, got '" + type + "'");
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptLine, "line " + std::to_string(n) + ": " + e.what());
    }
  }
  return set;
}

MetricsReport run_metrics(const VoyageSet& set, const MetricsOptions& opts) {
  MetricsReport r;
  r.weekly_statistic = opts.weekly;
  std::vector<metrics::DurationSample> turn_samples;
  std::vector<metrics::DurationSample> wait_samples;
  for (const auto& v : set.voyages) {
    VoyageMetrics m;
    m.mmsi = v.mmsi;
    m.arrival = v.arrival;
    m.departure = v.departure;
    m.category = metrics::categorize(v.ship_type);
    m.turnaround = metrics::turnaround(v, opts.port, opts.turnaround);
    m.anchorage_wait = metrics::anchorage_wait(v);
    m.movement = metrics::movement_stats(v);
    m.gap_flagged = v.gap_flagged;
    if (m.turnaround) turn_samples.push_back({m.turnaround->arrival, m.turnaround->turnaround()});
    if (m.anchorage_wait.count() > 0) wait_samples.push_back({v.arrival, m.anchorage_wait});
    r.voyages.push_back(std::move(m));
  }
  r.daily = metrics::daily_arrivals(set.voyages);
  r.missing_dates = metrics::dates_with_missing_data(set.outages);
  if (opts.truth) {
    r.mae = metrics::arrivals_mae(r.daily, *opts.truth, r.missing_dates);
  }
  if (opts.vessel) {
    std::vector<voyage::Voyage> own;
    for (const auto& v : set.voyages) {
      if (v.mmsi == *opts.vessel) own.push_back(v);
    }
    r.schedule = metrics::schedule_table(own, opts.port, opts.turnaround);
  }
  r.weekly_turnaround = metrics::weekly_aggregate(turn_samples, opts.weekly);
  r.weekly_anchorage_wait = metrics::weekly_aggregate(wait_samples, opts.weekly);
  return r;
}

std::string daily_csv(const metrics::DailyTable& t) {
  std::string out = "date,cargo,tanker,passenger,other,total\n";
  for (const auto& [date, row] : t.rows) {
    out += format_date(date);
    std::size_t total = 0;
    for (const auto n : row) {
      out += "," + std::to_string(n);
      total += n;
    }
    out += "," + std::to_string(total) + "\n";
  }
  return out;
}

std::string schedule_csv(std::span<const metrics::TurnaroundRecord> rows) {
  std::string out = "mmsi,terminal,arrival,departure,turnaround,turnaround_h\n";
  for (const auto& r : rows) {
    out += std::to_string(r.mmsi) + "," + r.terminal_name.value_or("") + "," + format_iso(r.arrival) + "," +
           format_iso(r.departure) + "," + format_days_hm(r.turnaround()) + "," + fixed(hours(r.turnaround())) +
           "\n";
  }
  return out;
}

namespace {

std::string voyages_csv(const MetricsReport& r) {
  std::string out =
      "mmsi,category,arrival,departure,terminal,berth_arrival,berth_departure,turnaround_h,"
      "anchorage_wait_h,underway_h,mean_underway_sog,gap_flagged\n";
  for (const auto& m : r.voyages) {
    out += std::to_string(m.mmsi) + "," + std::string(metrics::to_string(m.category)) + "," +
           format_iso(m.arrival) + "," + format_iso(m.departure) + ",";
    if (m.turnaround) {
      out += m.turnaround->terminal_name.value_or("") + "," + format_iso(m.turnaround->arrival) + "," +
             format_iso(m.turnaround->departure) + "," + fixed(hours(m.turnaround->turnaround())) + ",";
    } else {
      out += ",,,,";
    }
    out += fixed(hours(m.anchorage_wait)) + "," + fixed(hours(m.movement.underway)) + ",";
    out += m.movement.mean_sog ? fixed(*m.movement.mean_sog) : std::string{};
    out += m.gap_flagged ? ",1\n" : ",0\n";
  }
  return out;
}

std::string weekly_csv(const MetricsReport& r) {
  std::set<std::string> weeks;
  for (const auto& [w, v] : r.weekly_turnaround) weeks.insert(w);
  for (const auto& [w, v] : r.weekly_anchorage_wait) weeks.insert(w);
  const bool count = r.weekly_statistic == metrics::Statistic::Count;
  std::string out = count ? "week,statistic,turnarounds,anchorage_waits\n"
                          : "week,statistic,turnaround_h,anchorage_wait_h\n";
  for (const auto& w : weeks) {
    out += w + "," + std::string(metrics::to_string(r.weekly_statistic)) + ",";
    if (auto it = r.weekly_turnaround.find(w); it != r.weekly_turnaround.end()) out += fixed(it->second);
    out += ",";
    if (auto it = r.weekly_anchorage_wait.find(w); it != r.weekly_anchorage_wait.end()) out += fixed(it->second);
    out += "\n";
  }
  return out;
}

}  // namespace

io::Json metrics_json(const MetricsReport& r) {
  std::vector<double> turn_h, wait_h, under_h;
  std::size_t flagged = 0;
  for (const auto& m : r.voyages) {
    if (m.turnaround) turn_h.push_back(hours(m.turnaround->turnaround()));
    if (m.anchorage_wait.count() > 0) wait_h.push_back(hours(m.anchorage_wait));
    under_h.push_back(hours(m.movement.underway));
    flagged += m.gap_flagged ? 1 : 0;
  }
  io::Json j;
  j["voyages"] = r.voyages.size();
  j["gap_flagged_voyages"] = flagged;
  j["turnaround_h"] = stats_json(describe(turn_h));
  j["anchorage_wait_h"] = stats_json(describe(wait_h));
  j["underway_h"] = stats_json(describe(under_h));

  io::Json daily = io::Json::array();
  for (const auto& [date, row] : r.daily.rows) {
    io::Json d;
    d["date"] = format_date(date);
    for (const auto c : metrics::kAllCategories) d[std::string(metrics::to_string(c))] = row[static_cast<std::size_t>(c)];
    daily.push_back(std::move(d));
  }
  j["daily_arrivals"] = std::move(daily);
  io::Json missing = io::Json::array();
  for (const auto d : r.missing_dates) missing.push_back(format_date(d));
  j["missing_data_dates"] = std::move(missing);

  if (r.mae) {
    io::Json mae;
    io::Json per = io::Json::object();
    for (const auto& [cat, v] : r.mae->per_category) per[std::string(metrics::to_string(cat))] = v;
    mae["per_category"] = std::move(per);
    mae["macro"] = r.mae->macro;
    mae["dates_compared"] = r.mae->dates.size();
    j["mae"] = std::move(mae);
  }

  io::Json weekly;
  weekly["statistic"] = std::string(metrics::to_string(r.weekly_statistic));
  weekly["turnaround"] = r.weekly_turnaround;
  weekly["anchorage_wait"] = r.weekly_anchorage_wait;
  j["weekly"] = std::move(weekly);

  if (!r.schedule.empty()) {
    io::Json rows = io::Json::array();
    for (const auto& s : r.schedule) {
      io::Json row;
      row["mmsi"] = s.mmsi;
      row["terminal"] = s.terminal_name ? io::Json(*s.terminal_name) : io::Json(nullptr);
      row["arrival"] = format_iso(s.arrival);
      row["departure"] = format_iso(s.departure);
      row["turnaround"] = format_days_hm(s.turnaround());
      row["turnaround_h"] = hours(s.turnaround());
      rows.push_back(std::move(row));
    }
    j["schedule"] = std::move(rows);
  }
  return j;
}

std::vector<std::string> write_metrics(const MetricsReport& r, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::SinkWriteFailure, "cannot create " + dir + ": " + ec.message());
  std::vector<std::string> paths;
  auto put = [&](const std::string& name, const std::string& content) {
    const auto p = (fs::path(dir) / name).string();
    io::write_file(p, content);
    paths.push_back(p);
  };
  put("metrics.json", metrics_json(r).dump(2) + "\n");
  put("voyages_metrics.csv", voyages_csv(r));
  put("daily_arrivals.csv", daily_csv(r.daily));
  put("weekly.csv", weekly_csv(r));
  if (!r.schedule.empty()) put("schedule.csv", schedule_csv(r.schedule));
  return paths;
}

}  // namespace aisport::pipeline
