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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aisport/codec.hpp"
#include "aisport/error.hpp"
#include "aisport/geo.hpp"
#include "aisport/ingest.hpp"
#include "aisport/io.hpp"
#include "aisport/metrics.hpp"
#include "aisport/pipeline.hpp"
#include "aisport/synth.hpp"
#include "aisport/validate.hpp"
#include "aisport/voyage.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace aisport;
using Clock = std::chrono::steady_clock;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream why;

  void expect(bool cond, const std::string& msg) {
    if (!cond && ok) why << msg;
    ok = ok && cond;
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

synth::Scenario traffic(std::uint64_t seed, double error_rate, int days) {
  synth::Scenario s;
  s.seed = seed;
  s.start = from_unix(1704067200);
  s.port = synth::builtin_port();
  s.error_rate = error_rate;
  synth::PoissonTraffic t;
  t.days = days;
  t.anchor_min_h = 3.0;
  s.traffic = t;
  return s;
}

// --- 1 ------------------------------------------------------------------------

void round_trip(Check& c) {
  std::mt19937_64 rng(101);
  const auto start = Clock::now();
  codec::Decoder dec;
  for (int i = 0; i < 10000; ++i) {
    auto raw = oracle::random_position(rng);
    const auto line = oracle::sentences(oracle::position_bits(raw))[0];
    const auto ts = fixture::t0() + Duration{i};
    const auto out = dec.feed(line, ts).outcome;
    const auto* r = std::get_if<codec::PositionReport>(&out);
    c.expect(r != nullptr && *r == oracle::expected_position(raw, ts), "decode mismatch at " + std::to_string(i));
    if (r == nullptr) continue;
    // Re-encode with the library and decode again.
    const auto again = dec.feed(codec::to_sentences(codec::encode_position(*r), 'B', 0)[0], ts).outcome;
    const auto* r2 = std::get_if<codec::PositionReport>(&again);
    c.expect(r2 != nullptr && *r2 == *r, "re-encode mismatch at " + std::to_string(i));
  }
  const double took = seconds_since(start);
  c.expect(took < 5.0, "took " + std::to_string(took) + " s");
}

// --- 2 ------------------------------------------------------------------------

void corruption(Check& c) {
  std::mt19937_64 rng(202);
  const char alphabet[] = "0123456789:;<=>?@ABCDEFGHIJKLMNOPQRSTUVW`abcdefghijklmnopqrstuvw,*!";
  std::size_t errors = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto raw = oracle::random_position(rng);
    const std::string line = oracle::sentences(oracle::position_bits(raw))[0];
    const auto clean = oracle::expected_position(raw, fixture::t0());
    std::string bad = line;
    const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, line.size() - 1)(rng);
    char ch;
    do {
      ch = alphabet[std::uniform_int_distribution<int>(0, sizeof alphabet - 2)(rng)];
    } while (ch == line[pos]);
    bad[pos] = ch;
    codec::Decoder dec;
    try {
      const auto out = dec.feed(bad, fixture::t0()).outcome;
      if (std::holds_alternative<codec::DecodeError>(out)) ++errors;
      const auto* r = std::get_if<codec::PositionReport>(&out);
      c.expect(r == nullptr || *r != clean, "corruption decoded identically: " + bad);
    } catch (const std::exception& e) {
      c.expect(false, std::string("decoder threw: ") + e.what());
    }
  }
  c.expect(errors >= 900, "only " + std::to_string(errors) + " of 1000 reported as errors");
}

// --- 3 ------------------------------------------------------------------------

void headings(Check& c) {
  for (int h = 0; h < 360; ++h) {
    const auto e = geo::encode_heading(static_cast<double>(h));
    const double rad = h * geo::kPi / 180.0;
    c.expect(std::abs(e.s - std::sin(rad)) < 1e-12 && std::abs(e.c - std::cos(rad)) < 1e-12,
             "heading " + std::to_string(h));
    c.expect(std::abs(e.s * e.s + e.c * e.c - 1.0) < 1e-12, "not on unit circle");
  }
  const auto n = geo::encode_heading(0.0), east = geo::encode_heading(90.0);
  const auto so = geo::encode_heading(180.0), w = geo::encode_heading(270.0);
  c.expect(std::abs(n.c - 1) < 1e-12 && std::abs(east.s - 1) < 1e-12 && std::abs(so.c + 1) < 1e-12 &&
               std::abs(w.s + 1) < 1e-12,
           "cardinal points");
  try {
    geo::encode_heading(std::optional<double>{});
    c.expect(false, "missing heading accepted");
  } catch (const Error& e) {
    c.expect(e.code() == ErrorCode::UnavailableHeading, "wrong error for missing heading");
  }
}

// --- 4 ------------------------------------------------------------------------

void voyages(Check& c) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, trial < 5 ? 10000 : 1500)(rng);
    const int vessels = std::uniform_int_distribution<int>(1, 8)(rng);
    std::vector<long> clock(static_cast<std::size_t>(vessels), 0);
    std::vector<double> lat(static_cast<std::size_t>(vessels), 37.9);
    std::discrete_distribution<int> kind({70, 10, 10, 5, 5});
    std::vector<validate::ValidatedMessage> stream;
    for (int i = 0; i < n; ++i) {
      const auto v = static_cast<std::size_t>(std::uniform_int_distribution<int>(0, vessels - 1)(rng));
      long gap = 1;
      switch (kind(rng)) {
        case 0: gap = std::uniform_int_distribution<long>(1, 600)(rng); break;
        case 1: gap = std::uniform_int_distribution<long>(4 * 3600, 6 * 3600)(rng); break;
        case 2: gap = 5 * 3600 + std::uniform_int_distribution<long>(-1, 1)(rng); break;
        case 3: gap = 24 * 3600 + std::uniform_int_distribution<long>(-1, 1)(rng); break;
        default: gap = std::uniform_int_distribution<long>(23 * 3600, 30 * 3600)(rng); break;
      }
      clock[v] += gap;
      if (std::bernoulli_distribution(0.3)(rng)) lat[v] += (rng() % 2 ? 300.0 : 30.0) / 111195.0;
      stream.push_back(fixture::validated(
          fixture::report(static_cast<std::uint32_t>(1000 + v), fixture::t0() + Duration{clock[v]}, lat[v], 23.6, 0.1),
          5));
    }
    std::shuffle(stream.begin(), stream.end(), rng);
    const auto brute = oracle::brute_split(stream);
    const auto got = voyage::extract_voyages(stream);
    std::vector<oracle::Span> spans;
    for (const auto& v : got) spans.push_back({v.mmsi, v.arrival, v.departure, v.message_count});
    c.expect(spans == brute, "trial " + std::to_string(trial) + " differs from the brute-force split");
  }
}

// --- 5 ------------------------------------------------------------------------

void knn(Check& c) {
  std::mt19937_64 rng(505);
  const int ks[] = {1, 50, 300};
  for (int cfg = 0; cfg < 50; ++cfg) {
    const int k = ks[cfg % 3];
    const int n = std::uniform_int_distribution<int>(k, 5000)(rng);
    std::vector<validate::TrainingPoint> train;
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    for (int i = 0; i < n; ++i) {
      // Coarse grid with duplicates so ties are exercised.
      const double lat = 37.9 + std::round(jitter(rng) * (cfg % 2 ? 1e4 : 1e2)) / (cfg % 2 ? 1e4 : 1e2);
      const double lon = 23.6 + jitter(rng);
      train.push_back({{lat, lon}, static_cast<std::uint8_t>(rng() % 2 ? 1 : 5)});
    }
    const auto model = validate::fit_knn(train, k);
    for (int q = 0; q < 20; ++q) {
      const geo::PlanarPoint p{jitter(rng) * 8000.0, jitter(rng) * 8000.0};
      const auto expected = oracle::knn_scan(model.points(), p, k);
      c.expect(model.nearest(p) == expected, "neighbour set differs in config " + std::to_string(cfg));
      c.expect(model.vote(p) == oracle::knn_vote(model.points(), p, k),
               "vote differs in config " + std::to_string(cfg));
    }
  }
}

// --- 6 ------------------------------------------------------------------------

double accuracy(const synth::Output& out, validate::Strategy strategy) {
  const auto decoded = pipeline::decode_lines(out.nmea);
  validate::ValidatorConfig cfg;
  cfg.method = strategy;
  const auto v = pipeline::run_validate(decoded.records, synth::builtin_port(), cfg);
  std::map<std::pair<std::uint32_t, std::int64_t>, std::uint8_t> truth;
  for (const auto& m : out.truth.messages) truth[{m.mmsi, to_unix(m.timestamp)}] = m.true_navstat;
  std::size_t right = 0;
  for (const auto& m : v.messages) {
    const auto it = truth.find({m.report.mmsi, to_unix(m.report.timestamp)});
    right += (it != truth.end() && it->second == m.corrected_navstat) ? 1 : 0;
  }
  return static_cast<double>(right) / static_cast<double>(out.truth.messages.size());
}

void correction(Check& c) {
  const auto out = synth::generate(traffic(606, 0.3, 2));
  const double ens = accuracy(out, validate::Strategy::Ensemble);
  const double kin = accuracy(out, validate::Strategy::Kinematic);
  std::printf("       ensemble accuracy %.4f, kinematic accuracy %.4f\n", ens, kin);
  c.expect(ens >= 0.95, "ensemble accuracy " + std::to_string(ens));
  c.expect(kin >= 0.90, "kinematic accuracy " + std::to_string(kin));
}

// --- 7 ------------------------------------------------------------------------

void metrics_checks(Check& c) {
  const auto s = traffic(707, 0.0, 3);
  const auto out = synth::generate(s);
  const auto decoded = pipeline::decode_lines(out.nmea);
  const auto validated = pipeline::run_validate(decoded.records, s.port, validate::ValidatorConfig{});
  const auto set = pipeline::run_voyages(validated);

  std::map<std::pair<std::uint32_t, std::int64_t>, const synth::TruthVisit*> by_entry;
  for (const auto& v : out.truth.visits) by_entry[{v.mmsi, to_unix(v.entry)}] = &v;
  // Hysteresis shifts each transition by up to one stopped report.
  const Duration tol = 2 * s.stopped_cadence;
  std::size_t matched = 0;
  for (const auto& v : set.voyages) {
    const auto wait = metrics::anchorage_wait(v);
    const auto move = metrics::movement_stats(v);
    const auto turn = metrics::turnaround(v, &s.port);
    const Duration moored = turn ? turn->turnaround() : Duration{0};
    c.expect(moored + wait + move.underway == v.departure - v.arrival,
             "turnaround identity broken for " + std::to_string(v.mmsi));
    const auto it = by_entry.find({v.mmsi, to_unix(v.arrival)});
    if (it == by_entry.end()) continue;
    ++matched;
    c.expect(std::chrono::abs(wait - it->second->anchorage_wait) <= tol,
             "anchorage wait off for " + std::to_string(v.mmsi) + ": " + std::to_string(wait.count()) + " vs " +
                 std::to_string(it->second->anchorage_wait.count()));
  }
  c.expect(matched == out.truth.visits.size() && set.voyages.size() == matched,
           "voyages " + std::to_string(set.voyages.size()) + " vs visits " + std::to_string(out.truth.visits.size()));

  const auto types = pipeline::ship_types(decoded.records);
  const auto daily = metrics::daily_arrivals(set.voyages, types);
  c.expect(daily == out.truth.arrivals, "daily arrivals differ from truth");

  metrics::GroundTruthCalls self{daily, {metrics::VesselCategory::Cargo, metrics::VesselCategory::Tanker,
                                         metrics::VesselCategory::Passenger, metrics::VesselCategory::Other}};
  c.expect(metrics::arrivals_mae(daily, self).macro == 0.0, "MAE(pred, pred) != 0");

  std::mt19937_64 rng(77);
  for (int pair = 0; pair < 20; ++pair) {
    metrics::DailyTable a, b;
    const Date d0 = utc_date(from_unix(1704067200));
    for (int day = 0; day < 10; ++day) {
      const Date d = std::chrono::sys_days(d0) + std::chrono::days{day};
      for (std::size_t k = 0; k < 4; ++k) {
        a.rows[d][k] = rng() % 30;
        b.rows[d][k] = rng() % 30;
      }
    }
    metrics::GroundTruthCalls truth{b, self.categories};
    double macro = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      double sum = 0;
      for (const auto& [d, row] : a.rows) sum += std::abs(double(row[k]) - double(b.rows[d][k]));
      macro += sum / 10.0;
    }
    macro /= 4.0;
    c.expect(std::abs(metrics::arrivals_mae(a, truth).macro - macro) < 1e-12, "MAE differs from recomputation");
  }
}

// --- 8 ------------------------------------------------------------------------

void ferry(Check& c) {
  synth::Scenario s;
  s.seed = 808;
  s.start = from_unix(1704067200);
  s.port = synth::builtin_port();
  s.error_rate = 0.3;
  synth::FerryService f;
  f.mmsi = 237000001;
  f.days = 7;
  f.skip = {3};
  f.terminal = "Passenger Terminal";
  s.ferries = {f};
  const auto out = synth::generate(s);
  const auto decoded = pipeline::decode_lines(out.nmea);
  const auto validated = pipeline::run_validate(decoded.records, s.port, validate::ValidatorConfig{});
  const auto set = pipeline::run_voyages(validated);
  const auto rows = metrics::schedule_table(set.voyages, &s.port);
  c.expect(rows.size() == 6, "expected 6 calls, got " + std::to_string(rows.size()));
  if (rows.empty()) return;
  std::vector<double> h;
  for (const auto& r : rows) h.push_back(hours(r.turnaround()));
  std::vector<double> sorted = h;
  std::sort(sorted.begin(), sorted.end());
  const double modal = sorted[sorted.size() / 2];
  const double longest = sorted.back();
  std::printf("       modal turnaround %.2f h, skipped-day turnaround %.2f h (ratio %.2f)\n", modal, longest,
              longest / modal);
  const double expected_modal = hours(f.departure + std::chrono::hours{24} - f.berth_arrival);
  // Stopped reports every 3 min; allow a quarter hour either side.
  c.expect(std::abs(modal - expected_modal) <= 0.25, "modal turnaround " + std::to_string(modal));
  c.expect(std::abs(longest - (modal + 24.0)) <= 0.25, "skipped turnaround " + std::to_string(longest));
  c.expect(std::count_if(h.begin(), h.end(), [&](double x) { return x > modal + 12; }) == 1,
           "more than one long stay");
}

// --- 9 ------------------------------------------------------------------------

std::string full_run(const std::string& store, const std::string& metrics_dir, const geo::PortGeometry& port) {
  std::vector<std::string> lines;
  for (const auto& r : ingest::load_store(store)) lines.push_back(io::dump_record(r));
  const auto decoded = pipeline::decode_lines(lines);
  const auto validated = pipeline::run_validate(decoded.records, port, validate::ValidatorConfig{}, {}, 2);
  const auto set = pipeline::run_voyages(validated);
  pipeline::MetricsOptions opts;
  opts.port = &port;
  const auto report = pipeline::run_metrics(set, opts);
  std::string all;
  for (const auto& l : pipeline::validated_jsonl(validated)) all += l + "\n";
  for (const auto& l : pipeline::voyages_jsonl(set)) all += l + "\n";
  for (const auto& p : pipeline::write_metrics(report, metrics_dir)) {
    all += std::filesystem::path(p).filename().string() + "\n" + io::read_file(p);
  }
  return all;
}

void determinism(Check& c) {
  fixture::TempDir dir("acceptance");
  const auto s = traffic(909, 0.2, 2);
  const auto out = synth::generate(s);
  io::write_lines(dir.file("feed.nmea"), out.nmea);
  const std::string store = dir.file("store");
  {
    auto cfg = ingest::SourceConfig::parse(dir.file("feed.nmea"));
    ingest::StoreWriter writer(store);
    ingest::run_replay(cfg, writer);
    writer.flush();
  }
  const auto a = full_run(store, dir.file("m1"), s.port);
  const auto b = full_run(store, dir.file("m2"), s.port);
  c.expect(!a.empty() && a == b, "two runs differ");
}

// --- 10 -----------------------------------------------------------------------

void throughput(Check& c) {
  const auto s = traffic(1010, 0.3, 2);
  const auto out = synth::generate(s);
  const auto start = Clock::now();
  const auto decoded = pipeline::decode_lines(out.nmea);
  const auto validated = pipeline::run_validate(decoded.records, s.port, validate::ValidatorConfig{});
  const double took = seconds_since(start);
  const double rate = static_cast<double>(validated.messages.size()) / took;
  std::printf("       %zu messages in %.3f s: %.0f msg/s\n", validated.messages.size(), took, rate);
  c.expect(rate >= 50000.0, "rate " + std::to_string(rate));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria = {
      {"decoder round-trips 10k oracle position reports in under 5 s", round_trip},
      {"1000 corrupted sentences become errors and never decode silently", corruption},
      {"heading encoding is exact on 360 integer headings and the cardinal points", headings},
      {"voyage extraction equals the brute-force splitter on 100 random streams", voyages},
      {"k-NN equals the exhaustive scan on 50 configurations", knn},
      {"status correction at 30% error: ensemble >= 95%, kinematic >= 90%", correction},
      {"metrics agree with synthetic ground truth and the MAE oracle", metrics_checks},
      {"ferry with a skipped departure shows one stay of modal + 24 h", ferry},
      {"store, replay, validate, voyages, metrics is byte-identical across runs", determinism},
      {"decode plus validate sustains at least 50k msg/s", throughput},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s [%zu] %s%s%s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, c.ok ? "" : ": ",
                c.why.str().c_str());
    std::fflush(stdout);
    failed += c.ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
