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

// aisport: command-line front end for the AIS port toolkit.

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "aisport/error.hpp"
#include "aisport/ingest.hpp"
#include "aisport/io.hpp"
#include "aisport/pipeline.hpp"
#include "aisport/synth.hpp"
#include "aisport/validate.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;
using namespace aisport;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitQuality = 1;
constexpr int kExitUsage = 2;

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted.store(true); }

std::vector<std::string> read_input(const std::string& path) {
  if (path != "-") return io::read_lines(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

void write_output(const std::string& path, const std::vector<std::string>& lines) {
  if (path == "-") {
    for (const auto& l : lines) std::cout << l << '\n';
    std::cout.flush();
    if (!std::cout) throw Error(ErrorCode::SinkWriteFailure, "stdout write failed");
    return;
  }
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  io::write_lines(path, lines);
}

std::string sibling(const std::string& output, const std::string& suffix) {
  fs::path p(output);
  p.replace_extension(suffix);
  return p.string();
}

std::optional<std::string> manifest_path(const std::string& requested, const std::string& output) {
  if (!requested.empty()) return requested;
  if (output == "-" || output.empty()) return std::nullopt;
  return output + ".manifest.json";
}

Timestamp parse_time_arg(const std::string& text) {
  const auto ts = parse_iso(text);
  if (!ts) throw Error(ErrorCode::InvalidConfig, "not an ISO timestamp: " + text);
  return *ts;
}

// ---------------------------------------------------------------------------

struct CommonValidate {
  std::string port;
  std::string config;
  std::string method;
  int jobs = 1;
};

validate::ValidatorConfig load_validator_config(const CommonValidate& o) {
  validate::ValidatorConfig cfg = o.config.empty() ? validate::ValidatorConfig{} : validate::load_config(o.config);
  if (!o.method.empty()) {
    const auto m = validate::parse_strategy(o.method);
    if (!m) throw Error(ErrorCode::InvalidConfig, "unknown method '" + o.method + "'");
    cfg.method = *m;
  }
  return cfg;
}

geo::PortGeometry load_port(const std::string& path) {
  return path.empty() ? geo::PortGeometry{} : geo::load_port_geojson(path);
}

void print_validation(const validate::ValidationSummary& s, std::ostream& os) {
  os << "validate: messages=" << s.messages << " agreed=" << s.agreed << " agreement=" << s.agreement_rate()
     << " geofence=" << s.by_method[0] << " kinematic=" << s.by_method[1] << " knn=" << s.by_method[2]
     << " reported=" << s.by_method[3] << " gap_flagged=" << s.gap_flagged
     << " knn_fitted=" << (s.knn_fitted ? "yes" : "no") << "\n";
}

// --- decode -------------------------------------------------------------------

struct DecodeOpts {
  std::string input;
  std::string output = "-";
  std::string errors;
  std::string start = "1970-01-01T00:00:00Z";
  long cadence_s = 1;
  double max_error_rate = 1.0;
  std::string manifest;
};

int cmd_decode(const DecodeOpts& o) {
  const auto lines = read_input(o.input);
  const auto d = pipeline::decode_lines(lines, parse_time_arg(o.start), Duration{o.cadence_s});
  write_output(o.output, pipeline::records_jsonl(d.records));
  const auto err_lines = pipeline::errors_jsonl(d.errors);
  std::string errors_path = o.errors;
  if (errors_path.empty() && o.output != "-") errors_path = sibling(o.output, ".errors.jsonl");
  if (errors_path.empty()) {
    for (const auto& l : err_lines) std::cerr << l << '\n';
  } else {
    write_output(errors_path, err_lines);
  }
  const auto& s = d.summary;
  std::cerr << "decode: lines=" << s.lines << " positions=" << s.positions << " statics=" << s.statics
            << " errors=" << s.decode_errors << " corrupt=" << s.corrupt_lines << " skipped=" << s.skipped << "\n";

  if (auto mp = manifest_path(o.manifest, o.output)) {
    tool::RunManifest m("decode");
    m.input(o.input);
    m.option("start", o.start);
    m.option("cadence_s", o.cadence_s);
    m.option("max_error_rate", o.max_error_rate);
    m.output(o.output);
    if (!errors_path.empty()) m.output(errors_path);
    m.write(*mp);
  }
  const std::size_t bad = s.decode_errors + s.corrupt_lines;
  if (s.lines > 0 && static_cast<double>(bad) / static_cast<double>(s.lines) > o.max_error_rate) {
    std::cerr << "decode: error rate above --max-error-rate\n";
    return kExitQuality;
  }
  return kExitOk;
}

// --- validate -----------------------------------------------------------------

struct ValidateOpts {
  std::string input;
  std::string output = "-";
  std::string outages;
  std::string start = "1970-01-01T00:00:00Z";
  long cadence_s = 1;
  CommonValidate common;
  std::string manifest;
};

int cmd_validate(const ValidateOpts& o) {
  const auto cfg = load_validator_config(o.common);
  const auto port = load_port(o.common.port);
  const auto lines = read_input(o.input);
  const auto decoded = pipeline::decode_lines(lines, parse_time_arg(o.start), Duration{o.cadence_s});
  std::vector<validate::Outage> extra;
  if (!o.outages.empty()) extra = io::load_outages(o.outages);
  const auto v = pipeline::run_validate(decoded.records, port, cfg, extra, o.common.jobs);
  write_output(o.output, pipeline::validated_jsonl(v));
  print_validation(v.summary, std::cerr);

  if (auto mp = manifest_path(o.manifest, o.output)) {
    tool::RunManifest m("validate");
    m.input(o.input);
    if (!o.common.port.empty()) m.input(o.common.port);
    if (!o.outages.empty()) m.input(o.outages);
    m.option("validator", validate::to_text(cfg));
    m.option("jobs", o.common.jobs);
    m.output(o.output);
    m.write(*mp);
  }
  if (cfg.min_agreement > 0.0 && v.summary.agreement_rate() < cfg.min_agreement) {
    std::cerr << "validate: agreement " << v.summary.agreement_rate() << " below min_agreement "
              << cfg.min_agreement << "\n";
    return kExitQuality;
  }
  return kExitOk;
}

// --- voyages ------------------------------------------------------------------

struct VoyageCli {
  std::string area = "none";
  double cell_deg = 0.05;
  double max_gap_h = 24.0;
  double move_gap_h = 5.0;
  double move_m = 100.0;

  pipeline::VoyageOptions options() const {
    pipeline::VoyageOptions v;
    v.area = voyage::AreaFilter::parse(area);
    v.cell_deg = cell_deg;
    v.rules.max_gap = Duration{static_cast<long>(max_gap_h * 3600.0)};
    v.rules.move_gap = Duration{static_cast<long>(move_gap_h * 3600.0)};
    v.rules.move_m = move_m;
    return v;
  }
  void record(tool::RunManifest& m) const {
    m.option("area", area);
    m.option("cell_deg", cell_deg);
    m.option("max_gap_h", max_gap_h);
    m.option("move_gap_h", move_gap_h);
    m.option("move_m", move_m);
  }
};

struct VoyagesOpts {
  std::string input;
  std::string output = "-";
  std::string outages;
  VoyageCli voyage;
  std::string manifest;
};

int cmd_voyages(const VoyagesOpts& o) {
  const auto lines = read_input(o.input);
  auto validated = pipeline::parse_validated_jsonl(lines);
  if (!o.outages.empty()) {
    for (auto& x : io::load_outages(o.outages)) validated.outages.push_back(x);
  }
  const auto set = pipeline::run_voyages(validated, o.voyage.options());
  write_output(o.output, pipeline::voyages_jsonl(set));
  std::size_t flagged = 0;
  for (const auto& v : set.voyages) flagged += v.gap_flagged ? 1 : 0;
  std::cerr << "voyages: " << set.voyages.size() << " (gap-flagged " << flagged << ")\n";

  if (auto mp = manifest_path(o.manifest, o.output)) {
    tool::RunManifest m("voyages");
    m.input(o.input);
    if (!o.outages.empty()) m.input(o.outages);
    o.voyage.record(m);
    m.output(o.output);
    m.write(*mp);
  }
  return kExitOk;
}

// --- metrics ------------------------------------------------------------------

struct MetricsCli {
  std::string port;
  std::string ground_truth;
  double truth_offset_h = 0.0;
  std::int64_t vessel = -1;
  std::string weekly = "mean";

  pipeline::MetricsOptions options(const geo::PortGeometry& geometry) const {
    pipeline::MetricsOptions m;
    m.port = geometry.empty() ? nullptr : &geometry;
    if (!ground_truth.empty()) {
      m.truth = metrics::load_ground_truth_csv(ground_truth, Duration{static_cast<long>(truth_offset_h * 3600.0)});
    }
    if (vessel >= 0) m.vessel = static_cast<std::uint32_t>(vessel);
    const auto stat = metrics::parse_statistic(weekly);
    if (!stat) throw Error(ErrorCode::InvalidConfig, "weekly statistic must be mean, median or count");
    m.weekly = *stat;
    return m;
  }
  void record(tool::RunManifest& m) const {
    if (!port.empty()) m.input(port);
    if (!ground_truth.empty()) m.input(ground_truth);
    m.option("truth_offset_h", truth_offset_h);
    m.option("vessel", vessel >= 0 ? nlohmann::ordered_json(vessel) : nlohmann::ordered_json(nullptr));
    m.option("weekly", weekly);
  }
};

struct MetricsOpts {
  std::string input;
  std::string output = "metrics";
  std::string outages;
  MetricsCli metrics;
};

void print_metrics(const pipeline::MetricsReport& r, std::ostream& os) {
  os << "metrics: voyages=" << r.voyages.size();
  if (r.mae) {
    os << " mae_macro=" << r.mae->macro;
    for (const auto& [cat, v] : r.mae->per_category) os << " mae_" << metrics::to_string(cat) << "=" << v;
  }
  os << "\n";
  if (!r.schedule.empty()) {
    os << pipeline::schedule_csv(r.schedule);
  }
}

int cmd_metrics(const MetricsOpts& o) {
  const auto lines = read_input(o.input);
  auto set = pipeline::parse_voyages_jsonl(lines);
  if (!o.outages.empty()) {
    for (auto& x : io::load_outages(o.outages)) set.outages.push_back(x);
  }
  const auto port = load_port(o.metrics.port);
  const auto report = pipeline::run_metrics(set, o.metrics.options(port));
  auto paths = pipeline::write_metrics(report, o.output);
  print_metrics(report, std::cout);

  tool::RunManifest m("metrics");
  m.input(o.input);
  if (!o.outages.empty()) m.input(o.outages);
  o.metrics.record(m);
  for (const auto& p : paths) m.output(p);
  m.write((fs::path(o.output) / "manifest.json").string());
  return kExitOk;
}

// --- ingest -------------------------------------------------------------------

struct IngestOpts {
  std::string source;
  std::string store;
  double replay_speed = 0.0;
  double duration_s = 0.0;
  std::string start = "1970-01-01T00:00:00Z";
  long cadence_s = 1;
};

// Requests stop on SIGINT/SIGTERM or after `seconds` (0 = never).
class StopWatcher {
 public:
  StopWatcher(std::stop_source& src, double seconds)
      : thread_([&src, seconds](std::stop_token own) {
          const auto begin = std::chrono::steady_clock::now();
          while (!own.stop_requested()) {
            if (g_interrupted.load() ||
                (seconds > 0 && std::chrono::steady_clock::now() - begin >= std::chrono::duration<double>(seconds))) {
              src.request_stop();
              return;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(50));
          }
        }) {}

 private:
  std::jthread thread_;
};

int cmd_ingest(const IngestOpts& o) {
  auto cfg = ingest::SourceConfig::parse(o.source.empty() ? std::string("tcp://localhost:0") : o.source);
  if (cfg.mode == ingest::SourceMode::Live || o.source.empty()) ingest::apply_env_override(cfg);
  cfg.replay_speed = o.replay_speed;
  cfg.synthetic_start = parse_time_arg(o.start);
  cfg.synthetic_cadence = Duration{o.cadence_s};
  if (cfg.replay_speed < 0) throw Error(ErrorCode::InvalidConfig, "--replay-speed must be >= 0");

  ingest::StoreWriter store(o.store);
  std::stop_source stop;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  ingest::IngestSummary summary;
  {
    StopWatcher watcher(stop, o.duration_s);
    summary = cfg.mode == ingest::SourceMode::Live ? ingest::run_live(cfg, store, stop.get_token())
                                                   : ingest::run_replay(cfg, store, stop.get_token());
  }
  store.flush();
  if (!summary.gaps.empty()) {
    std::ofstream gaps(fs::path(o.store) / "gaps.jsonl", std::ios::binary | std::ios::app);
    for (const auto& g : summary.gaps) gaps << io::dump(io::to_json(g)) << '\n';
  }
  std::cerr << "ingest: lines=" << summary.lines << " records=" << summary.records
            << " errors=" << summary.decode_errors << " corrupt=" << summary.corrupt_lines
            << " connections=" << summary.connections << " gaps=" << summary.gaps.size() << "\n";

  tool::RunManifest m("ingest");
  if (cfg.mode == ingest::SourceMode::Replay) {
    m.input(cfg.path);
  } else {
    m.option("endpoint", cfg.host + ":" + std::to_string(cfg.port));
  }
  m.option("replay_speed", o.replay_speed);
  m.output(o.store);
  m.write((fs::path(o.store) / "manifest.json").string());
  return kExitOk;
}

// --- synth --------------------------------------------------------------------

struct SynthOpts {
  std::string scenario;
  std::string output = "-";
  std::string truth;
  std::string port_out;
  std::int64_t seed = -1;
  double error_rate = -1.0;
  std::string manifest;
};

synth::Scenario default_scenario() {
  synth::Scenario s;
  s.port = synth::builtin_port();
  s.start = from_unix(1704067200);
  s.traffic = synth::PoissonTraffic{};
  s.traffic->days = 2;
  return s;
}

int cmd_synth(const SynthOpts& o) {
  synth::Scenario s = o.scenario.empty() ? default_scenario() : synth::load_scenario(o.scenario);
  if (o.seed >= 0) s.seed = static_cast<std::uint64_t>(o.seed);
  if (o.error_rate >= 0) s.error_rate = o.error_rate;
  const auto out = synth::generate(s);
  write_output(o.output, out.nmea);
  if (!o.truth.empty()) write_output(o.truth, synth::truth_jsonl(out.truth));
  if (!o.port_out.empty()) io::write_file(o.port_out, geo::to_geojson(s.port));
  std::cerr << "synth: lines=" << out.nmea.size() << " positions=" << out.truth.messages.size()
            << " visits=" << out.truth.visits.size() << "\n";
  if (auto mp = manifest_path(o.manifest, o.output)) {
    tool::RunManifest m("synth");
    if (!o.scenario.empty()) m.input(o.scenario);
    m.option("seed", s.seed);
    m.option("error_rate", s.error_rate);
    m.output(o.output);
    if (!o.truth.empty()) m.output(o.truth);
    if (!o.port_out.empty()) m.output(o.port_out);
    m.write(*mp);
  }
  return kExitOk;
}

// --- run ----------------------------------------------------------------------

struct RunOpts {
  std::string source;
  std::string store;
  std::string out = "aisport-run";
  std::string outages;
  std::string start = "1970-01-01T00:00:00Z";
  long cadence_s = 1;
  CommonValidate common;
  VoyageCli voyage;
  MetricsCli metrics;
};

std::vector<std::string> store_lines(const std::string& root) {
  std::vector<std::string> lines;
  for (const auto& r : ingest::load_store(root)) lines.push_back(io::dump_record(r));
  return lines;
}

int cmd_run(const RunOpts& o) {
  if (o.source.empty() == o.store.empty()) {
    throw Error(ErrorCode::InvalidConfig, "give exactly one of --source or --store");
  }
  std::string input = o.store;
  if (!o.source.empty()) {
    const auto src = ingest::SourceConfig::parse(o.source);
    if (src.mode != ingest::SourceMode::Replay) {
      throw Error(ErrorCode::InvalidConfig, "run reads files; use 'ingest' for live sources");
    }
    input = src.path;
  }
  const auto cfg = load_validator_config(o.common);
  const auto port = load_port(o.common.port);
  const auto lines = o.store.empty() ? read_input(input) : store_lines(o.store);

  fs::create_directories(o.out);
  const auto path = [&](const char* name) { return (fs::path(o.out) / name).string(); };

  const auto decoded = pipeline::decode_lines(lines, parse_time_arg(o.start), Duration{o.cadence_s});
  write_output(path("decoded.jsonl"), pipeline::records_jsonl(decoded.records));
  write_output(path("decoded.errors.jsonl"), pipeline::errors_jsonl(decoded.errors));

  std::vector<validate::Outage> extra;
  if (!o.outages.empty()) extra = io::load_outages(o.outages);
  const auto validated = pipeline::run_validate(decoded.records, port, cfg, extra, o.common.jobs);
  write_output(path("validated.jsonl"), pipeline::validated_jsonl(validated));
  print_validation(validated.summary, std::cerr);

  const auto set = pipeline::run_voyages(validated, o.voyage.options());
  write_output(path("voyages.jsonl"), pipeline::voyages_jsonl(set));

  const auto report = pipeline::run_metrics(set, o.metrics.options(port));
  auto metric_paths = pipeline::write_metrics(report, path("metrics"));
  print_metrics(report, std::cout);

  tool::RunManifest m("run");
  m.input(input);
  if (!o.common.port.empty()) m.input(o.common.port);
  if (!o.outages.empty()) m.input(o.outages);
  m.option("start", o.start);
  m.option("cadence_s", o.cadence_s);
  m.option("validator", validate::to_text(cfg));
  m.option("jobs", o.common.jobs);
  o.voyage.record(m);
  o.metrics.record(m);
  for (const char* name : {"decoded.jsonl", "decoded.errors.jsonl", "validated.jsonl", "voyages.jsonl"}) {
    m.output(path(name));
  }
  for (const auto& p : metric_paths) m.output(p);
  m.write(path("manifest.json"));

  if (cfg.min_agreement > 0.0 && validated.summary.agreement_rate() < cfg.min_agreement) {
    std::cerr << "run: agreement below min_agreement\n";
    return kExitQuality;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

void add_validate_options(CLI::App* cmd, CommonValidate& c) {
  cmd->add_option("--port", c.port, "Port GeoJSON (anchorage/terminal polygons)");
  cmd->add_option("--config", c.config, "Validator config file (key = value)");
  cmd->add_option("--method", c.method, "Override strategy: geofence, kinematic, knn, ensemble");
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1, 256));
}

void add_voyage_options(CLI::App* cmd, VoyageCli& v) {
  cmd->add_option("--area", v.area, "none | circle:LAT,LON,M | bbox:MINLAT,MINLON,MAXLAT,MAXLON | geojson:PATH");
  cmd->add_option("--cell-deg", v.cell_deg, "Outage grid cell size in degrees");
  cmd->add_option("--max-gap-h", v.max_gap_h, "Split on gaps longer than this");
  cmd->add_option("--move-gap-h", v.move_gap_h, "Split on gaps longer than this when the vessel moved");
  cmd->add_option("--move-m", v.move_m, "Movement threshold across a gap, metres");
}

void add_metrics_options(CLI::App* cmd, MetricsCli& m, bool with_port) {
  if (with_port) cmd->add_option("--port", m.port, "Port GeoJSON for terminal names");
  cmd->add_option("--ground-truth", m.ground_truth, "Port-call CSV for arrival MAE");
  cmd->add_option("--truth-offset-h", m.truth_offset_h, "Ground-truth local time offset from UTC, hours");
  cmd->add_option("--vessel", m.vessel, "MMSI for a schedule table");
  cmd->add_option("--weekly", m.weekly, "Weekly statistic: mean, median, count");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AIS port toolkit: decode, validate navigational status, extract voyages, port metrics"};
  app.set_version_flag("--version", AISPORT_VERSION);
  app.require_subcommand(1);

  DecodeOpts decode;
  auto* c_decode = app.add_subcommand("decode", "NMEA AIVDM lines to JSONL messages plus an error channel");
  c_decode->add_option("-i,--input", decode.input, "Input file or -")->required();
  c_decode->add_option("-o,--output", decode.output, "Output JSONL or -");
  c_decode->add_option("--errors", decode.errors, "Error channel JSONL (default: <output>.errors.jsonl)");
  c_decode->add_option("--start", decode.start, "Receiver time of the first untagged line");
  c_decode->add_option("--cadence", decode.cadence_s, "Seconds between untagged lines");
  c_decode->add_option("--max-error-rate", decode.max_error_rate, "Exit 1 above this error fraction");
  c_decode->add_option("--manifest", decode.manifest, "Run manifest path");

  ValidateOpts val;
  auto* c_validate = app.add_subcommand("validate", "Correct navigational status");
  c_validate->add_option("-i,--input", val.input, "Decoded JSONL or NMEA, or -")->required();
  c_validate->add_option("-o,--output", val.output, "Output JSONL or -");
  c_validate->add_option("--outages", val.outages, "Extra outage JSONL (e.g. receiver gaps)");
  c_validate->add_option("--start", val.start, "Receiver time of the first untagged NMEA line");
  c_validate->add_option("--cadence", val.cadence_s, "Seconds between untagged NMEA lines");
  c_validate->add_option("--manifest", val.manifest, "Run manifest path");
  add_validate_options(c_validate, val.common);

  VoyagesOpts voy;
  auto* c_voyages = app.add_subcommand("voyages", "Group validated messages into voyages");
  c_voyages->add_option("-i,--input", voy.input, "Validated JSONL or -")->required();
  c_voyages->add_option("-o,--output", voy.output, "Output JSONL or -");
  c_voyages->add_option("--outages", voy.outages, "Extra outage JSONL");
  c_voyages->add_option("--manifest", voy.manifest, "Run manifest path");
  add_voyage_options(c_voyages, voy.voyage);

  MetricsOpts met;
  auto* c_metrics = app.add_subcommand("metrics", "Port metrics from voyages");
  c_metrics->add_option("-i,--input", met.input, "Voyages JSONL or -")->required();
  c_metrics->add_option("-o,--output", met.output, "Report directory");
  c_metrics->add_option("--outages", met.outages, "Extra outage JSONL");
  add_metrics_options(c_metrics, met.metrics, true);

  IngestOpts ing;
  auto* c_ingest = app.add_subcommand("ingest", "Stream a live or recorded source into a date-partitioned store");
  c_ingest->add_option("--source", ing.source,
                       std::string("tcp://host:port or file:path (env ") + ingest::kEndpointEnv + " overrides the endpoint)");
  c_ingest->add_option("--store", ing.store, "Store directory")->required();
  c_ingest->add_option("--replay-speed", ing.replay_speed, "0 = as fast as possible");
  c_ingest->add_option("--duration", ing.duration_s, "Stop after this many seconds (0 = until interrupted)");
  c_ingest->add_option("--start", ing.start, "Receiver time of the first untagged replayed line");
  c_ingest->add_option("--cadence", ing.cadence_s, "Seconds between untagged replayed lines");

  SynthOpts syn;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic port scenario with ground truth");
  c_synth->add_option("--scenario", syn.scenario, "Scenario JSON (default: two days of Poisson traffic)");
  c_synth->add_option("-o,--output", syn.output, "NMEA output or -");
  c_synth->add_option("--truth", syn.truth, "Truth log JSONL");
  c_synth->add_option("--port-out", syn.port_out, "Write the scenario's port GeoJSON here");
  c_synth->add_option("--seed", syn.seed, "Override the scenario seed");
  c_synth->add_option("--error-rate", syn.error_rate, "Override the status error rate")->check(CLI::Range(0.0, 1.0));
  c_synth->add_option("--manifest", syn.manifest, "Run manifest path");

  RunOpts run;
  auto* c_run = app.add_subcommand("run", "decode, validate, voyages and metrics in one go");
  c_run->add_option("--source", run.source, "NMEA or stored JSONL file (file:path)");
  c_run->add_option("--store", run.store, "Store directory written by 'ingest'");
  c_run->add_option("--out", run.out, "Output directory");
  c_run->add_option("--outages", run.outages, "Extra outage JSONL");
  c_run->add_option("--start", run.start, "Receiver time of the first untagged NMEA line");
  c_run->add_option("--cadence", run.cadence_s, "Seconds between untagged NMEA lines");
  add_validate_options(c_run, run.common);
  add_voyage_options(c_run, run.voyage);
  add_metrics_options(c_run, run.metrics, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_decode->parsed()) return cmd_decode(decode);
    if (c_validate->parsed()) return cmd_validate(val);
    if (c_voyages->parsed()) return cmd_voyages(voy);
    if (c_metrics->parsed()) return cmd_metrics(met);
    if (c_ingest->parsed()) return cmd_ingest(ing);
    if (c_synth->parsed()) return cmd_synth(syn);
    if (c_run->parsed()) {
      run.metrics.port = run.common.port;
      return cmd_run(run);
    }
  } catch (const Error& e) {
    std::cerr << "aisport: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "aisport: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
