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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "aisport/codec.hpp"
#include "aisport/geo.hpp"
#include "aisport/ingest.hpp"
#include "aisport/io.hpp"
#include "aisport/metrics.hpp"
#include "aisport/validate.hpp"
#include "aisport/voyage.hpp"

// Stage functions behind the CLI. Each stage turns the JSONL of the previous
// one into its own JSONL, so piping the subcommands and running them in one
// process produce identical bytes.
namespace aisport::pipeline {

// --- decode -----------------------------------------------------------------

struct Decoded {
  std::vector<io::Record> records;
  std::vector<codec::DecodeError> errors;
  ingest::IngestSummary summary;
};

/// Raw NMEA or stored JSON lines. Untagged NMEA line i is stamped
/// `synthetic_start + i * cadence`.
Decoded decode_lines(std::span<const std::string> lines, Timestamp synthetic_start = {},
                     Duration cadence = Duration{1});
std::vector<std::string> records_jsonl(std::span<const io::Record> records);
std::vector<std::string> errors_jsonl(std::span<const codec::DecodeError> errors);

/// Latest static report per MMSI (by timestamp, then input order).
std::map<std::uint32_t, int> ship_types(std::span<const io::Record> records);

// --- validate ---------------------------------------------------------------

struct Validated {
  std::vector<validate::ValidatedMessage> messages;
  std::vector<codec::StaticReport> statics;
  std::vector<validate::Outage> outages;
  validate::ValidationSummary summary;
};

/// Validates the position records; static records pass through. `extra_outages`
/// (e.g. receiver disconnects) are merged into the detected ones.
Validated run_validate(std::span<const io::Record> records, const geo::PortGeometry& port,
                       const validate::ValidatorConfig& cfg,
                       std::span<const validate::Outage> extra_outages = {}, int jobs = 1);
/// Validated messages in input order, then statics, then outages.
std::vector<std::string> validated_jsonl(const Validated& v);
/// Reads decoded or validated JSONL. Position records are not accepted here.
/// Throws Error{CorruptLine}.
Validated parse_validated_jsonl(std::span<const std::string> lines);

// --- voyages ----------------------------------------------------------------

struct VoyageOptions {
  voyage::SplitRules rules;
  voyage::AreaFilter area;
  double cell_deg = 0.05;
};

struct VoyageSet {
  std::vector<voyage::Voyage> voyages;
  std::vector<validate::Outage> outages;
};

VoyageSet run_voyages(const Validated& v, const VoyageOptions& opts = {});
/// Voyages, then outages.
std::vector<std::string> voyages_jsonl(const VoyageSet& v);
VoyageSet parse_voyages_jsonl(std::span<const std::string> lines);

// --- metrics ----------------------------------------------------------------

struct MetricsOptions {
  const geo::PortGeometry* port = nullptr;
  std::optional<metrics::GroundTruthCalls> truth;
  std::optional<std::uint32_t> vessel;
  metrics::Statistic weekly = metrics::Statistic::Mean;
  metrics::TurnaroundOptions turnaround;
};

struct VoyageMetrics {
  std::uint32_t mmsi = 0;
  Timestamp arrival{};
  Timestamp departure{};
  metrics::VesselCategory category = metrics::VesselCategory::Other;
  std::optional<metrics::TurnaroundRecord> turnaround;
  Duration anchorage_wait{0};
  metrics::MovementStats movement;
  bool gap_flagged = false;
};

struct MetricsReport {
  std::vector<VoyageMetrics> voyages;
  metrics::DailyTable daily;
  std::set<Date> missing_dates;  // dates touched by global outages
  std::optional<metrics::MaeReport> mae;
  std::vector<metrics::TurnaroundRecord> schedule;  // only with a vessel filter
  metrics::Statistic weekly_statistic = metrics::Statistic::Mean;
  std::map<std::string, double> weekly_turnaround;
  std::map<std::string, double> weekly_anchorage_wait;
};

/// Throws Error{EmptyOverlap} when ground truth shares no date with the data.
MetricsReport run_metrics(const VoyageSet& set, const MetricsOptions& opts);

/// Writes metrics.json, voyages_metrics.csv, daily_arrivals.csv, weekly.csv and,
/// with a vessel filter, schedule.csv into `dir`. Returns the written paths.
std::vector<std::string> write_metrics(const MetricsReport& r, const std::string& dir);

std::string daily_csv(const metrics::DailyTable& t);
std::string schedule_csv(std::span<const metrics::TurnaroundRecord> rows);
io::Json metrics_json(const MetricsReport& r);

}  // namespace aisport::pipeline
