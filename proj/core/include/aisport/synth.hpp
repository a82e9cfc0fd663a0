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
#include <string>
#include <string_view>
#include <vector>

#include "aisport/geo.hpp"
#include "aisport/metrics.hpp"
#include "aisport/time.hpp"
#include "aisport/voyage.hpp"

// Synthetic port traffic with known ground truth.
namespace aisport::synth {

/// One call of a vessel at the port.
struct Visit {
  /// Time the vessel enters the port area. Ignored when berth_arrival is set.
  Timestamp entry{};
  /// When set, entry is back-computed so the vessel reaches its berth then.
  std::optional<Timestamp> berth_arrival;
  /// Anchored stops before berthing, in order.
  std::vector<Duration> anchorages;
  /// Time at the berth; 0 skips the berth (anchorage-only call).
  Duration moored{0};
  /// Terminal polygon name; empty picks one by vessel category.
  std::string terminal;
};

struct VesselSpec {
  std::uint32_t mmsi = 0;
  int ship_type = 0;
  std::string name;
  std::vector<Visit> visits;
};

/// Random arrivals at a constant daily rate.
struct PoissonTraffic {
  double per_day = 54.0;
  int days = 1;
  std::uint32_t mmsi_base = 240000000;
  double cargo = 0.35;
  double tanker = 0.15;
  double passenger = 0.35;
  double other = 0.15;
  double anchor_probability = 0.5;
  double anchor_min_h = 3.0;
  double anchor_max_h = 12.0;
  double moored_min_h = 4.0;
  double moored_max_h = 24.0;
};

/// Daily service: berth at `berth_arrival` each day, leave at `departure` the
/// next morning. A day listed in `skip` cancels that morning's departure (the
/// vessel stays a further day and the next afternoon call does not happen).
struct FerryService {
  std::uint32_t mmsi = 0;
  int ship_type = 60;
  std::string name = "FERRY";
  int days = 7;
  Duration berth_arrival = std::chrono::hours{14} + std::chrono::minutes{10};  // time of day
  Duration departure = std::chrono::hours{4} + std::chrono::minutes{20};       // time of day
  std::vector<int> skip;  // 0-based index of the departure (day the call began)
  std::string terminal;
};

/// Receiver blackout. Without mmsi every vessel is silent.
struct OutageSpec {
  Timestamp start{};
  Timestamp end{};
  std::optional<std::uint32_t> mmsi;
};

struct Scenario {
  std::uint64_t seed = 1;
  Timestamp start{};
  geo::PortGeometry port;
  Duration underway_cadence{10};
  Duration stopped_cadence{180};
  double speed_kn = 10.0;
  /// Per-message probability that the reported status is wrong.
  double error_rate = 0.0;
  /// Anchored heading drift range, degrees per hour.
  double rotation_min_deg_h = 10.0;
  double rotation_max_deg_h = 60.0;
  bool emit_static = true;
  std::vector<VesselSpec> vessels;
  std::optional<PoissonTraffic> traffic;
  std::vector<FerryService> ferries;
  std::vector<OutageSpec> outages;
};

/// Square-ish harbour with one anchorage and three terminals.
geo::PortGeometry builtin_port();

/// JSON scenario. "port" is "builtin", a GeoJSON object or a GeoJSON path
/// (relative to `base_dir`). Throws Error{InvalidScenario}.
Scenario parse_scenario(std::string_view json_text, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);
/// Throws Error{InvalidScenario}.
void check_scenario(const Scenario& s);

struct TruthMessage {
  std::uint32_t mmsi = 0;
  Timestamp timestamp{};
  std::uint8_t true_navstat = 0;
  std::uint8_t reported_navstat = 0;
};

struct TruthPhase {
  std::uint32_t mmsi = 0;
  int visit = 0;
  voyage::PhaseKind kind = voyage::PhaseKind::Underway;
  Timestamp start{};
  Timestamp end{};
};

struct TruthVisit {
  std::uint32_t mmsi = 0;
  int visit = 0;
  int ship_type = 0;
  Timestamp entry{};  // first emitted message
  Timestamp exit{};   // last emitted message
  Duration anchorage_wait{0};
  std::optional<Timestamp> berth_arrival;
  std::optional<Timestamp> berth_departure;
  Duration underway{0};
  std::optional<double> mean_underway_sog;
  std::size_t messages = 0;
};

struct TruthLog {
  std::vector<TruthMessage> messages;  // emitted position reports, output order
  std::vector<TruthPhase> phases;
  std::vector<TruthVisit> visits;
  metrics::DailyTable arrivals;  // by UTC date of entry
};

struct Output {
  std::vector<std::string> nmea;
  TruthLog truth;
};

/// Deterministic for a given scenario. Throws Error{InvalidScenario}.
Output generate(const Scenario& s);

/// One JSON object per line: phases, visits, daily arrivals, then messages.
std::vector<std::string> truth_jsonl(const TruthLog& t);

}  // namespace aisport::synth
