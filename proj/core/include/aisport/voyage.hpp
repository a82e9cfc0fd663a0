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
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aisport/geo.hpp"
#include "aisport/time.hpp"
#include "aisport/validate.hpp"

namespace aisport::voyage {

using validate::ValidatedMessage;

enum class PhaseKind { Underway, Anchored, Moored };

std::string_view to_string(PhaseKind k) noexcept;
std::optional<PhaseKind> parse_phase_kind(std::string_view text) noexcept;
/// 1 -> anchored, 5 -> moored, anything else -> underway.
PhaseKind phase_kind_of(std::uint8_t corrected_navstat) noexcept;

/// A maximal run of messages with the same corrected status. Phases tile the
/// voyage: each ends where the next begins, the last ends at the final message.
struct Phase {
  PhaseKind kind = PhaseKind::Underway;
  Timestamp start{};
  Timestamp end{};
  std::optional<double> mean_sog;
  geo::LatLon location;
  std::size_t messages = 0;
  std::size_t sog_samples = 0;

  Duration duration() const noexcept { return end - start; }
  bool operator==(const Phase&) const = default;
};

/// All movements of one vessel inside the port area for a single arrival.
struct Voyage {
  std::uint32_t mmsi = 0;
  Timestamp arrival{};
  Timestamp departure{};
  std::size_t message_count = 0;
  /// Empty for voyages read back from JSONL.
  std::vector<ValidatedMessage> messages;
  std::vector<Phase> phases;
  bool gap_flagged = false;
  std::optional<int> ship_type;

  Duration duration() const noexcept { return departure - arrival; }
  bool operator==(const Voyage&) const = default;
};

struct SplitRules {
  Duration max_gap = std::chrono::hours{24};
  Duration move_gap = std::chrono::hours{5};
  double move_m = 100.0;
};

/// True when consecutive messages `a` -> `b` of one vessel start a new voyage:
/// the gap exceeds 5 h while the vessel moved more than 100 m, or the gap
/// exceeds 24 h.
bool splits(const ValidatedMessage& a, const ValidatedMessage& b,
            const SplitRules& rules = {}) noexcept;

/// Groups messages by MMSI and time into voyages (sorted by mmsi, arrival).
/// Input order does not matter; every message lands in exactly one voyage.
std::vector<Voyage> extract_voyages(std::vector<ValidatedMessage> messages,
                                    const SplitRules& rules = {});

/// Fills `phases` from runs of equal corrected status.
Voyage segment_phases(Voyage v);

/// Marks the voyage when an outage overlapping it hides movement: the vessel
/// moved more than `stop_move_m` across the outage or was not stopped on both
/// sides of it.
Voyage flag_gaps(Voyage v, std::span<const validate::Outage> outages, double cell_deg = 0.05,
                 double stop_move_m = 100.0);

/// Region of interest for voyage extraction.
class AreaFilter {
 public:
  struct Circle {
    geo::LatLon center;
    double radius_m = 0.0;
  };
  struct Box {
    double min_lat, min_lon, max_lat, max_lon;
  };

  AreaFilter() = default;
  static AreaFilter circle(geo::LatLon center, double radius_m) { return AreaFilter{Circle{center, radius_m}}; }
  static AreaFilter box(double min_lat, double min_lon, double max_lat, double max_lon) {
    return AreaFilter{Box{min_lat, min_lon, max_lat, max_lon}};
  }
  static AreaFilter polygon(geo::Polygon p) { return AreaFilter{std::move(p)}; }

  /// "none", "circle:LAT,LON,RADIUS_M", "bbox:MINLAT,MINLON,MAXLAT,MAXLON" or
  /// "geojson:PATH" (first polygon of the file). Throws Error{InvalidConfig}.
  static AreaFilter parse(std::string_view text);

  bool contains(geo::LatLon p) const noexcept;
  std::string describe() const;

 private:
  using Shape = std::variant<std::monostate, Circle, Box, geo::Polygon>;
  explicit AreaFilter(Shape s) : shape_(std::move(s)) {}
  Shape shape_;
};

/// Drops messages outside `area`.
std::vector<ValidatedMessage> filter_area(std::span<const ValidatedMessage> messages,
                                          const AreaFilter& area);

/// Assigns ship types from static reports (latest report per MMSI wins).
void attach_ship_types(std::vector<Voyage>& voyages, const std::map<std::uint32_t, int>& ship_types);

}  // namespace aisport::voyage
