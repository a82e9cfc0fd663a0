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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aisport/geo.hpp"
#include "aisport/time.hpp"
#include "aisport/validate.hpp"
#include "aisport/voyage.hpp"

namespace aisport::metrics {

using voyage::Voyage;

enum class VesselCategory { Cargo = 0, Tanker = 1, Passenger = 2, Other = 3 };
inline constexpr std::array<VesselCategory, 4> kAllCategories = {
    VesselCategory::Cargo, VesselCategory::Tanker, VesselCategory::Passenger, VesselCategory::Other};

/// Cargo 70-79, tanker 80-89, passenger 40-49 and 60-69, everything else
/// (including a missing static report) other.
VesselCategory categorize(std::optional<int> ship_type) noexcept;
std::string_view to_string(VesselCategory c) noexcept;
std::optional<VesselCategory> parse_category(std::string_view text) noexcept;

struct TurnaroundRecord {
  std::uint32_t mmsi = 0;
  std::optional<std::string> terminal_name;
  Timestamp arrival{};    // start of the first moored phase
  Timestamp departure{};  // end of the last moored phase of that terminal stay

  Duration turnaround() const noexcept { return departure - arrival; }
  bool operator==(const TurnaroundRecord&) const = default;
};

struct TurnaroundOptions {
  /// Moored phases separated by less underway time than this are one stay...
  Duration merge_gap = std::chrono::hours{1};
  /// ...provided they are at the same terminal. Without polygons, "same
  /// terminal" means phase locations within this distance.
  double same_berth_m = 1000.0;
};

/// nullopt when the voyage has no moored phase.
std::optional<TurnaroundRecord> turnaround(const Voyage& v, const geo::PortGeometry* port = nullptr,
                                           const TurnaroundOptions& opts = {});

/// Anchored time before the first moored phase (all anchored time if the
/// vessel never moors).
Duration anchorage_wait(const Voyage& v);

struct MovementStats {
  Duration underway{0};
  std::optional<double> mean_sog;  // absent without underway speed samples

  bool operator==(const MovementStats&) const = default;
};

MovementStats movement_stats(const Voyage& v);

using CategoryCounts = std::array<std::size_t, 4>;

/// Arrivals per UTC date and vessel category.
struct DailyTable {
  std::map<Date, CategoryCounts> rows;

  std::size_t count(Date d, VesselCategory c) const;
  std::size_t total(Date d) const;
  bool operator==(const DailyTable&) const = default;
};

/// Counts voyages by the date of their first in-area message. With a range,
/// every date in [from, to] gets a row and arrivals outside it are ignored.
DailyTable daily_arrivals(std::span<const Voyage> voyages, std::optional<Date> from = std::nullopt,
                          std::optional<Date> to = std::nullopt);
/// As above, taking ship types from `ship_types` (MMSI -> AIS ship type).
DailyTable daily_arrivals(std::span<const Voyage> voyages,
                          const std::map<std::uint32_t, int>& ship_types,
                          std::optional<Date> from = std::nullopt,
                          std::optional<Date> to = std::nullopt);

/// Port-side arrival records.
struct GroundTruthCalls {
  DailyTable table;
  /// Categories the records cover; MAE is computed over these.
  std::vector<VesselCategory> categories;
};

/// Reads `date,category,arrivals` (count mode) or `timestamp,mmsi,category`
/// (event mode). Event timestamps are local time `local_offset` ahead of UTC.
/// Throws Error{MalformedGroundTruth}.
GroundTruthCalls parse_ground_truth_csv(std::string_view text, Duration local_offset = Duration{0});
GroundTruthCalls load_ground_truth_csv(const std::string& path, Duration local_offset = Duration{0});

struct MaeReport {
  std::map<VesselCategory, double> per_category;
  double macro = 0.0;
  std::vector<Date> dates;  // compared dates
};

/// Mean absolute error of daily counts per category over the dates both tables
/// cover, skipping `excluded`. Throws Error{EmptyOverlap}.
MaeReport arrivals_mae(const DailyTable& predicted, const GroundTruthCalls& truth,
                       const std::set<Date>& excluded = {});

/// UTC dates touched by a global outage.
std::set<Date> dates_with_missing_data(std::span<const validate::Outage> outages);

/// Turnaround records of one vessel's voyages in arrival order.
std::vector<TurnaroundRecord> schedule_table(std::span<const Voyage> voyages,
                                             const geo::PortGeometry* port = nullptr,
                                             const TurnaroundOptions& opts = {});

enum class Statistic { Mean, Median, Count };

std::string_view to_string(Statistic s) noexcept;
std::optional<Statistic> parse_statistic(std::string_view text) noexcept;

struct DurationSample {
  Timestamp when{};
  Duration value{0};
};

/// Per ISO week of `when`: mean or median of `value` in hours, or the number
/// of samples.
std::map<std::string, double> weekly_aggregate(std::span<const DurationSample> samples,
                                               Statistic statistic);

}  // namespace aisport::metrics
