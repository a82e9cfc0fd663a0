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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aisport/codec.hpp"
#include "aisport/geo.hpp"
#include "aisport/time.hpp"

namespace aisport::validate {

using codec::PositionReport;

/// Which classifier produced a corrected status.
enum class Method { Geofence, Kinematic, Knn, Reported };

/// Correction strategy selected in the config file.
enum class Strategy { Geofence, Kinematic, Knn, Ensemble };

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view text) noexcept;
std::string_view to_string(Strategy s) noexcept;
std::optional<Strategy> parse_strategy(std::string_view text) noexcept;

struct ValidatedMessage {
  PositionReport report;
  std::uint8_t corrected_navstat = codec::navstat::kUnderwayEngine;
  Method method = Method::Reported;
  bool agreed_with_reported = false;
  bool gap_flag = false;

  bool operator==(const ValidatedMessage&) const = default;
};

// ---------------------------------------------------------------------------
// Outages

enum class OutageScope { Vessel, Area, Global };

std::string_view to_string(OutageScope s) noexcept;
std::optional<OutageScope> parse_outage_scope(std::string_view text) noexcept;

/// Grid cell index of a square lat/lon grid.
struct GridCell {
  int row = 0;
  int col = 0;

  auto operator<=>(const GridCell&) const = default;
};

GridCell cell_of(geo::LatLon p, double cell_deg) noexcept;

struct Outage {
  OutageScope scope = OutageScope::Global;
  Timestamp start{};
  Timestamp end{};
  std::optional<std::uint32_t> mmsi;  // vessel scope
  std::optional<GridCell> cell;       // area scope

  Duration length() const noexcept { return end - start; }
  bool overlaps(Timestamp a, Timestamp b) const noexcept { return start < b && end > a; }
  bool operator==(const Outage&) const = default;
};

struct OutageConfig {
  Duration global_gap = std::chrono::minutes{15};
  Duration vessel_gap = std::chrono::hours{1};
  /// A vessel or cell counts as "regularly reporting" below this interval.
  Duration regular_cadence = std::chrono::minutes{5};
  Duration area_gap = std::chrono::hours{1};
  double cell_deg = 0.05;
  /// Distinct vessels heard in a cell both before and after its silence for it
  /// to count as an area outage.
  int area_min_vessels = 2;

  bool operator==(const OutageConfig&) const = default;
};

/// Global, area and vessel outages in a time-ordered stream. Time covered by
/// a global outage is not counted again towards area or vessel silences, and
/// area silence is not counted again towards vessels in that cell.
std::vector<Outage> detect_outages(std::span<const PositionReport> stream, Timestamp now,
                                   const OutageConfig& cfg = {});

// ---------------------------------------------------------------------------
// Per-report classifiers

inline constexpr double kDefaultStoppedThresholdKn = 0.5;

/// sog < threshold. Throws Error{UnavailableSpeed} when sog is missing.
bool is_stopped(const PositionReport& r, double threshold_kn = kDefaultStoppedThresholdKn);

/// 5 when stopped inside a terminal, 1 when stopped inside an anchorage, else 0.
/// Throws Error{UnavailableSpeed}.
std::uint8_t classify_geofence(const PositionReport& r, const geo::PortGeometry& port,
                               double threshold_kn = kDefaultStoppedThresholdKn);

struct KinematicParams {
  double stopped_threshold_kn = kDefaultStoppedThresholdKn;
  Duration window = std::chrono::hours{3};
  double rbar_threshold = 0.98;
  double min_heading_fraction = 0.5;
};

/// Length of the mean unit vector of the headings (degrees). 1 for a constant
/// heading, near 0 for headings spread around the circle.
double resultant_length(std::span<const double> headings_deg) noexcept;

/// Classifies the last report of a time-ordered single-vessel window: 0 when
/// moving; otherwise 1 (rotating, anchored) or 5 (steady, moored) from the
/// resultant length of headings over the trailing stopped samples.
/// Throws UnavailableSpeed, InsufficientWindow or UnavailableHeading.
std::uint8_t classify_kinematic(std::span<const PositionReport> window,
                                const KinematicParams& params = {});

// ---------------------------------------------------------------------------
// k-nearest-neighbour classifier over projected positions

struct TrainingPoint {
  geo::LatLon position;
  std::uint8_t label = codec::navstat::kMoored;  // 1 or 5
};

struct LabeledPoint {
  geo::PlanarPoint xy;
  std::uint8_t label = codec::navstat::kMoored;
};

/// Immutable after construction; safe to share between threads.
class KnnModel {
 public:
  /// Throws TooFewPoints when k exceeds the training set, InvalidConfig for
  /// k < 1 or labels other than 1/5.
  KnnModel(std::span<const TrainingPoint> training, int k);

  int k() const noexcept { return k_; }
  geo::LatLon origin() const noexcept { return origin_; }
  std::size_t size() const noexcept { return points_.size(); }
  /// Training points in input order, projected around origin().
  const std::vector<LabeledPoint>& points() const noexcept { return points_; }

  /// Indices (into points()) of the k nearest training points ordered by
  /// (squared distance, index).
  std::vector<std::uint32_t> nearest(geo::PlanarPoint q) const;
  /// Majority label of the k nearest points; ties go to 1.
  std::uint8_t vote(geo::PlanarPoint q) const;

 private:
  void build(std::uint32_t lo, std::uint32_t hi, int depth);
  struct Heap;
  void search(geo::PlanarPoint q, std::uint32_t lo, std::uint32_t hi, int depth, Heap& heap) const;

  int k_;
  geo::LatLon origin_;
  std::vector<LabeledPoint> points_;
  std::vector<std::uint32_t> order_;  // kd-tree permutation of point indices
  std::vector<double> split_;         // split coordinate of the node whose midpoint is i
};

/// Fits on raw training points; origin is their centroid.
KnnModel fit_knn(std::span<const TrainingPoint> training, int k);
/// Fits on the stopped messages of `history` whose reported status is 1 or 5.
KnnModel fit_knn(std::span<const ValidatedMessage> history, int k,
                 double threshold_kn = kDefaultStoppedThresholdKn);

/// 0 when moving, else the model's vote at the report's position.
/// Throws UnavailableSpeed, OutOfExtent.
std::uint8_t classify_knn(const KnnModel& model, const PositionReport& r,
                          double threshold_kn = kDefaultStoppedThresholdKn);

// ---------------------------------------------------------------------------
// Stream validation

struct ValidatorConfig {
  Strategy method = Strategy::Ensemble;
  double stopped_threshold_kn = kDefaultStoppedThresholdKn;
  int knn_k = 300;
  double rotation_window_h = 3.0;
  double rotation_rbar = 0.98;
  int hysteresis_msgs = 2;
  double hysteresis_min = 10.0;
  double min_heading_fraction = 0.5;
  OutageConfig outages;
  /// CLI exit status 1 when the agreement rate drops below this (0 disables).
  double min_agreement = 0.0;

  KinematicParams kinematic() const;
  bool operator==(const ValidatorConfig&) const = default;
};

/// "key = value" lines, '#' comments. Throws Error{InvalidConfig}.
ValidatorConfig parse_config(std::string_view text);
ValidatorConfig load_config(const std::string& path);
/// Canonical text form; parse_config(to_text(c)) == c.
std::string to_text(const ValidatorConfig& cfg);

struct ValidationSummary {
  std::size_t messages = 0;
  std::size_t agreed = 0;
  std::size_t by_method[4] = {0, 0, 0, 0};
  std::size_t gap_flagged = 0;
  bool knn_fitted = false;

  double agreement_rate() const noexcept {
    return messages == 0 ? 1.0 : static_cast<double>(agreed) / static_cast<double>(messages);
  }
};

struct ValidationResult {
  /// Aligned with the input: messages[i] corresponds to stream[i].
  std::vector<ValidatedMessage> messages;
  std::vector<Outage> outages;
  ValidationSummary summary;
};

/// Corrects every report with the configured strategy, applies hysteresis per
/// vessel and marks messages that follow an outage. Never drops a message.
/// Throws InvalidConfig (geofence strategy without polygons) or TooFewPoints
/// (knn strategy with too little training data).
ValidationResult validate_stream(std::span<const PositionReport> stream,
                                 const geo::PortGeometry& port, const ValidatorConfig& cfg,
                                 int jobs = 1);

}  // namespace aisport::validate
