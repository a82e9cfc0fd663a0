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

#include <cmath>

#include "aisport/error.hpp"
#include "aisport/validate.hpp"

namespace aisport::validate {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Geofence: return "geofence";
    case Method::Kinematic: return "kinematic";
    case Method::Knn: return "knn";
    case Method::Reported: return "reported";
  }
  return "reported";
}

std::optional<Method> parse_method(std::string_view text) noexcept {
  if (text == "geofence") return Method::Geofence;
  if (text == "kinematic") return Method::Kinematic;
  if (text == "knn") return Method::Knn;
  if (text == "reported") return Method::Reported;
  return std::nullopt;
}

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::Geofence: return "geofence";
    case Strategy::Kinematic: return "kinematic";
    case Strategy::Knn: return "knn";
    case Strategy::Ensemble: return "ensemble";
  }
  return "ensemble";
}

std::optional<Strategy> parse_strategy(std::string_view text) noexcept {
  if (text == "geofence") return Strategy::Geofence;
  if (text == "kinematic") return Strategy::Kinematic;
  if (text == "knn") return Strategy::Knn;
  if (text == "ensemble") return Strategy::Ensemble;
  return std::nullopt;
}

bool is_stopped(const PositionReport& r, double threshold_kn) {
  if (!r.sog) {
    throw Error(ErrorCode::UnavailableSpeed, "speed over ground not available");
  }
  return *r.sog < threshold_kn;
}

std::uint8_t classify_geofence(const PositionReport& r, const geo::PortGeometry& port,
                               double threshold_kn) {
  if (!is_stopped(r, threshold_kn)) {
    return codec::navstat::kUnderwayEngine;
  }
  const geo::LatLon p{r.lat, r.lon};
  if (port.terminal_at(p) != nullptr) {
    return codec::navstat::kMoored;
  }
  if (port.anchorage_at(p) != nullptr) {
    return codec::navstat::kAtAnchor;
  }
  return codec::navstat::kUnderwayEngine;
}

double resultant_length(std::span<const double> headings_deg) noexcept {
  if (headings_deg.empty()) {
    return 0.0;
  }
  double s = 0.0;
  double c = 0.0;
  for (const double h : headings_deg) {
    const auto e = geo::encode_heading(h);
    s += e.s;
    c += e.c;
  }
  const auto n = static_cast<double>(headings_deg.size());
  return std::hypot(s / n, c / n);
}

std::uint8_t classify_kinematic(std::span<const PositionReport> window,
                                const KinematicParams& params) {
  if (window.empty()) {
    throw Error(ErrorCode::InsufficientWindow, "empty window");
  }
  const PositionReport& last = window.back();
  if (!is_stopped(last, params.stopped_threshold_kn)) {
    return codec::navstat::kUnderwayEngine;
  }

  // Walk back over the trailing stopped run until it covers the window.
  const Timestamp from = last.timestamp - params.window;
  std::size_t first = window.size() - 1;
  bool covered = false;
  while (true) {
    if (window[first].timestamp <= from) {
      covered = true;
      break;
    }
    if (first == 0) {
      break;
    }
    const PositionReport& prev = window[first - 1];
    if (!prev.sog || !(*prev.sog < params.stopped_threshold_kn)) {
      break;
    }
    --first;
  }
  if (!covered) {
    throw Error(ErrorCode::InsufficientWindow, "stopped run shorter than the rotation window");
  }

  std::vector<double> headings;
  std::size_t samples = 0;
  for (std::size_t i = first; i < window.size(); ++i) {
    if (window[i].timestamp < from) {
      continue;
    }
    ++samples;
    if (window[i].heading) {
      headings.push_back(static_cast<double>(*window[i].heading));
    }
  }
  if (static_cast<double>(headings.size()) < params.min_heading_fraction * samples ||
      headings.empty()) {
    throw Error(ErrorCode::UnavailableHeading, "too few samples carry a heading");
  }
  return resultant_length(headings) < params.rbar_threshold ? codec::navstat::kAtAnchor
                                                            : codec::navstat::kMoored;
}

}  // namespace aisport::validate
