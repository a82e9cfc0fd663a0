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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aisport::geo {

inline constexpr double kEarthRadiusM = 6'371'000.0;
inline constexpr double kPi = 3.14159265358979323846;

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;

  bool operator==(const LatLon&) const = default;
};

/// Heading as a point on the unit circle.
struct EncodedHeading {
  double s = 0.0;
  double c = 1.0;
};

/// Throws Error{UnavailableHeading} for a missing heading.
EncodedHeading encode_heading(std::optional<double> heading_deg);
EncodedHeading encode_heading(double heading_deg) noexcept;

/// Great-circle distance in meters.
double haversine_m(LatLon a, LatLon b) noexcept;

struct PlanarPoint {
  double x = 0.0;  // meters east
  double y = 0.0;  // meters north
};

/// Largest latitude offset accepted by project_local.
inline constexpr double kMaxProjectionExtentDeg = 2.0;

/// Equirectangular projection around `origin`. Throws Error{OutOfExtent}.
PlanarPoint project_local(LatLon origin, LatLon p);

enum class AreaKind { Anchorage, Terminal };

std::string_view to_string(AreaKind kind) noexcept;
std::optional<AreaKind> parse_area_kind(std::string_view text) noexcept;

/// Simple lat/lon ring, implicitly closed, no holes.
struct Polygon {
  std::string name;
  AreaKind kind = AreaKind::Anchorage;
  std::vector<LatLon> ring;
};

/// Throws Error{InvalidPolygon} on fewer than three vertices, repeated
/// consecutive vertices or a self-intersecting ring.
void validate_polygon(const Polygon& poly);

/// Even-odd rule in lat/lon space. Points on an edge or vertex count as inside.
bool contains(const Polygon& poly, LatLon p) noexcept;

struct PortGeometry {
  std::string name;
  std::vector<Polygon> polygons;

  bool empty() const noexcept { return polygons.empty(); }
  /// First polygon of `kind` containing `p`, or nullptr.
  const Polygon* find(AreaKind kind, LatLon p) const noexcept;
  const Polygon* terminal_at(LatLon p) const noexcept { return find(AreaKind::Terminal, p); }
  const Polygon* anchorage_at(LatLon p) const noexcept { return find(AreaKind::Anchorage, p); }
};

/// Parses a GeoJSON FeatureCollection of Polygon features with `name` and
/// `kind` properties. Throws Error{MalformedGeoJson} or Error{InvalidPolygon}.
PortGeometry parse_port_geojson(std::string_view text, std::string port_name = {});
PortGeometry load_port_geojson(const std::string& path);
std::string to_geojson(const PortGeometry& port);

}  // namespace aisport::geo
