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

#include "aisport/geo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aisport/error.hpp"

namespace aisport::geo {

namespace {

constexpr double kDegToRad = kPi / 180.0;
// Distance below which a point is considered to lie on an edge (degrees, ~0.1 mm).
constexpr double kEdgeTolerance = 1e-9;

double cross(LatLon o, LatLon a, LatLon b) noexcept {
  return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
}

bool within_box(LatLon a, LatLon b, LatLon p, double tol) noexcept {
  return p.lon >= std::min(a.lon, b.lon) - tol && p.lon <= std::max(a.lon, b.lon) + tol &&
         p.lat >= std::min(a.lat, b.lat) - tol && p.lat <= std::max(a.lat, b.lat) + tol;
}

bool on_segment(LatLon a, LatLon b, LatLon p) noexcept {
  const double len = std::hypot(b.lon - a.lon, b.lat - a.lat);
  if (len == 0.0) {
    return std::hypot(p.lon - a.lon, p.lat - a.lat) <= kEdgeTolerance;
  }
  return std::abs(cross(a, b, p)) / len <= kEdgeTolerance && within_box(a, b, p, kEdgeTolerance);
}

bool segments_intersect(LatLon p1, LatLon p2, LatLon q1, LatLon q2) noexcept {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return (d1 == 0 && within_box(q1, q2, p1, 0)) || (d2 == 0 && within_box(q1, q2, p2, 0)) ||
         (d3 == 0 && within_box(p1, p2, q1, 0)) || (d4 == 0 && within_box(p1, p2, q2, 0));
}

}  // namespace

EncodedHeading encode_heading(double heading_deg) noexcept {
  const double angle = 2.0 * kPi * heading_deg / 360.0;
  return {std::sin(angle), std::cos(angle)};
}

EncodedHeading encode_heading(std::optional<double> heading_deg) {
  if (!heading_deg) {
    throw Error(ErrorCode::UnavailableHeading, "heading not available");
  }
  return encode_heading(*heading_deg);
}

double haversine_m(LatLon a, LatLon b) noexcept {
  const double dlat = (b.lat - a.lat) * kDegToRad;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double sdlat = std::sin(dlat / 2.0);
  const double sdlon = std::sin(dlon / 2.0);
  const double h =
      sdlat * sdlat + std::cos(a.lat * kDegToRad) * std::cos(b.lat * kDegToRad) * sdlon * sdlon;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

PlanarPoint project_local(LatLon origin, LatLon p) {
  const double dlat = p.lat - origin.lat;
  if (!(std::abs(dlat) < kMaxProjectionExtentDeg)) {
    throw Error(ErrorCode::OutOfExtent, "point too far from projection origin");
  }
  double dlon = p.lon - origin.lon;
  if (dlon > 180.0) {
    dlon -= 360.0;
  } else if (dlon < -180.0) {
    dlon += 360.0;
  }
  return {kEarthRadiusM * dlon * kDegToRad * std::cos(origin.lat * kDegToRad),
          kEarthRadiusM * dlat * kDegToRad};
}

std::string_view to_string(AreaKind kind) noexcept {
  return kind == AreaKind::Terminal ? "terminal" : "anchorage";
}

std::optional<AreaKind> parse_area_kind(std::string_view text) noexcept {
  if (text == "anchorage") return AreaKind::Anchorage;
  if (text == "terminal") return AreaKind::Terminal;
  return std::nullopt;
}

void validate_polygon(const Polygon& poly) {
  const auto& ring = poly.ring;
  const std::size_t n = ring.size();
  if (n < 3) {
    throw Error(ErrorCode::InvalidPolygon, "'" + poly.name + "' has fewer than 3 vertices");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (ring[i] == ring[(i + 1) % n]) {
      throw Error(ErrorCode::InvalidPolygon, "'" + poly.name + "' repeats a vertex");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Adjacent edges share a vertex by construction.
      if (j == i + 1 || (i == 0 && j == n - 1)) {
        continue;
      }
      if (segments_intersect(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n])) {
        throw Error(ErrorCode::InvalidPolygon, "'" + poly.name + "' is self-intersecting");
      }
    }
  }
}

bool contains(const Polygon& poly, LatLon p) noexcept {
  const auto& ring = poly.ring;
  const std::size_t n = ring.size();
  if (n < 3) {
    return false;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const LatLon a = ring[j];
    const LatLon b = ring[i];
    if (on_segment(a, b, p)) {
      return true;
    }
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double lon_at = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
      if (p.lon < lon_at) {
        inside = !inside;
      }
    }
  }
  return inside;
}

const Polygon* PortGeometry::find(AreaKind kind, LatLon p) const noexcept {
  for (const auto& poly : polygons) {
    if (poly.kind == kind && contains(poly, p)) {
      return &poly;
    }
  }
  return nullptr;
}

PortGeometry parse_port_geojson(std::string_view text, std::string port_name) {
  using nlohmann::json;
  auto fail = [](const std::string& why) -> void {
    throw Error(ErrorCode::MalformedGeoJson, why);
  };

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    fail("expected a FeatureCollection");
  }

  PortGeometry port;
  port.name = std::move(port_name);
  if (port.name.empty() && doc.contains("name") && doc["name"].is_string()) {
    port.name = doc["name"].get<std::string>();
  }

  for (const auto& feature : doc["features"]) {
    if (!feature.is_object() || !feature.contains("geometry") ||
        !feature.contains("properties") || !feature["properties"].is_object()) {
      fail("feature without geometry or properties");
    }
    const auto& props = feature["properties"];
    if (!props.contains("name") || !props["name"].is_string() || !props.contains("kind") ||
        !props["kind"].is_string()) {
      fail("feature properties need string 'name' and 'kind'");
    }
    const auto kind = parse_area_kind(props["kind"].get<std::string>());
    if (!kind) {
      fail("kind must be \"anchorage\" or \"terminal\"");
    }
    const auto& geom = feature["geometry"];
    if (!geom.is_object() || geom.value("type", "") != "Polygon" || !geom.contains("coordinates") ||
        !geom["coordinates"].is_array()) {
      fail("geometry must be a Polygon");
    }
    const auto& rings = geom["coordinates"];
    if (rings.size() != 1) {
      fail("polygons with holes are not supported");
    }

    Polygon poly;
    poly.name = props["name"].get<std::string>();
    poly.kind = *kind;
    for (const auto& pos : rings[0]) {
      if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
        fail("coordinate must be [lon, lat]");
      }
      poly.ring.push_back({pos[1].get<double>(), pos[0].get<double>()});
    }
    if (poly.ring.size() > 1 && poly.ring.front() == poly.ring.back()) {
      poly.ring.pop_back();
    }
    validate_polygon(poly);
    port.polygons.push_back(std::move(poly));
  }
  return port;
}

PortGeometry load_port_geojson(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::MissingFile, "cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_port_geojson(ss.str());
}

std::string to_geojson(const PortGeometry& port) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["type"] = "FeatureCollection";
  if (!port.name.empty()) {
    doc["name"] = port.name;
  }
  doc["features"] = ordered_json::array();
  for (const auto& poly : port.polygons) {
    ordered_json ring = ordered_json::array();
    for (const auto& v : poly.ring) {
      ring.push_back({v.lon, v.lat});
    }
    ring.push_back({poly.ring.front().lon, poly.ring.front().lat});
    ordered_json feature;
    feature["type"] = "Feature";
    feature["properties"] = {{"name", poly.name}, {"kind", std::string(to_string(poly.kind))}};
    feature["geometry"] = {{"type", "Polygon"}, {"coordinates", ordered_json::array({ring})}};
    doc["features"].push_back(std::move(feature));
  }
  return doc.dump(2);
}

}  // namespace aisport::geo
