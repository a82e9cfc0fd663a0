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

#include "aisport/voyage.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <tuple>

#include "aisport/error.hpp"

namespace aisport::voyage {

namespace {

// Total order on messages so sorting is independent of input order even when
// one vessel sends several messages within the same second.
bool message_less(const ValidatedMessage& a, const ValidatedMessage& b) {
  const auto& x = a.report;
  const auto& y = b.report;
  auto key = [](const ValidatedMessage& m) {
    const auto& r = m.report;
    return std::make_tuple(r.mmsi, r.timestamp, r.lat, r.lon, r.sog.value_or(-1.0),
                           r.cog.value_or(-1.0), r.heading.value_or(-1), r.navstat,
                           r.rot.value_or(-1000), r.msg_type, m.corrected_navstat,
                           static_cast<int>(m.method), m.gap_flag);
  };
  if (x.mmsi != y.mmsi) return x.mmsi < y.mmsi;
  if (x.timestamp != y.timestamp) return x.timestamp < y.timestamp;
  return key(a) < key(b);
}

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    std::string_view part = text.substr(pos, comma - pos);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
      throw Error(ErrorCode::InvalidConfig, "bad number '" + std::string(part) + "' in area filter");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(PhaseKind k) noexcept {
  switch (k) {
    case PhaseKind::Underway: return "underway";
    case PhaseKind::Anchored: return "anchored";
    case PhaseKind::Moored: return "moored";
  }
  return "underway";
}

std::optional<PhaseKind> parse_phase_kind(std::string_view text) noexcept {
  if (text == "underway") return PhaseKind::Underway;
  if (text == "anchored") return PhaseKind::Anchored;
  if (text == "moored") return PhaseKind::Moored;
  return std::nullopt;
}

PhaseKind phase_kind_of(std::uint8_t corrected_navstat) noexcept {
  if (corrected_navstat == codec::navstat::kAtAnchor) return PhaseKind::Anchored;
  if (corrected_navstat == codec::navstat::kMoored) return PhaseKind::Moored;
  return PhaseKind::Underway;
}

bool splits(const ValidatedMessage& a, const ValidatedMessage& b, const SplitRules& rules) noexcept {
  const Duration gap = b.report.timestamp - a.report.timestamp;
  if (gap > rules.move_gap &&
      geo::haversine_m({a.report.lat, a.report.lon}, {b.report.lat, b.report.lon}) > rules.move_m) {
    return true;
  }
  return gap > rules.max_gap;
}

std::vector<Voyage> extract_voyages(std::vector<ValidatedMessage> messages,
                                    const SplitRules& rules) {
  std::sort(messages.begin(), messages.end(), message_less);
  std::vector<Voyage> out;
  for (auto& m : messages) {
    const bool fresh = out.empty() || out.back().mmsi != m.report.mmsi ||
                       splits(out.back().messages.back(), m, rules);
    if (fresh) {
      Voyage v;
      v.mmsi = m.report.mmsi;
      v.arrival = m.report.timestamp;
      out.push_back(std::move(v));
    }
    Voyage& v = out.back();
    v.departure = m.report.timestamp;
    v.messages.push_back(std::move(m));
    v.message_count = v.messages.size();
  }
  return out;
}

Voyage segment_phases(Voyage v) {
  v.phases.clear();
  const auto& msgs = v.messages;
  std::size_t i = 0;
  while (i < msgs.size()) {
    const PhaseKind kind = phase_kind_of(msgs[i].corrected_navstat);
    std::size_t j = i;
    double sog_sum = 0.0;
    double lat_sum = 0.0;
    double lon_sum = 0.0;
    Phase p;
    p.kind = kind;
    p.start = msgs[i].report.timestamp;
    while (j < msgs.size() && phase_kind_of(msgs[j].corrected_navstat) == kind) {
      const auto& r = msgs[j].report;
      if (r.sog) {
        sog_sum += *r.sog;
        ++p.sog_samples;
      }
      lat_sum += r.lat;
      lon_sum += r.lon;
      ++j;
    }
    p.messages = j - i;
    p.end = j < msgs.size() ? msgs[j].report.timestamp : msgs[j - 1].report.timestamp;
    if (p.sog_samples > 0) {
      p.mean_sog = sog_sum / static_cast<double>(p.sog_samples);
    }
    p.location = {lat_sum / static_cast<double>(p.messages),
                  lon_sum / static_cast<double>(p.messages)};
    v.phases.push_back(p);
    i = j;
  }
  return v;
}

Voyage flag_gaps(Voyage v, std::span<const validate::Outage> outages, double cell_deg,
                 double stop_move_m) {
  using validate::OutageScope;
  v.gap_flagged = false;
  const auto& msgs = v.messages;
  for (const auto& o : outages) {
    if (o.scope == OutageScope::Vessel && o.mmsi != v.mmsi) {
      continue;
    }
    if (!(o.start < v.departure && o.end > v.arrival)) {
      continue;
    }
    // Straddling messages: last one at/before the outage start, first one at/after its end.
    const ValidatedMessage* before = nullptr;
    const ValidatedMessage* after = nullptr;
    for (const auto& m : msgs) {
      if (m.report.timestamp <= o.start) {
        before = &m;
      } else if (m.report.timestamp >= o.end && after == nullptr) {
        after = &m;
      }
    }
    if (o.scope == OutageScope::Area) {
      const ValidatedMessage* probe = before != nullptr ? before : after;
      if (probe == nullptr ||
          validate::cell_of({probe->report.lat, probe->report.lon}, cell_deg) != o.cell) {
        continue;
      }
    }
    if (before == nullptr || after == nullptr) {
      v.gap_flagged = true;
      break;
    }
    const bool moved = geo::haversine_m({before->report.lat, before->report.lon},
                                        {after->report.lat, after->report.lon}) > stop_move_m;
    auto stopped = [](const ValidatedMessage& m) {
      return phase_kind_of(m.corrected_navstat) != PhaseKind::Underway;
    };
    if (moved || !stopped(*before) || !stopped(*after)) {
      v.gap_flagged = true;
      break;
    }
  }
  return v;
}

AreaFilter AreaFilter::parse(std::string_view text) {
  if (text.empty() || text == "none") {
    return AreaFilter{};
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::InvalidConfig, "area filter needs a kind prefix: " + std::string(text));
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);
  if (kind == "circle") {
    const auto v = parse_numbers(rest);
    if (v.size() != 3 || v[2] <= 0) {
      throw Error(ErrorCode::InvalidConfig, "circle:LAT,LON,RADIUS_M expected");
    }
    return circle({v[0], v[1]}, v[2]);
  }
  if (kind == "bbox") {
    const auto v = parse_numbers(rest);
    if (v.size() != 4 || v[0] > v[2] || v[1] > v[3]) {
      throw Error(ErrorCode::InvalidConfig, "bbox:MINLAT,MINLON,MAXLAT,MAXLON expected");
    }
    return box(v[0], v[1], v[2], v[3]);
  }
  if (kind == "geojson") {
    auto port = geo::load_port_geojson(std::string(rest));
    if (port.polygons.empty()) {
      throw Error(ErrorCode::InvalidConfig, "area GeoJSON has no polygon");
    }
    return polygon(std::move(port.polygons.front()));
  }
  throw Error(ErrorCode::InvalidConfig, "unknown area kind '" + std::string(kind) + "'");
}

bool AreaFilter::contains(geo::LatLon p) const noexcept {
  struct Visitor {
    geo::LatLon p;
    bool operator()(std::monostate) const { return true; }
    bool operator()(const Circle& c) const { return geo::haversine_m(c.center, p) <= c.radius_m; }
    bool operator()(const Box& b) const {
      return p.lat >= b.min_lat && p.lat <= b.max_lat && p.lon >= b.min_lon && p.lon <= b.max_lon;
    }
    bool operator()(const geo::Polygon& poly) const { return geo::contains(poly, p); }
  };
  return std::visit(Visitor{p}, shape_);
}

std::string AreaFilter::describe() const {
  std::ostringstream os;
  os.precision(10);
  if (const auto* c = std::get_if<Circle>(&shape_)) {
    os << "circle:" << c->center.lat << "," << c->center.lon << "," << c->radius_m;
  } else if (const auto* b = std::get_if<Box>(&shape_)) {
    os << "bbox:" << b->min_lat << "," << b->min_lon << "," << b->max_lat << "," << b->max_lon;
  } else if (const auto* p = std::get_if<geo::Polygon>(&shape_)) {
    os << "polygon:" << p->name;
  } else {
    os << "none";
  }
  return os.str();
}

std::vector<ValidatedMessage> filter_area(std::span<const ValidatedMessage> messages,
                                          const AreaFilter& area) {
  std::vector<ValidatedMessage> out;
  out.reserve(messages.size());
  for (const auto& m : messages) {
    if (area.contains({m.report.lat, m.report.lon})) {
      out.push_back(m);
    }
  }
  return out;
}

void attach_ship_types(std::vector<Voyage>& voyages, const std::map<std::uint32_t, int>& ship_types) {
  for (auto& v : voyages) {
    if (auto it = ship_types.find(v.mmsi); it != ship_types.end()) {
      v.ship_type = it->second;
    }
  }
}

}  // namespace aisport::voyage
