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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "aisport/validate.hpp"

namespace aisport::validate {

namespace {

struct Interval {
  Timestamp start;
  Timestamp end;
};

// Total time of (a, b) covered by `cover`, which must be sorted and non-overlapping.
Duration covered(const std::vector<Interval>& cover, Timestamp a, Timestamp b) {
  Duration total{0};
  for (const auto& iv : cover) {
    if (iv.start >= b) {
      break;
    }
    const Timestamp lo = std::max(a, iv.start);
    const Timestamp hi = std::min(b, iv.end);
    if (hi > lo) {
      total += hi - lo;
    }
  }
  return total;
}

std::vector<Interval> merge(std::vector<Interval> v) {
  std::sort(v.begin(), v.end(), [](const Interval& x, const Interval& y) { return x.start < y.start; });
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.start <= out.back().end) {
      out.back().end = std::max(out.back().end, iv.end);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(OutageScope s) noexcept {
  switch (s) {
    case OutageScope::Vessel: return "vessel";
    case OutageScope::Area: return "area";
    case OutageScope::Global: return "global";
  }
  return "global";
}

std::optional<OutageScope> parse_outage_scope(std::string_view text) noexcept {
  if (text == "vessel") return OutageScope::Vessel;
  if (text == "area") return OutageScope::Area;
  if (text == "global") return OutageScope::Global;
  return std::nullopt;
}

GridCell cell_of(geo::LatLon p, double cell_deg) noexcept {
  return {static_cast<int>(std::floor(p.lat / cell_deg)),
          static_cast<int>(std::floor(p.lon / cell_deg))};
}

std::vector<Outage> detect_outages(std::span<const PositionReport> stream, Timestamp now,
                                   const OutageConfig& cfg) {
  std::vector<Outage> out;
  if (stream.empty()) {
    return out;
  }

  // Index by time so the detector tolerates equal timestamps from different vessels.
  std::vector<std::size_t> order(stream.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return stream[a].timestamp < stream[b].timestamp;
  });

  // Global: nothing received at all.
  std::vector<Interval> global;
  for (std::size_t i = 1; i < order.size(); ++i) {
    const Timestamp a = stream[order[i - 1]].timestamp;
    const Timestamp b = stream[order[i]].timestamp;
    if (b - a > cfg.global_gap) {
      global.push_back({a, b});
    }
  }
  const Timestamp last = stream[order.back()].timestamp;
  if (now - last > cfg.global_gap) {
    global.push_back({last, now});
  }
  for (const auto& iv : global) {
    out.push_back({OutageScope::Global, iv.start, iv.end, std::nullopt, std::nullopt});
  }

  // Area: a busy cell goes quiet while the rest of the feed continues.
  struct CellHit {
    Timestamp t;
    std::uint32_t mmsi;
  };
  std::map<GridCell, std::vector<CellHit>> cells;
  for (const std::size_t i : order) {
    const auto& r = stream[i];
    cells[cell_of({r.lat, r.lon}, cfg.cell_deg)].push_back({r.timestamp, r.mmsi});
  }
  std::map<GridCell, std::vector<Interval>> area_cover;
  for (const auto& [cell, hits] : cells) {
    for (std::size_t i = 1; i < hits.size(); ++i) {
      const Timestamp a = hits[i - 1].t;
      const Timestamp b = hits[i].t;
      if (b - a - covered(global, a, b) <= cfg.area_gap) {
        continue;
      }
      if (i < 2 || a - hits[i - 2].t >= cfg.regular_cadence) {
        continue;
      }
      // Vessels that left the cell are traffic, not an outage: enough of the
      // vessels heard just before the gap must be heard there again after it.
      std::set<std::uint32_t> before;
      for (std::size_t j = i; j-- > 0 && hits[j].t >= a - cfg.area_gap;) {
        before.insert(hits[j].mmsi);
      }
      std::set<std::uint32_t> returned;
      for (std::size_t j = i; j < hits.size() && hits[j].t <= b + cfg.area_gap; ++j) {
        if (before.count(hits[j].mmsi) != 0) returned.insert(hits[j].mmsi);
      }
      if (static_cast<int>(returned.size()) < cfg.area_min_vessels) {
        continue;
      }
      out.push_back({OutageScope::Area, a, b, std::nullopt, cell});
      area_cover[cell].push_back({a, b});
    }
  }

  // Vessel: a regularly reporting vessel goes quiet and later reappears.
  std::map<std::uint32_t, std::vector<std::size_t>> vessels;
  for (const std::size_t i : order) {
    vessels[stream[i].mmsi].push_back(i);
  }
  for (const auto& [mmsi, idx] : vessels) {
    for (std::size_t i = 1; i < idx.size(); ++i) {
      const auto& prev = stream[idx[i - 1]];
      const Timestamp a = prev.timestamp;
      const Timestamp b = stream[idx[i]].timestamp;
      if (b - a <= cfg.vessel_gap) {
        continue;
      }
      if (i < 2 || a - stream[idx[i - 2]].timestamp >= cfg.regular_cadence) {
        continue;
      }
      std::vector<Interval> cover = global;
      if (auto it = area_cover.find(cell_of({prev.lat, prev.lon}, cfg.cell_deg));
          it != area_cover.end()) {
        cover.insert(cover.end(), it->second.begin(), it->second.end());
      }
      cover = merge(std::move(cover));
      if (b - a - covered(cover, a, b) > cfg.vessel_gap) {
        out.push_back({OutageScope::Vessel, a, b, mmsi, std::nullopt});
      }
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const Outage& x, const Outage& y) {
    if (x.start != y.start) return x.start < y.start;
    return static_cast<int>(x.scope) > static_cast<int>(y.scope);
  });
  return out;
}

}  // namespace aisport::validate
