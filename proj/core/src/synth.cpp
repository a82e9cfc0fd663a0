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

#include "aisport/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>

#include <json.hpp>

#include "aisport/codec.hpp"
#include "aisport/error.hpp"
#include "aisport/io.hpp"

namespace aisport::synth {

namespace {

using Json = nlohmann::json;
using voyage::PhaseKind;

constexpr double kKnotMps = 1852.0 / 3600.0;
constexpr double kSwingRadiusM = 60.0;

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorCode::InvalidScenario, why); }

// Local east/north offsets in metres around an origin.
geo::LatLon offset(geo::LatLon origin, double east_m, double north_m) {
  const double lat = origin.lat + north_m / geo::kEarthRadiusM * 180.0 / geo::kPi;
  const double lon = origin.lon + east_m / (geo::kEarthRadiusM * std::cos(origin.lat * geo::kPi / 180.0)) *
                                      180.0 / geo::kPi;
  return {lat, lon};
}

geo::Polygon rect(std::string name, geo::AreaKind kind, geo::LatLon origin, double x0, double y0,
                  double x1, double y1) {
  return geo::Polygon{std::move(name), kind,
                      {offset(origin, x0, y0), offset(origin, x1, y0), offset(origin, x1, y1),
                       offset(origin, x0, y1)}};
}

double norm_deg(double d) {
  d = std::fmod(d, 360.0);
  return d < 0 ? d + 360.0 : d;
}

double quantize(double v, double step) { return std::round(v / step) * step; }

struct Rng {
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  double normal(double sd) { return std::normal_distribution<double>(0.0, sd)(eng); }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
  std::mt19937_64 eng;
};

geo::LatLon random_point_in(const geo::Polygon& poly, double margin_m, Rng& rng) {
  double min_lat = 90, max_lat = -90, min_lon = 180, max_lon = -180;
  double clat = 0, clon = 0;
  for (const auto& v : poly.ring) {
    min_lat = std::min(min_lat, v.lat);
    max_lat = std::max(max_lat, v.lat);
    min_lon = std::min(min_lon, v.lon);
    max_lon = std::max(max_lon, v.lon);
    clat += v.lat;
    clon += v.lon;
  }
  for (int attempt = 0; attempt < 2000; ++attempt) {
    const geo::LatLon p{rng.uniform(min_lat, max_lat), rng.uniform(min_lon, max_lon)};
    if (!geo::contains(poly, p)) continue;
    if (geo::contains(poly, offset(p, margin_m, 0)) && geo::contains(poly, offset(p, -margin_m, 0)) &&
        geo::contains(poly, offset(p, 0, margin_m)) && geo::contains(poly, offset(p, 0, -margin_m))) {
      return p;
    }
  }
  const double n = static_cast<double>(poly.ring.size());
  return {clat / n, clon / n};
}

Duration leg_duration(geo::LatLon a, geo::LatLon b, double speed_kn) {
  const double secs = geo::haversine_m(a, b) / (speed_kn * kKnotMps);
  return Duration{std::max<long>(1, static_cast<long>(std::ceil(secs)))};
}

struct Emission {
  Timestamp ts{};
  std::uint32_t mmsi = 0;
  std::uint64_t seq = 0;
  int visit = 0;
  bool is_static = false;
  codec::PositionReport pos;
  codec::StaticReport stat;
  std::uint8_t truth = 0;
};

struct Layout {
  geo::LatLon origin;
  geo::LatLon entry;
  geo::LatLon exit;
  std::vector<const geo::Polygon*> terminals;
  std::vector<const geo::Polygon*> anchorages;
};

Layout make_layout(const geo::PortGeometry& port) {
  Layout l;
  double lat = 0, lon = 0;
  std::size_t n = 0;
  for (const auto& poly : port.polygons) {
    for (const auto& v : poly.ring) {
      lat += v.lat;
      lon += v.lon;
      ++n;
    }
    (poly.kind == geo::AreaKind::Terminal ? l.terminals : l.anchorages).push_back(&poly);
  }
  if (n == 0) invalid("port geometry has no polygons");
  l.origin = {lat / static_cast<double>(n), lon / static_cast<double>(n)};
  double reach = 0;
  for (const auto& poly : port.polygons) {
    for (const auto& v : poly.ring) reach = std::max(reach, geo::haversine_m(l.origin, v));
  }
  l.entry = offset(l.origin, -1000.0, -(reach + 5000.0));
  l.exit = offset(l.origin, 1000.0, -(reach + 5000.0));
  return l;
}

struct Vessel {
  std::uint32_t mmsi;
  int ship_type;
  std::string name;
};

// Emits the track of one visit.
class TrackBuilder {
 public:
  TrackBuilder(const Scenario& sc, Rng& rng, std::vector<Emission>& out, std::vector<TruthPhase>& phases,
               std::uint64_t& seq)
      : sc_(sc), rng_(rng), out_(out), phases_(phases), seq_(seq) {}

  void begin(const Vessel& v, int visit, geo::LatLon at, Timestamp t) {
    vessel_ = v;
    visit_ = visit;
    pos_ = at;
    t_ = t;
    emit_static();
  }

  void underway_to(geo::LatLon dest) {
    const auto dur = leg_duration(pos_, dest, sc_.speed_kn);
    const auto xy = geo::project_local(pos_, dest);
    const double bearing = norm_deg(std::atan2(xy.x, xy.y) * 180.0 / geo::kPi);
    for (Duration s{0}; s < dur; s += sc_.underway_cadence) {
      const double f = static_cast<double>(s.count()) / static_cast<double>(dur.count());
      const geo::LatLon p{pos_.lat + (dest.lat - pos_.lat) * f, pos_.lon + (dest.lon - pos_.lon) * f};
      const double sog = std::max(1.0, sc_.speed_kn + rng_.normal(0.2));
      emit_position(t_ + s, p, sog, norm_deg(bearing + rng_.normal(1.0)),
                    norm_deg(std::round(bearing + rng_.normal(2.0))), codec::navstat::kUnderwayEngine);
    }
    phase(PhaseKind::Underway, dur);
    pos_ = dest;
  }

  void anchor(Duration dur) {
    const double rate = rng_.uniform(sc_.rotation_min_deg_h, sc_.rotation_max_deg_h) * (rng_.chance(0.5) ? 1 : -1);
    const double h0 = rng_.uniform(0.0, 360.0);
    for (Duration s{0}; s < dur; s += sc_.stopped_cadence) {
      const double h = h0 + rate * hours(s);
      const double rad = h * geo::kPi / 180.0;
      const auto p = offset(pos_, -kSwingRadiusM * std::sin(rad), -kSwingRadiusM * std::cos(rad));
      emit_position(t_ + s, p, rng_.uniform(0.0, 0.4), rng_.uniform(0.0, 359.9),
                    norm_deg(std::round(h + rng_.uniform(-3.0, 3.0))), codec::navstat::kAtAnchor);
    }
    phase(PhaseKind::Anchored, dur);
  }

  void moor(Duration dur, double berth_heading) {
    emit_static();
    for (Duration s{0}; s < dur; s += sc_.stopped_cadence) {
      const auto p = offset(pos_, rng_.uniform(-5.0, 5.0), rng_.uniform(-5.0, 5.0));
      emit_position(t_ + s, p, rng_.uniform(0.0, 0.1), rng_.uniform(0.0, 359.9),
                    norm_deg(std::round(berth_heading + rng_.uniform(-2.0, 2.0))), codec::navstat::kMoored);
    }
    phase(PhaseKind::Moored, dur);
  }

  Timestamp now() const noexcept { return t_; }

 private:
  void phase(PhaseKind kind, Duration dur) {
    if (!phases_.empty() && phases_.back().mmsi == vessel_.mmsi && phases_.back().visit == visit_ &&
        phases_.back().kind == kind && phases_.back().end == t_) {
      phases_.back().end = t_ + dur;
    } else {
      phases_.push_back(TruthPhase{vessel_.mmsi, visit_, kind, t_, t_ + dur});
    }
    t_ += dur;
  }

  void emit_position(Timestamp ts, geo::LatLon p, double sog, double cog, double heading, std::uint8_t truth) {
    Emission e;
    e.ts = ts;
    e.mmsi = vessel_.mmsi;
    e.seq = seq_++;
    e.visit = visit_;
    e.truth = truth;
    auto& r = e.pos;
    r.msg_type = 1;
    r.mmsi = vessel_.mmsi;
    r.timestamp = ts;
    r.lat = std::round(p.lat * 600000.0) / 600000.0;
    r.lon = std::round(p.lon * 600000.0) / 600000.0;
    r.sog = quantize(sog, 0.1);
    r.cog = std::min(359.9, quantize(cog, 0.1));
    r.heading = static_cast<int>(heading) % 360;
    r.navstat = truth;
    out_.push_back(std::move(e));
  }

  void emit_static() {
    if (!sc_.emit_static) return;
    Emission e;
    e.ts = t_;
    e.mmsi = vessel_.mmsi;
    e.seq = seq_++;
    e.visit = visit_;
    e.is_static = true;
    auto& s = e.stat;
    s.mmsi = vessel_.mmsi;
    s.timestamp = t_;
    s.imo = 9000000 + vessel_.mmsi % 1000000;
    s.callsign = "SY" + std::to_string(vessel_.mmsi % 10000);
    s.vessel_name = vessel_.name;
    s.ship_type = vessel_.ship_type;
    s.dimensions = codec::Dimensions{120, 30, 12, 12};
    s.destination = "PORT";
    out_.push_back(std::move(e));
  }

  const Scenario& sc_;
  Rng& rng_;
  std::vector<Emission>& out_;
  std::vector<TruthPhase>& phases_;
  std::uint64_t& seq_;
  Vessel vessel_{};
  int visit_ = 0;
  geo::LatLon pos_{};
  Timestamp t_{};
};

Duration hours_to(double h) { return Duration{static_cast<long>(std::llround(h * 3600.0))}; }

const geo::Polygon* pick_terminal(const Layout& l, const std::string& name, int ship_type, Rng& rng) {
  if (l.terminals.empty()) invalid("scenario needs a terminal polygon for berth calls");
  if (!name.empty()) {
    for (const auto* t : l.terminals) {
      if (t->name == name) return t;
    }
    invalid("unknown terminal '" + name + "'");
  }
  std::size_t idx = 0;
  switch (metrics::categorize(ship_type)) {
    case metrics::VesselCategory::Cargo: idx = 0; break;
    case metrics::VesselCategory::Tanker: idx = 1; break;
    case metrics::VesselCategory::Passenger: idx = 2; break;
    case metrics::VesselCategory::Other: idx = static_cast<std::size_t>(rng.integer(0, 1)); break;
  }
  return l.terminals[idx % l.terminals.size()];
}

std::vector<VesselSpec> expand_traffic(const Scenario& sc, Rng& rng) {
  std::vector<VesselSpec> out;
  if (!sc.traffic) return out;
  const auto& tr = *sc.traffic;
  const double total_w = tr.cargo + tr.tanker + tr.passenger + tr.other;
  const Timestamp end = sc.start + std::chrono::days{tr.days};
  std::exponential_distribution<double> gap(tr.per_day / 86400.0);
  double t = 0.0;
  std::uint32_t next = tr.mmsi_base;
  while (true) {
    t += gap(rng.eng);
    const Timestamp entry = sc.start + Duration{static_cast<long>(t)};
    if (entry >= end) break;
    VesselSpec v;
    v.mmsi = next++;
    const double pick = rng.uniform(0.0, total_w);
    if (pick < tr.cargo) {
      v.ship_type = rng.integer(70, 79);
    } else if (pick < tr.cargo + tr.tanker) {
      v.ship_type = rng.integer(80, 89);
    } else if (pick < tr.cargo + tr.tanker + tr.passenger) {
      v.ship_type = rng.integer(60, 69);
    } else {
      static constexpr int kOther[] = {30, 31, 52, 90};
      v.ship_type = kOther[rng.integer(0, 3)];
    }
    v.name = "VESSEL " + std::to_string(v.mmsi % 100000);
    Visit visit;
    visit.entry = entry;
    if (rng.chance(tr.anchor_probability)) {
      visit.anchorages.push_back(hours_to(rng.uniform(tr.anchor_min_h, tr.anchor_max_h)));
    }
    visit.moored = hours_to(rng.uniform(tr.moored_min_h, tr.moored_max_h));
    v.visits.push_back(std::move(visit));
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<VesselSpec> expand_ferries(const Scenario& sc) {
  std::vector<VesselSpec> out;
  const auto day0 = std::chrono::floor<std::chrono::days>(sc.start);
  for (const auto& f : sc.ferries) {
    VesselSpec v;
    v.mmsi = f.mmsi;
    v.ship_type = f.ship_type;
    v.name = f.name;
    const std::set<int> skip(f.skip.begin(), f.skip.end());
    int k = 0;
    while (k < f.days) {
      const Timestamp berth = day0 + std::chrono::days{k} + f.berth_arrival;
      int dep_day = k + 1;
      while (skip.count(dep_day - 1) != 0) ++dep_day;
      const Timestamp departure = day0 + std::chrono::days{dep_day} + f.departure;
      Visit visit;
      visit.berth_arrival = berth;
      visit.moored = departure - berth;
      visit.terminal = f.terminal;
      v.visits.push_back(std::move(visit));
      k = dep_day;
    }
    out.push_back(std::move(v));
  }
  return out;
}

Duration parse_time_of_day(const std::string& text) {
  int h = 0, m = 0;
  char colon = 0;
  if (std::sscanf(text.c_str(), "%d%c%d", &h, &colon, &m) != 3 || colon != ':' || h < 0 || h > 23 || m < 0 ||
      m > 59) {
    invalid("time of day must be HH:MM, got '" + text + "'");
  }
  return std::chrono::hours{h} + std::chrono::minutes{m};
}

Timestamp parse_ts(const Json& j, const char* what) {
  if (!j.is_string()) invalid(std::string(what) + " must be an ISO timestamp string");
  const auto ts = parse_iso(j.get<std::string>());
  if (!ts) invalid(std::string(what) + " is not an ISO timestamp");
  return *ts;
}

template <class T>
T value_or(const Json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    invalid(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

geo::PortGeometry builtin_port() {
  const geo::LatLon origin{37.90, 23.60};
  geo::PortGeometry port;
  port.name = "Synthetic Harbour";
  port.polygons.push_back(rect("Outer Anchorage", geo::AreaKind::Anchorage, origin, -3000, -9000, 3000, -5000));
  port.polygons.push_back(rect("Terminal A", geo::AreaKind::Terminal, origin, 800, -300, 1600, 300));
  port.polygons.push_back(rect("Terminal B", geo::AreaKind::Terminal, origin, -1600, -300, -800, 300));
  port.polygons.push_back(rect("Passenger Terminal", geo::AreaKind::Terminal, origin, -300, 800, 300, 1400));
  return port;
}

Scenario parse_scenario(std::string_view json_text, const std::string& base_dir) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) invalid("scenario must be a JSON object");
  Scenario s;
  s.seed = value_or<std::uint64_t>(j, "seed", 1);
  s.start = j.contains("start") ? parse_ts(j["start"], "start") : from_unix(1704067200);  // 2024-01-01
  try {
    const Json port = j.value("port", Json("builtin"));
    if (port.is_string() && port.get<std::string>() == "builtin") {
      s.port = builtin_port();
    } else if (port.is_string()) {
      std::filesystem::path p(port.get<std::string>());
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      s.port = geo::load_port_geojson(p.string());
    } else {
      s.port = geo::parse_port_geojson(port.dump());
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidScenario) throw;
    invalid(std::string("port: ") + e.what());
  }
  if (j.contains("cadence")) {
    const auto& c = j["cadence"];
    s.underway_cadence = Duration{value_or<long>(c, "underway_s", 10)};
    s.stopped_cadence = Duration{value_or<long>(c, "stopped_s", 180)};
  }
  s.speed_kn = value_or<double>(j, "speed_kn", 10.0);
  s.error_rate = value_or<double>(j, "error_rate", 0.0);
  s.rotation_min_deg_h = value_or<double>(j, "rotation_min_deg_h", 10.0);
  s.rotation_max_deg_h = value_or<double>(j, "rotation_max_deg_h", 60.0);
  s.emit_static = value_or<bool>(j, "emit_static", true);

  for (const auto& vj : j.value("vessels", Json::array())) {
    VesselSpec v;
    v.mmsi = value_or<std::uint32_t>(vj, "mmsi", 0);
    v.ship_type = value_or<int>(vj, "ship_type", 0);
    v.name = value_or<std::string>(vj, "name", "VESSEL");
    for (const auto& xj : vj.value("visits", Json::array())) {
      Visit visit;
      if (xj.contains("berth_arrival")) {
        visit.berth_arrival = parse_ts(xj["berth_arrival"], "berth_arrival");
      } else {
        visit.entry = parse_ts(xj.value("entry", Json()), "entry");
      }
      for (const auto& a : xj.value("anchorages_h", Json::array())) {
        if (!a.is_number()) invalid("anchorages_h must hold numbers");
        visit.anchorages.push_back(hours_to(a.get<double>()));
      }
      visit.moored = hours_to(value_or<double>(xj, "moored_h", 0.0));
      visit.terminal = value_or<std::string>(xj, "terminal", "");
      v.visits.push_back(std::move(visit));
    }
    s.vessels.push_back(std::move(v));
  }
  if (j.contains("traffic")) {
    const auto& t = j["traffic"];
    PoissonTraffic tr;
    tr.per_day = value_or<double>(t, "per_day", tr.per_day);
    tr.days = value_or<int>(t, "days", tr.days);
    tr.mmsi_base = value_or<std::uint32_t>(t, "mmsi_base", tr.mmsi_base);
    if (t.contains("mix")) {
      const auto& m = t["mix"];
      tr.cargo = value_or<double>(m, "cargo", tr.cargo);
      tr.tanker = value_or<double>(m, "tanker", tr.tanker);
      tr.passenger = value_or<double>(m, "passenger", tr.passenger);
      tr.other = value_or<double>(m, "other", tr.other);
    }
    tr.anchor_probability = value_or<double>(t, "anchor_probability", tr.anchor_probability);
    tr.anchor_min_h = value_or<double>(t, "anchor_min_h", tr.anchor_min_h);
    tr.anchor_max_h = value_or<double>(t, "anchor_max_h", tr.anchor_max_h);
    tr.moored_min_h = value_or<double>(t, "moored_min_h", tr.moored_min_h);
    tr.moored_max_h = value_or<double>(t, "moored_max_h", tr.moored_max_h);
    s.traffic = tr;
  }
  for (const auto& fj : j.value("ferries", Json::array())) {
    FerryService f;
    f.mmsi = value_or<std::uint32_t>(fj, "mmsi", 0);
    f.ship_type = value_or<int>(fj, "ship_type", f.ship_type);
    f.name = value_or<std::string>(fj, "name", f.name);
    f.days = value_or<int>(fj, "days", f.days);
    if (fj.contains("berth_arrival")) f.berth_arrival = parse_time_of_day(fj["berth_arrival"].get<std::string>());
    if (fj.contains("departure")) f.departure = parse_time_of_day(fj["departure"].get<std::string>());
    f.skip = value_or<std::vector<int>>(fj, "skip", {});
    f.terminal = value_or<std::string>(fj, "terminal", "");
    s.ferries.push_back(std::move(f));
  }
  for (const auto& oj : j.value("outages", Json::array())) {
    OutageSpec o;
    o.start = parse_ts(oj.value("start", Json()), "outage start");
    o.end = parse_ts(oj.value("end", Json()), "outage end");
    if (oj.contains("mmsi") && !oj["mmsi"].is_null()) o.mmsi = value_or<std::uint32_t>(oj, "mmsi", 0);
    s.outages.push_back(o);
  }
  check_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    invalid(e.what());
  }
  return parse_scenario(text, std::filesystem::path(path).parent_path().string());
}

void check_scenario(const Scenario& s) {
  if (s.port.empty()) invalid("port geometry has no polygons");
  if (s.underway_cadence.count() <= 0 || s.stopped_cadence.count() <= 0) invalid("cadences must be positive");
  if (!(s.speed_kn > 0.0)) invalid("speed_kn must be positive");
  if (!(s.error_rate >= 0.0 && s.error_rate <= 1.0)) invalid("error_rate must be in [0, 1]");
  if (!(s.rotation_min_deg_h >= 0.0 && s.rotation_min_deg_h <= s.rotation_max_deg_h)) {
    invalid("rotation range must satisfy 0 <= min <= max");
  }
  std::set<std::uint32_t> seen;
  auto claim = [&](std::uint32_t mmsi) {
    if (mmsi == 0 || mmsi > 999999999) invalid("mmsi must be in 1..999999999");
    if (!seen.insert(mmsi).second) invalid("duplicate mmsi " + std::to_string(mmsi));
  };
  for (const auto& v : s.vessels) {
    claim(v.mmsi);
    if (v.ship_type < 0 || v.ship_type > 99) invalid("ship_type must be in 0..99");
    for (const auto& visit : v.visits) {
      if (visit.moored.count() < 0) invalid("moored duration must be >= 0");
      for (const auto a : visit.anchorages) {
        if (a.count() <= 0) invalid("anchorage durations must be positive");
      }
    }
  }
  for (const auto& f : s.ferries) {
    claim(f.mmsi);
    if (f.days <= 0) invalid("ferry days must be positive");
    if (f.ship_type < 0 || f.ship_type > 99) invalid("ship_type must be in 0..99");
  }
  if (s.traffic) {
    const auto& t = *s.traffic;
    if (!(t.per_day > 0.0) || t.days < 0) invalid("traffic needs per_day > 0 and days >= 0");
    if (t.cargo < 0 || t.tanker < 0 || t.passenger < 0 || t.other < 0 ||
        !(t.cargo + t.tanker + t.passenger + t.other > 0)) {
      invalid("traffic mix weights must be non-negative with a positive sum");
    }
    if (!(t.anchor_probability >= 0 && t.anchor_probability <= 1)) invalid("anchor_probability must be in [0, 1]");
    if (!(t.anchor_min_h > 0 && t.anchor_min_h <= t.anchor_max_h)) invalid("bad anchor duration range");
    if (!(t.moored_min_h >= 0 && t.moored_min_h <= t.moored_max_h)) invalid("bad moored duration range");
    if (t.mmsi_base == 0) invalid("mmsi_base must be positive");
  }
  for (const auto& o : s.outages) {
    if (o.end <= o.start) invalid("outage end must follow its start");
  }
}

Output generate(const Scenario& sc) {
  check_scenario(sc);
  const Layout layout = make_layout(sc.port);
  Rng rng(sc.seed);
  Rng errors(sc.seed ^ 0x9E3779B97F4A7C15ULL);

  std::vector<VesselSpec> fleet = sc.vessels;
  for (auto& f : expand_ferries(sc)) fleet.push_back(std::move(f));
  for (auto& t : expand_traffic(sc, rng)) fleet.push_back(std::move(t));

  std::vector<Emission> emissions;
  Output out;
  auto& truth = out.truth;
  std::uint64_t seq = 0;
  TrackBuilder track(sc, rng, emissions, truth.phases, seq);

  std::vector<TruthVisit> visits;

  for (const auto& plan : fleet) {
    const Vessel vessel{plan.mmsi, plan.ship_type, plan.name};
    int index = 0;
    for (const auto& v : plan.visits) {
      if (!v.anchorages.empty() && layout.anchorages.empty()) invalid("scenario needs an anchorage polygon");
      // Choose waypoints first so the entry time can be back-computed.
      std::vector<geo::LatLon> spots;
      for (std::size_t a = 0; a < v.anchorages.size(); ++a) {
        spots.push_back(random_point_in(*layout.anchorages[a % layout.anchorages.size()], kSwingRadiusM + 40, rng));
      }
      const geo::Polygon* terminal = nullptr;
      geo::LatLon berth{};
      double berth_heading = 0;
      if (v.moored.count() > 0) {
        terminal = pick_terminal(layout, v.terminal, plan.ship_type, rng);
        berth = random_point_in(*terminal, 20.0, rng);
        berth_heading = rng.uniform(0.0, 360.0);
      }

      Timestamp entry = v.entry;
      if (v.berth_arrival) {
        Duration before{0};
        geo::LatLon at = layout.entry;
        for (std::size_t a = 0; a < spots.size(); ++a) {
          before += leg_duration(at, spots[a], sc.speed_kn) + v.anchorages[a];
          at = spots[a];
        }
        before += leg_duration(at, terminal != nullptr ? berth : at, sc.speed_kn);
        entry = *v.berth_arrival - before;
      }

      TruthVisit tv;
      tv.mmsi = plan.mmsi;
      tv.visit = index;
      tv.ship_type = plan.ship_type;
      track.begin(vessel, index, layout.entry, entry);
      for (std::size_t a = 0; a < spots.size(); ++a) {
        track.underway_to(spots[a]);
        track.anchor(v.anchorages[a]);
        tv.anchorage_wait += v.anchorages[a];
      }
      if (terminal != nullptr) {
        track.underway_to(berth);
        tv.berth_arrival = track.now();
        track.moor(v.moored, berth_heading);
        tv.berth_departure = track.now();
      }
      track.underway_to(layout.exit);
      visits.push_back(tv);
      ++index;
    }
  }

  // Receiver blackouts.
  std::erase_if(emissions, [&](const Emission& e) {
    return std::any_of(sc.outages.begin(), sc.outages.end(), [&](const OutageSpec& o) {
      return e.ts >= o.start && e.ts < o.end && (!o.mmsi || *o.mmsi == e.mmsi);
    });
  });
  std::sort(emissions.begin(), emissions.end(), [](const Emission& a, const Emission& b) {
    return std::tie(a.ts, a.mmsi, a.seq) < std::tie(b.ts, b.mmsi, b.seq);
  });

  static constexpr std::uint8_t kStatuses[] = {codec::navstat::kUnderwayEngine, codec::navstat::kAtAnchor,
                                              codec::navstat::kMoored};
  std::map<std::pair<std::uint32_t, int>, std::size_t> visit_index;
  for (std::size_t i = 0; i < visits.size(); ++i) visit_index[{visits[i].mmsi, visits[i].visit}] = i;
  std::vector<bool> seen(visits.size(), false);
  std::vector<double> sog_sum(visits.size(), 0.0);
  std::vector<std::size_t> sog_n(visits.size(), 0);

  int group_id = 0;
  std::size_t line_no = 0;
  for (auto& e : emissions) {
    const char channel = (line_no++ % 2 == 0) ? 'A' : 'B';
    if (e.is_static) {
      for (auto& l : codec::to_sentences(codec::encode_static(e.stat), channel, group_id, e.ts)) {
        out.nmea.push_back(std::move(l));
      }
      group_id = (group_id + 1) % 10;
      continue;
    }
    if (sc.error_rate > 0.0 && errors.chance(sc.error_rate)) {
      std::uint8_t wrong = e.truth;
      while (wrong == e.truth) wrong = kStatuses[errors.integer(0, 2)];
      e.pos.navstat = wrong;
    }
    out.nmea.push_back(codec::to_sentences(codec::encode_position(e.pos), channel, 0, e.ts).front());
    truth.messages.push_back(TruthMessage{e.mmsi, e.ts, e.truth, e.pos.navstat});

    const std::size_t vi = visit_index.at({e.mmsi, e.visit});
    auto& tv = visits[vi];
    if (!seen[vi]) {
      seen[vi] = true;
      tv.entry = e.ts;
    }
    tv.exit = e.ts;
    ++tv.messages;
    if (e.truth == codec::navstat::kUnderwayEngine) {
      sog_sum[vi] += *e.pos.sog;
      ++sog_n[vi];
    }
  }

  for (const auto& p : truth.phases) {
    if (p.kind == PhaseKind::Underway) visits[visit_index.at({p.mmsi, p.visit})].underway += p.end - p.start;
  }
  std::optional<Date> first_day;
  std::optional<Date> last_day;
  for (std::size_t i = 0; i < visits.size(); ++i) {
    if (!seen[i]) continue;
    if (sog_n[i] > 0) visits[i].mean_underway_sog = sog_sum[i] / static_cast<double>(sog_n[i]);
    const Date d = utc_date(visits[i].entry);
    if (!first_day || d < *first_day) first_day = d;
    if (!last_day || d > *last_day) last_day = d;
    truth.visits.push_back(visits[i]);
  }
  if (first_day) {
    for (auto d = std::chrono::sys_days{*first_day}; d <= std::chrono::sys_days{*last_day};
         d += std::chrono::days{1}) {
      truth.arrivals.rows[Date{d}] = metrics::CategoryCounts{0, 0, 0, 0};
    }
    for (const auto& v : truth.visits) {
      ++truth.arrivals.rows[utc_date(v.entry)][static_cast<std::size_t>(metrics::categorize(v.ship_type))];
    }
  }
  std::sort(truth.visits.begin(), truth.visits.end(), [](const TruthVisit& a, const TruthVisit& b) {
    return std::tie(a.mmsi, a.entry) < std::tie(b.mmsi, b.entry);
  });
  return out;
}

std::vector<std::string> truth_jsonl(const TruthLog& t) {
  using OJson = nlohmann::ordered_json;
  std::vector<std::string> lines;
  for (const auto& p : t.phases) {
    OJson j;
    j["type"] = "phase";
    j["mmsi"] = p.mmsi;
    j["visit"] = p.visit;
    j["kind"] = std::string(voyage::to_string(p.kind));
    j["start"] = format_iso(p.start);
    j["end"] = format_iso(p.end);
    lines.push_back(j.dump());
  }
  for (const auto& v : t.visits) {
    OJson j;
    j["type"] = "visit";
    j["mmsi"] = v.mmsi;
    j["visit"] = v.visit;
    j["ship_type"] = v.ship_type;
    j["category"] = std::string(metrics::to_string(metrics::categorize(v.ship_type)));
    j["entry"] = format_iso(v.entry);
    j["exit"] = format_iso(v.exit);
    j["anchorage_wait_s"] = v.anchorage_wait.count();
    j["berth_arrival"] = v.berth_arrival ? OJson(format_iso(*v.berth_arrival)) : OJson(nullptr);
    j["berth_departure"] = v.berth_departure ? OJson(format_iso(*v.berth_departure)) : OJson(nullptr);
    j["underway_s"] = v.underway.count();
    j["mean_underway_sog"] = v.mean_underway_sog ? OJson(*v.mean_underway_sog) : OJson(nullptr);
    j["messages"] = v.messages;
    lines.push_back(j.dump());
  }
  for (const auto& [date, row] : t.arrivals.rows) {
    OJson j;
    j["type"] = "arrivals";
    j["date"] = format_date(date);
    for (const auto c : metrics::kAllCategories) {
      j[std::string(metrics::to_string(c))] = row[static_cast<std::size_t>(c)];
    }
    lines.push_back(j.dump());
  }
  for (const auto& m : t.messages) {
    OJson j;
    j["type"] = "message";
    j["mmsi"] = m.mmsi;
    j["timestamp"] = format_iso(m.timestamp);
    j["true_navstat"] = m.true_navstat;
    j["reported_navstat"] = m.reported_navstat;
    lines.push_back(j.dump());
  }
  return lines;
}

}  // namespace aisport::synth
