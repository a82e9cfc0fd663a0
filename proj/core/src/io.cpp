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

#include "aisport/io.hpp"

#include <fstream>
#include <sstream>

#include "aisport/error.hpp"

namespace aisport::io {

namespace {

[[noreturn]] void corrupt(const std::string& why) { throw Error(ErrorCode::CorruptLine, why); }

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) corrupt("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) corrupt(std::string("missing field '") + key + "'");
  return *it;
}

template <class T>
T get(const Json& j, const char* key) {
  const Json& v = field(j, key);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    corrupt(std::string("field '") + key + "' has the wrong type");
  }
}

template <class T>
std::optional<T> get_opt(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (v.is_null()) return std::nullopt;
  return get<T>(j, key);
}

Timestamp get_time(const Json& j, const char* key) {
  const auto text = get<std::string>(j, key);
  const auto ts = parse_iso(text);
  if (!ts) corrupt(std::string("field '") + key + "' is not an ISO timestamp");
  return *ts;
}

void expect_type(const Json& j, std::string_view type) {
  if (get<std::string>(j, "type") != type) {
    corrupt("expected a '" + std::string(type) + "' record");
  }
}

void put_position_fields(Json& j, const codec::PositionReport& r) {
  j["msg_type"] = r.msg_type;
  j["mmsi"] = r.mmsi;
  j["timestamp"] = format_iso(r.timestamp);
  j["lat"] = r.lat;
  j["lon"] = r.lon;
  j["sog"] = opt(r.sog);
  j["cog"] = opt(r.cog);
  j["heading"] = opt(r.heading);
  j["navstat"] = r.navstat;
  j["rot"] = opt(r.rot);
}

codec::PositionReport read_position_fields(const Json& j) {
  codec::PositionReport r;
  r.msg_type = get<int>(j, "msg_type");
  r.mmsi = get<std::uint32_t>(j, "mmsi");
  r.timestamp = get_time(j, "timestamp");
  r.lat = get<double>(j, "lat");
  r.lon = get<double>(j, "lon");
  r.sog = get_opt<double>(j, "sog");
  r.cog = get_opt<double>(j, "cog");
  r.heading = get_opt<int>(j, "heading");
  r.navstat = get<std::uint8_t>(j, "navstat");
  r.rot = get_opt<int>(j, "rot");
  return r;
}

}  // namespace

Json to_json(const codec::PositionReport& r) {
  Json j;
  j["type"] = "position";
  put_position_fields(j, r);
  return j;
}

Json to_json(const codec::StaticReport& r) {
  Json j;
  j["type"] = "static";
  j["mmsi"] = r.mmsi;
  j["timestamp"] = format_iso(r.timestamp);
  j["imo"] = r.imo;
  j["callsign"] = r.callsign;
  j["vessel_name"] = r.vessel_name;
  j["ship_type"] = r.ship_type;
  if (r.dimensions) {
    j["dimensions"] = {{"to_bow", r.dimensions->to_bow},
                       {"to_stern", r.dimensions->to_stern},
                       {"to_port", r.dimensions->to_port},
                       {"to_starboard", r.dimensions->to_starboard}};
  } else {
    j["dimensions"] = nullptr;
  }
  j["destination"] = r.destination;
  return j;
}

Json to_json(const codec::DecodeError& e) {
  Json j;
  j["error"] = std::string(to_string(e.code));
  j["raw"] = e.raw;
  j["detail"] = e.detail;
  return j;
}

Json to_json(const validate::ValidatedMessage& m) {
  Json j;
  j["type"] = "validated";
  put_position_fields(j, m.report);
  j["corrected_navstat"] = m.corrected_navstat;
  j["method"] = std::string(validate::to_string(m.method));
  j["agreed"] = m.agreed_with_reported;
  j["gap_flag"] = m.gap_flag;
  return j;
}

Json to_json(const validate::Outage& o) {
  Json j;
  j["type"] = "outage";
  j["scope"] = std::string(validate::to_string(o.scope));
  j["start"] = format_iso(o.start);
  j["end"] = format_iso(o.end);
  j["mmsi"] = opt(o.mmsi);
  j["cell"] = o.cell ? Json::array({o.cell->row, o.cell->col}) : Json(nullptr);
  return j;
}

Json to_json(const voyage::Phase& p) {
  Json j;
  j["kind"] = std::string(voyage::to_string(p.kind));
  j["start"] = format_iso(p.start);
  j["end"] = format_iso(p.end);
  j["mean_sog"] = opt(p.mean_sog);
  j["lat"] = p.location.lat;
  j["lon"] = p.location.lon;
  j["messages"] = p.messages;
  j["sog_samples"] = p.sog_samples;
  return j;
}

Json to_json(const voyage::Voyage& v) {
  Json j;
  j["type"] = "voyage";
  j["mmsi"] = v.mmsi;
  j["arrival"] = format_iso(v.arrival);
  j["departure"] = format_iso(v.departure);
  j["message_count"] = v.message_count;
  j["gap_flagged"] = v.gap_flagged;
  j["ship_type"] = opt(v.ship_type);
  Json phases = Json::array();
  for (const auto& p : v.phases) phases.push_back(to_json(p));
  j["phases"] = std::move(phases);
  return j;
}

codec::PositionReport position_from_json(const Json& j) {
  expect_type(j, "position");
  return read_position_fields(j);
}

codec::StaticReport static_from_json(const Json& j) {
  expect_type(j, "static");
  codec::StaticReport r;
  r.mmsi = get<std::uint32_t>(j, "mmsi");
  r.timestamp = get_time(j, "timestamp");
  r.imo = get<std::uint32_t>(j, "imo");
  r.callsign = get<std::string>(j, "callsign");
  r.vessel_name = get<std::string>(j, "vessel_name");
  r.ship_type = get<int>(j, "ship_type");
  const Json& d = field(j, "dimensions");
  if (!d.is_null()) {
    r.dimensions = codec::Dimensions{get<int>(d, "to_bow"), get<int>(d, "to_stern"),
                                     get<int>(d, "to_port"), get<int>(d, "to_starboard")};
  }
  r.destination = get<std::string>(j, "destination");
  return r;
}

codec::DecodeError decode_error_from_json(const Json& j) {
  const auto code = parse_error_code(get<std::string>(j, "error"));
  if (!code) corrupt("unknown error code");
  return codec::DecodeError{*code, get<std::string>(j, "raw"), get<std::string>(j, "detail")};
}

validate::ValidatedMessage validated_from_json(const Json& j) {
  expect_type(j, "validated");
  validate::ValidatedMessage m;
  m.report = read_position_fields(j);
  m.corrected_navstat = get<std::uint8_t>(j, "corrected_navstat");
  const auto method = validate::parse_method(get<std::string>(j, "method"));
  if (!method) corrupt("unknown method");
  m.method = *method;
  m.agreed_with_reported = get<bool>(j, "agreed");
  m.gap_flag = get<bool>(j, "gap_flag");
  return m;
}

validate::Outage outage_from_json(const Json& j) {
  expect_type(j, "outage");
  validate::Outage o;
  const auto scope = validate::parse_outage_scope(get<std::string>(j, "scope"));
  if (!scope) corrupt("unknown outage scope");
  o.scope = *scope;
  o.start = get_time(j, "start");
  o.end = get_time(j, "end");
  o.mmsi = get_opt<std::uint32_t>(j, "mmsi");
  const Json& cell = field(j, "cell");
  if (!cell.is_null()) {
    if (!cell.is_array() || cell.size() != 2) corrupt("cell must be [row, col]");
    try {
      o.cell = validate::GridCell{cell[0].get<int>(), cell[1].get<int>()};
    } catch (const nlohmann::json::exception&) {
      corrupt("cell must be [row, col]");
    }
  }
  return o;
}

voyage::Voyage voyage_from_json(const Json& j) {
  expect_type(j, "voyage");
  voyage::Voyage v;
  v.mmsi = get<std::uint32_t>(j, "mmsi");
  v.arrival = get_time(j, "arrival");
  v.departure = get_time(j, "departure");
  v.message_count = get<std::size_t>(j, "message_count");
  v.gap_flagged = get<bool>(j, "gap_flagged");
  v.ship_type = get_opt<int>(j, "ship_type");
  const Json& phases = field(j, "phases");
  if (!phases.is_array()) corrupt("phases must be an array");
  for (const Json& pj : phases) {
    voyage::Phase p;
    const auto kind = voyage::parse_phase_kind(get<std::string>(pj, "kind"));
    if (!kind) corrupt("unknown phase kind");
    p.kind = *kind;
    p.start = get_time(pj, "start");
    p.end = get_time(pj, "end");
    p.mean_sog = get_opt<double>(pj, "mean_sog");
    p.location = {get<double>(pj, "lat"), get<double>(pj, "lon")};
    p.messages = get<std::size_t>(pj, "messages");
    p.sog_samples = get<std::size_t>(pj, "sog_samples");
    v.phases.push_back(p);
  }
  return v;
}

std::string dump(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::replace); }

Json parse_line(std::string_view line) {
  try {
    return Json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    corrupt(std::string("invalid JSON: ") + e.what());
  }
}

Record parse_record(std::string_view line) {
  const Json j = parse_line(line);
  const auto type = get<std::string>(j, "type");
  if (type == "position") return position_from_json(j);
  if (type == "static") return static_from_json(j);
  corrupt("unexpected record type '" + type + "'");
}

std::string dump_record(const Record& r) {
  return std::visit([](const auto& v) { return dump(to_json(v)); }, r);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_lines(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = nl + 1;
  }
  return lines;
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::SinkWriteFailure, "cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::SinkWriteFailure, "write failed: " + path);
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::string text;
  for (const auto& l : lines) {
    text += l;
    text += '\n';
  }
  write_file(path, text);
}

namespace {

template <class T, class F>
std::vector<T> load_jsonl(const std::string& path, F from_json) {
  std::vector<T> out;
  std::size_t n = 0;
  for (const auto& line : read_lines(path)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(from_json(parse_line(line)));
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptLine, path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<validate::ValidatedMessage> load_validated(const std::string& path) {
  return load_jsonl<validate::ValidatedMessage>(path, validated_from_json);
}

std::vector<voyage::Voyage> load_voyages(const std::string& path) {
  return load_jsonl<voyage::Voyage>(path, voyage_from_json);
}

std::vector<validate::Outage> load_outages(const std::string& path) {
  return load_jsonl<validate::Outage>(path, outage_from_json);
}

}  // namespace aisport::io
