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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "aisport/error.hpp"
#include "aisport/validate.hpp"

namespace aisport::validate {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void invalid(int line_no, const std::string& why) {
  throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": " + why);
}

double to_double(std::string_view v, int line_no) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
    invalid(line_no, "expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

int to_int(std::string_view v, int line_no) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    invalid(line_no, "expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

Duration minutes_to_duration(double minutes) {
  return Duration{static_cast<long long>(std::llround(minutes * 60.0))};
}

// Shortest text that parses back to the same double.
std::string number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

KinematicParams ValidatorConfig::kinematic() const {
  return {stopped_threshold_kn, minutes_to_duration(rotation_window_h * 60.0), rotation_rbar,
          min_heading_fraction};
}

ValidatorConfig parse_config(std::string_view text) {
  ValidatorConfig cfg;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      invalid(line_no, "expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "method") {
      const auto s = parse_strategy(value);
      if (!s) invalid(line_no, "method must be geofence, kinematic, knn or ensemble");
      cfg.method = *s;
    } else if (key == "stopped_threshold_kn") {
      cfg.stopped_threshold_kn = to_double(value, line_no);
    } else if (key == "knn_k") {
      cfg.knn_k = to_int(value, line_no);
    } else if (key == "rotation_window_h") {
      cfg.rotation_window_h = to_double(value, line_no);
    } else if (key == "rotation_rbar") {
      cfg.rotation_rbar = to_double(value, line_no);
    } else if (key == "hysteresis_msgs") {
      cfg.hysteresis_msgs = to_int(value, line_no);
    } else if (key == "hysteresis_min") {
      cfg.hysteresis_min = to_double(value, line_no);
    } else if (key == "min_heading_fraction") {
      cfg.min_heading_fraction = to_double(value, line_no);
    } else if (key == "global_gap_min") {
      cfg.outages.global_gap = minutes_to_duration(to_double(value, line_no));
    } else if (key == "vessel_gap_min") {
      cfg.outages.vessel_gap = minutes_to_duration(to_double(value, line_no));
    } else if (key == "area_gap_min") {
      cfg.outages.area_gap = minutes_to_duration(to_double(value, line_no));
    } else if (key == "regular_cadence_min") {
      cfg.outages.regular_cadence = minutes_to_duration(to_double(value, line_no));
    } else if (key == "area_cell_deg") {
      cfg.outages.cell_deg = to_double(value, line_no);
    } else if (key == "area_min_vessels") {
      cfg.outages.area_min_vessels = to_int(value, line_no);
    } else if (key == "min_agreement") {
      cfg.min_agreement = to_double(value, line_no);
    } else {
      invalid(line_no, "unknown key '" + std::string(key) + "'");
    }
  }

  if (cfg.stopped_threshold_kn <= 0) invalid(0, "stopped_threshold_kn must be positive");
  if (cfg.knn_k < 1) invalid(0, "knn_k must be at least 1");
  if (cfg.rotation_window_h <= 0) invalid(0, "rotation_window_h must be positive");
  if (cfg.rotation_rbar <= 0 || cfg.rotation_rbar > 1) invalid(0, "rotation_rbar must be in (0, 1]");
  if (cfg.hysteresis_msgs < 1) invalid(0, "hysteresis_msgs must be at least 1");
  if (cfg.hysteresis_min < 0) invalid(0, "hysteresis_min must be non-negative");
  if (cfg.outages.cell_deg <= 0) invalid(0, "area_cell_deg must be positive");
  return cfg;
}

ValidatorConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::MissingFile, "cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const ValidatorConfig& cfg) {
  auto minutes = [](Duration d) { return number(static_cast<double>(d.count()) / 60.0); };
  std::ostringstream os;
  os << "method = " << to_string(cfg.method) << "\n"
     << "stopped_threshold_kn = " << number(cfg.stopped_threshold_kn) << "\n"
     << "knn_k = " << cfg.knn_k << "\n"
     << "rotation_window_h = " << number(cfg.rotation_window_h) << "\n"
     << "rotation_rbar = " << number(cfg.rotation_rbar) << "\n"
     << "hysteresis_msgs = " << cfg.hysteresis_msgs << "\n"
     << "hysteresis_min = " << number(cfg.hysteresis_min) << "\n"
     << "min_heading_fraction = " << number(cfg.min_heading_fraction) << "\n"
     << "global_gap_min = " << minutes(cfg.outages.global_gap) << "\n"
     << "vessel_gap_min = " << minutes(cfg.outages.vessel_gap) << "\n"
     << "area_gap_min = " << minutes(cfg.outages.area_gap) << "\n"
     << "regular_cadence_min = " << minutes(cfg.outages.regular_cadence) << "\n"
     << "area_cell_deg = " << number(cfg.outages.cell_deg) << "\n"
     << "area_min_vessels = " << cfg.outages.area_min_vessels << "\n"
     << "min_agreement = " << number(cfg.min_agreement) << "\n";
  return os.str();
}

}  // namespace aisport::validate
