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

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "aisport/codec.hpp"
#include "aisport/geo.hpp"
#include "aisport/time.hpp"
#include "aisport/validate.hpp"

namespace fixture {

inline aisport::Timestamp t0() { return aisport::from_unix(1700000000); }

inline aisport::codec::PositionReport report(std::uint32_t mmsi, aisport::Timestamp ts, double lat,
                                             double lon, std::optional<double> sog,
                                             std::optional<int> heading = std::nullopt,
                                             std::uint8_t navstat = 0) {
  aisport::codec::PositionReport r;
  r.mmsi = mmsi;
  r.timestamp = ts;
  r.lat = lat;
  r.lon = lon;
  r.sog = sog;
  r.heading = heading;
  r.navstat = navstat;
  return r;
}

inline aisport::validate::ValidatedMessage validated(const aisport::codec::PositionReport& r,
                                                     std::uint8_t corrected) {
  aisport::validate::ValidatedMessage m;
  m.report = r;
  m.corrected_navstat = corrected;
  m.agreed_with_reported = r.navstat == corrected;
  return m;
}

/// Square ring with corners (lat0, lon0) and (lat1, lon1).
inline aisport::geo::Polygon box(std::string name, aisport::geo::AreaKind kind, double lat0,
                                 double lon0, double lat1, double lon1) {
  return {std::move(name), kind, {{lat0, lon0}, {lat0, lon1}, {lat1, lon1}, {lat1, lon0}}};
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("aisport-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace fixture
