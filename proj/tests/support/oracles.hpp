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

// Independent reference implementations used only by the tests. None of these
// call into the code they check, except where noted.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "aisport/codec.hpp"
#include "aisport/geo.hpp"
#include "aisport/validate.hpp"
#include "aisport/voyage.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// AIVDM encoder built on a plain '0'/'1' string.

/// Raw field values of a type 1/2/3 message, exactly as they sit in the bits.
struct RawPosition {
  int type = 1;
  std::uint32_t mmsi = 0;
  int navstat = 15;
  int rot = -128;            // signed 8 bits, -128 = not available
  int sog = 1023;            // 1/10 kn, 1023 = not available
  int accuracy = 0;
  std::int32_t lon = 0;      // 1/10000 min, signed 28 bits
  std::int32_t lat = 0;      // 1/10000 min, signed 27 bits
  int cog = 3600;            // 1/10 deg, >= 3600 = not available
  int heading = 511;         // >= 360 = not available
  int second = 60;
};

struct RawStatic {
  std::uint32_t mmsi = 0;
  std::uint32_t imo = 0;
  std::string callsign;
  std::string name;
  int ship_type = 0;
  int bow = 0, stern = 0, port = 0, starboard = 0;
  std::string destination;
};

void put_uint(std::string& bits, std::uint64_t value, int width);
void put_int(std::string& bits, std::int64_t value, int width);
void put_text(std::string& bits, const std::string& text, int chars);

std::string position_bits(const RawPosition& p);
std::string static_bits(const RawStatic& s);

/// Armored payload and fill bit count.
std::pair<std::string, int> armor_bits(const std::string& bits);
std::string xor_checksum_hex(const std::string& body);
/// One or more complete "!AIVDM" lines, 60 payload characters each at most.
std::vector<std::string> sentences(const std::string& bits, char channel = 'A', int message_id = 1);

/// What a correct decoder must produce for `p`, derived from the raw fields.
aisport::codec::PositionReport expected_position(const RawPosition& p, aisport::Timestamp rx);
aisport::codec::StaticReport expected_static(const RawStatic& s, aisport::Timestamp rx);

/// Uniform over valid field ranges, with sentinels mixed in for optional fields.
RawPosition random_position(std::mt19937_64& rng);
RawStatic random_static(std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// O(n^2) voyage splitter.

struct Span {
  std::uint32_t mmsi = 0;
  aisport::Timestamp arrival{};
  aisport::Timestamp departure{};
  std::size_t messages = 0;

  bool operator==(const Span&) const = default;
};

double great_circle_m(double lat1, double lon1, double lat2, double lon2);

/// Every message looks up its predecessor by a full scan and opens a voyage
/// when the gap exceeds 24 h, or exceeds 5 h with more than 100 m moved.
/// Timestamps must be unique per vessel.
std::vector<Span> brute_split(const std::vector<aisport::validate::ValidatedMessage>& msgs,
                              const aisport::voyage::SplitRules& rules = {});

// ---------------------------------------------------------------------------
// Exhaustive k-NN scan over a fitted model's projected training points.

std::vector<std::uint32_t> knn_scan(const std::vector<aisport::validate::LabeledPoint>& pts,
                                    aisport::geo::PlanarPoint q, int k);
std::uint8_t knn_vote(const std::vector<aisport::validate::LabeledPoint>& pts,
                      aisport::geo::PlanarPoint q, int k);

// ---------------------------------------------------------------------------
// Point in polygon on an integer lattice with exact arithmetic.

struct LatticePoint {
  long x = 0;
  long y = 0;
};

enum class Where { Outside, Boundary, Inside };

/// Exact winding-number classification.
Where locate(const std::vector<LatticePoint>& ring, LatticePoint p);

/// Star-shaped simple polygon with vertices in [0, extent]^2.
std::vector<LatticePoint> random_lattice_polygon(std::mt19937_64& rng, long extent, int vertices);

/// Lattice coordinates scaled by `step` degrees and shifted by `origin`.
aisport::geo::Polygon to_polygon(const std::vector<LatticePoint>& ring, double step,
                                 aisport::geo::LatLon origin = {});

}  // namespace oracle
