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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "aisport/error.hpp"
#include "aisport/time.hpp"

namespace aisport::codec {

/// Navigational status codes this toolkit corrects towards.
namespace navstat {
inline constexpr std::uint8_t kUnderwayEngine = 0;
inline constexpr std::uint8_t kAtAnchor = 1;
inline constexpr std::uint8_t kMoored = 5;
inline constexpr std::uint8_t kNotDefined = 15;
}  // namespace navstat

/// One NMEA 0183 AIVDM/AIVDO line split into its fields.
struct RawSentence {
  std::string talker;  // "AIVDM", "AIVDO", "BSVDM", ...
  int fragment_count = 1;
  int fragment_index = 1;
  std::optional<int> message_id;
  char channel = '\0';  // '\0' when the field is empty
  std::string payload;
  int fill_bits = 0;
  std::uint8_t checksum = 0;
  /// Receiver time from an NMEA 4.0 tag block ("\c:<unix seconds>*hh\"), if any.
  std::optional<Timestamp> tag_time;

  bool operator==(const RawSentence&) const = default;
};

/// XOR of every character in `body` (the text between '!'/'$' and '*').
std::uint8_t nmea_checksum(std::string_view body) noexcept;

/// Throws Error{BadChecksum} or Error{Malformed}. Trailing CR/LF is ignored.
RawSentence parse_sentence(std::string_view line);

/// 6-bit value of an armoring character, or -1 if `c` is outside the alphabet.
constexpr int dearmor(char c) noexcept {
  const int v = static_cast<unsigned char>(c);
  if ((v >= 48 && v <= 87) || (v >= 96 && v <= 119)) {
    const int x = v - 48;
    return x > 40 ? x - 8 : x;
  }
  return -1;
}

/// Inverse of dearmor for values 0..63.
constexpr char armor(int value) noexcept {
  return static_cast<char>(value < 40 ? value + 48 : value + 56);
}

/// Most-significant-bit-first bit string.
class BitBuffer {
 public:
  BitBuffer() = default;

  void append_bits(std::uint32_t value, int width);
  void append_signed(std::int32_t value, int width);
  /// Six-bit ASCII text padded with '@' (value 0) to `chars` characters.
  void append_text(std::string_view text, int chars);
  /// De-armors `payload` and drops `fill_bits` trailing bits. Throws Malformed.
  void append_payload(std::string_view payload, int fill_bits);

  std::size_t size() const noexcept { return bits_; }
  bool bit(std::size_t index) const noexcept {
    return (bytes_[index >> 3] >> (7 - (index & 7))) & 1u;
  }

  std::uint32_t get_uint(std::size_t start, int width) const;
  std::int32_t get_int(std::size_t start, int width) const;
  /// Reads `chars` six-bit characters; stops early if the buffer runs out.
  std::string get_text(std::size_t start, int chars) const;

  std::string to_bit_string() const;
  /// Armored payload plus the number of fill bits that pad it to a 6-bit boundary.
  std::pair<std::string, int> to_payload() const;

  bool operator==(const BitBuffer&) const = default;

 private:
  void push_bit(bool b);

  std::vector<std::uint8_t> bytes_;
  std::size_t bits_ = 0;
};

/// Joins a complete fragment set into one bit string. Fragments may be given
/// in any order but must agree on count, message id and channel.
/// Throws MissingFragment, DuplicateFragment or Malformed.
BitBuffer assemble_fragments(std::span<const RawSentence> sentences);

/// Dynamic report (message types 1, 2, 3). Unavailable values are nullopt.
struct PositionReport {
  int msg_type = 1;
  std::uint32_t mmsi = 0;
  Timestamp timestamp{};
  double lat = 0.0;
  double lon = 0.0;
  std::optional<double> sog;   // knots
  std::optional<double> cog;   // degrees
  std::optional<int> heading;  // degrees
  std::uint8_t navstat = navstat::kNotDefined;
  std::optional<int> rot;  // raw rate-of-turn indicator, -127..127

  bool operator==(const PositionReport&) const = default;
};

struct Dimensions {
  int to_bow = 0;
  int to_stern = 0;
  int to_port = 0;
  int to_starboard = 0;

  bool operator==(const Dimensions&) const = default;
};

/// Static and voyage-related data (message type 5).
struct StaticReport {
  std::uint32_t mmsi = 0;
  Timestamp timestamp{};
  std::uint32_t imo = 0;
  std::string callsign;
  std::string vessel_name;
  int ship_type = 0;
  std::optional<Dimensions> dimensions;
  std::string destination;

  bool operator==(const StaticReport&) const = default;
};

inline constexpr std::size_t kPositionBits = 168;
inline constexpr std::size_t kStaticMinBits = 420;

/// Throws WrongType, TruncatedBuffer or OutOfRangePosition.
PositionReport decode_position(const BitBuffer& bits, Timestamp rx_time);
/// Throws WrongType or TruncatedBuffer.
StaticReport decode_static(const BitBuffer& bits, Timestamp rx_time = {});

/// Message type field of an assembled buffer (first six bits).
int message_type(const BitBuffer& bits);

// Encoder used by the synthetic scenario generator.
BitBuffer encode_position(const PositionReport& report);
BitBuffer encode_static(const StaticReport& report);

/// Wraps a bit string into one or more AIVDM lines (max 60 payload chars each).
/// When `tag_time` is set every line is prefixed with a "\c:<unix>*hh\" tag block.
std::vector<std::string> to_sentences(const BitBuffer& bits, char channel, int message_id,
                                      std::optional<Timestamp> tag_time = std::nullopt);

struct DecodeError {
  ErrorCode code;
  std::string raw;
  std::string detail;

  bool operator==(const DecodeError&) const = default;
};

/// Line stored as a pending fragment of a multi-sentence message.
struct Buffered {
  bool operator==(const Buffered&) const = default;
};

/// Well-formed message of a type this toolkit does not decode.
struct Skipped {
  int msg_type = 0;
  bool operator==(const Skipped&) const = default;
};

using DecodeEvent = std::variant<PositionReport, StaticReport, Buffered, Skipped, DecodeError>;

/// Reassembles multi-sentence messages keyed by (channel, message id).
class FragmentAssembler {
 public:
  explicit FragmentAssembler(Duration window = std::chrono::seconds{30}) : window_(window) {}

  struct Result {
    std::optional<BitBuffer> complete;     // set when the message is whole
    std::optional<DecodeError> error;      // set when this line was rejected
    std::vector<DecodeError> discarded;    // earlier groups dropped (timeout or restart)
  };

  Result add(const RawSentence& sentence, std::string_view raw_line, Timestamp rx_time);
  /// Discards every pending group as MissingFragment.
  std::vector<DecodeError> flush();
  std::size_t pending() const noexcept { return groups_.size(); }

 private:
  struct Group {
    int count = 0;
    int next_index = 1;
    Timestamp first_rx{};
    std::vector<RawSentence> sentences;
    std::string raw;
  };

  std::vector<DecodeError> expire(Timestamp now);

  Duration window_;
  std::map<std::pair<char, int>, Group> groups_;
};

struct DecoderStats {
  std::size_t lines = 0;
  std::size_t positions = 0;
  std::size_t statics = 0;
  std::size_t buffered = 0;
  std::size_t skipped = 0;
  std::size_t errors = 0;  // includes errors raised by expired fragment groups

  bool operator==(const DecoderStats&) const = default;
};

/// Stateful line decoder: one instance per input partition.
class Decoder {
 public:
  explicit Decoder(Duration fragment_window = std::chrono::seconds{30})
      : assembler_(fragment_window) {}

  struct FeedResult {
    DecodeEvent outcome;
    /// Errors for earlier, incomplete fragment groups discarded while handling this line.
    std::vector<DecodeError> discarded;
  };

  /// Every line yields exactly one outcome. The tag-block time, when present,
  /// takes precedence over `rx_time`.
  FeedResult feed(std::string_view line, Timestamp rx_time);
  std::vector<DecodeError> finish();

  const DecoderStats& stats() const noexcept { return stats_; }

 private:
  DecodeEvent decode_buffer(const BitBuffer& bits, Timestamp rx, std::string_view raw);
  void count(const DecodeEvent& ev);

  FragmentAssembler assembler_;
  DecoderStats stats_;
};

}  // namespace aisport::codec
