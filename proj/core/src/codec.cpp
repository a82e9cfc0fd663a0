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

#include "aisport/codec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace aisport::codec {

namespace {

constexpr std::int32_t kLatUnavailable = 91 * 600000;
constexpr std::int32_t kLonUnavailable = 181 * 600000;
constexpr double kMinutesScale = 600000.0;

std::string_view strip_eol(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
    line.remove_suffix(1);
  }
  return line;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::Malformed, why); }

std::uint8_t parse_checksum(std::string_view two) {
  const int hi = hex_value(two[0]);
  const int lo = hex_value(two[1]);
  if (hi < 0 || lo < 0) {
    malformed("checksum is not hexadecimal");
  }
  return static_cast<std::uint8_t>(hi * 16 + lo);
}

bool parse_small_int(std::string_view text, int& out) {
  if (text.empty()) {
    return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

// "c:1568298480,s:station*5A" -> receiver time from the c: field.
std::optional<Timestamp> parse_tag_block(std::string_view block) {
  const auto star = block.rfind('*');
  if (star == std::string_view::npos || star + 3 != block.size()) {
    malformed("tag block without checksum");
  }
  const std::string_view body = block.substr(0, star);
  if (nmea_checksum(body) != parse_checksum(block.substr(star + 1))) {
    throw Error(ErrorCode::BadChecksum, "tag block checksum mismatch");
  }
  std::optional<Timestamp> time;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const auto comma = std::min(body.find(',', pos), body.size());
    const std::string_view field = body.substr(pos, comma - pos);
    if (field.size() > 2 && field[0] == 'c' && field[1] == ':') {
      long long value = 0;
      auto [ptr, ec] = std::from_chars(field.data() + 2, field.data() + field.size(), value);
      if (ec != std::errc{} || ptr != field.data() + field.size()) {
        malformed("tag block c: field is not an integer");
      }
      // Some receivers stamp milliseconds.
      if (value > 100'000'000'000LL) {
        value /= 1000;
      }
      time = from_unix(value);
    }
    pos = comma + 1;
  }
  return time;
}

}  // namespace

std::uint8_t nmea_checksum(std::string_view body) noexcept {
  std::uint8_t sum = 0;
  for (const char c : body) {
    sum ^= static_cast<std::uint8_t>(c);
  }
  return sum;
}

RawSentence parse_sentence(std::string_view line) {
  line = strip_eol(line);
  if (line.empty()) {
    malformed("empty line");
  }

  RawSentence out;
  if (line.front() == '\\') {
    const auto close = line.find('\\', 1);
    if (close == std::string_view::npos) {
      malformed("unterminated tag block");
    }
    out.tag_time = parse_tag_block(line.substr(1, close - 1));
    line.remove_prefix(close + 1);
    if (line.empty()) {
      malformed("tag block without sentence");
    }
  }

  if (line.front() != '!' && line.front() != '$') {
    malformed("sentence does not start with '!' or '$'");
  }
  const auto star = line.rfind('*');
  if (star == std::string_view::npos || star + 3 != line.size()) {
    malformed("missing checksum");
  }
  const std::string_view body = line.substr(1, star - 1);
  out.checksum = parse_checksum(line.substr(star + 1));
  if (nmea_checksum(body) != out.checksum) {
    throw Error(ErrorCode::BadChecksum, "checksum mismatch");
  }

  std::string_view fields[7];
  std::size_t n = 0;
  std::size_t pos = 0;
  while (true) {
    const auto comma = body.find(',', pos);
    if (n == 7) {
      malformed("too many fields");
    }
    fields[n++] = body.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                    : comma - pos);
    if (comma == std::string_view::npos) {
      break;
    }
    pos = comma + 1;
  }
  if (n != 7) {
    malformed("expected 7 fields");
  }

  const std::string_view talker = fields[0];
  if (talker.size() != 5 || (talker.substr(2) != "VDM" && talker.substr(2) != "VDO")) {
    malformed("not a VDM/VDO sentence");
  }
  out.talker = std::string(talker);

  if (!parse_small_int(fields[1], out.fragment_count) || out.fragment_count < 1 ||
      out.fragment_count > 9) {
    malformed("bad fragment count");
  }
  if (!parse_small_int(fields[2], out.fragment_index) || out.fragment_index < 1 ||
      out.fragment_index > out.fragment_count) {
    malformed("bad fragment index");
  }
  if (!fields[3].empty()) {
    int id = 0;
    if (!parse_small_int(fields[3], id) || id < 0 || id > 9) {
      malformed("bad message id");
    }
    out.message_id = id;
  }
  if (fields[4].size() > 1) {
    malformed("bad channel");
  }
  out.channel = fields[4].empty() ? '\0' : fields[4][0];

  if (fields[5].empty()) {
    malformed("empty payload");
  }
  for (const char c : fields[5]) {
    if (dearmor(c) < 0) {
      malformed("payload character outside armoring alphabet");
    }
  }
  out.payload = std::string(fields[5]);

  if (!parse_small_int(fields[6], out.fill_bits) || out.fill_bits < 0 || out.fill_bits > 5) {
    malformed("bad fill bits");
  }
  return out;
}

void BitBuffer::push_bit(bool b) {
  if ((bits_ & 7) == 0) {
    bytes_.push_back(0);
  }
  if (b) {
    bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ & 7));
  }
  ++bits_;
}

void BitBuffer::append_bits(std::uint32_t value, int width) {
  for (int i = width - 1; i >= 0; --i) {
    push_bit(((value >> i) & 1u) != 0);
  }
}

void BitBuffer::append_signed(std::int32_t value, int width) {
  append_bits(static_cast<std::uint32_t>(value), width);
}

void BitBuffer::append_text(std::string_view text, int chars) {
  for (int i = 0; i < chars; ++i) {
    int v = 0;
    if (i < static_cast<int>(text.size())) {
      int c = static_cast<unsigned char>(text[i]);
      if (c >= 'a' && c <= 'z') {
        c -= 32;
      }
      if (c >= 64 && c <= 95) {
        v = c - 64;
      } else if (c >= 32 && c <= 63) {
        v = c;
      }
    }
    append_bits(static_cast<std::uint32_t>(v), 6);
  }
}

void BitBuffer::append_payload(std::string_view payload, int fill_bits) {
  for (const char c : payload) {
    const int v = dearmor(c);
    if (v < 0) {
      malformed("payload character outside armoring alphabet");
    }
    append_bits(static_cast<std::uint32_t>(v), 6);
  }
  if (fill_bits < 0 || static_cast<std::size_t>(fill_bits) > bits_) {
    malformed("fill bits exceed payload");
  }
  // Drop the fill bits and keep the unused tail of the last byte zeroed.
  bits_ -= static_cast<std::size_t>(fill_bits);
  bytes_.resize((bits_ + 7) / 8);
  if ((bits_ & 7) != 0) {
    bytes_.back() &= static_cast<std::uint8_t>(0xFFu << (8 - (bits_ & 7)));
  }
}

std::uint32_t BitBuffer::get_uint(std::size_t start, int width) const {
  if (start + static_cast<std::size_t>(width) > bits_) {
    throw Error(ErrorCode::TruncatedBuffer, "field beyond end of message");
  }
  std::uint32_t v = 0;
  for (int i = 0; i < width; ++i) {
    v = (v << 1) | static_cast<std::uint32_t>(bit(start + static_cast<std::size_t>(i)));
  }
  return v;
}

std::int32_t BitBuffer::get_int(std::size_t start, int width) const {
  const std::uint32_t raw = get_uint(start, width);
  if (width < 32 && (raw & (1u << (width - 1))) != 0) {
    return static_cast<std::int32_t>(raw | (~0u << width));
  }
  return static_cast<std::int32_t>(raw);
}

std::string BitBuffer::get_text(std::size_t start, int chars) const {
  std::string out;
  out.reserve(static_cast<std::size_t>(chars));
  for (int i = 0; i < chars; ++i) {
    const std::size_t at = start + static_cast<std::size_t>(i) * 6;
    if (at + 6 > bits_) {
      break;
    }
    const auto v = static_cast<int>(get_uint(at, 6));
    out.push_back(static_cast<char>(v < 32 ? v + 64 : v));
  }
  return out;
}

std::string BitBuffer::to_bit_string() const {
  std::string s;
  s.reserve(bits_);
  for (std::size_t i = 0; i < bits_; ++i) {
    s.push_back(bit(i) ? '1' : '0');
  }
  return s;
}

std::pair<std::string, int> BitBuffer::to_payload() const {
  const int fill = static_cast<int>((6 - bits_ % 6) % 6);
  std::string out;
  out.reserve((bits_ + 5) / 6);
  for (std::size_t at = 0; at < bits_; at += 6) {
    int v = 0;
    for (std::size_t i = 0; i < 6; ++i) {
      v = (v << 1) | (at + i < bits_ ? static_cast<int>(bit(at + i)) : 0);
    }
    out.push_back(armor(v));
  }
  return {out, fill};
}

BitBuffer assemble_fragments(std::span<const RawSentence> sentences) {
  if (sentences.empty()) {
    throw Error(ErrorCode::MissingFragment, "no fragments");
  }
  const RawSentence& first = sentences.front();
  std::vector<const RawSentence*> by_index(static_cast<std::size_t>(first.fragment_count),
                                           nullptr);
  for (const RawSentence& s : sentences) {
    if (s.fragment_count != first.fragment_count || s.message_id != first.message_id ||
        s.channel != first.channel) {
      malformed("fragments disagree on count, message id or channel");
    }
    auto& slot = by_index[static_cast<std::size_t>(s.fragment_index - 1)];
    if (slot != nullptr) {
      throw Error(ErrorCode::DuplicateFragment,
                  "fragment " + std::to_string(s.fragment_index) + " repeated");
    }
    slot = &s;
  }
  BitBuffer bits;
  for (std::size_t i = 0; i < by_index.size(); ++i) {
    if (by_index[i] == nullptr) {
      throw Error(ErrorCode::MissingFragment, "fragment " + std::to_string(i + 1) + " missing");
    }
    const bool last = i + 1 == by_index.size();
    bits.append_payload(by_index[i]->payload, last ? by_index[i]->fill_bits : 0);
  }
  return bits;
}

int message_type(const BitBuffer& bits) {
  if (bits.size() < 6) {
    throw Error(ErrorCode::TruncatedBuffer, "message shorter than the type field");
  }
  return static_cast<int>(bits.get_uint(0, 6));
}

PositionReport decode_position(const BitBuffer& bits, Timestamp rx_time) {
  const int type = message_type(bits);
  if (type < 1 || type > 3) {
    throw Error(ErrorCode::WrongType, "type " + std::to_string(type) + " is not a position report");
  }
  if (bits.size() < kPositionBits) {
    throw Error(ErrorCode::TruncatedBuffer,
                std::to_string(bits.size()) + " bits, position report needs 168");
  }
  PositionReport r;
  r.msg_type = type;
  r.mmsi = bits.get_uint(8, 30);
  r.timestamp = rx_time;
  r.navstat = static_cast<std::uint8_t>(bits.get_uint(38, 4));

  const std::int32_t rot = bits.get_int(42, 8);
  if (rot != -128) {
    r.rot = rot;
  }
  const std::uint32_t sog = bits.get_uint(50, 10);
  if (sog != 1023) {
    r.sog = sog / 10.0;
  }

  const std::int32_t lon = bits.get_int(61, 28);
  const std::int32_t lat = bits.get_int(89, 27);
  if (lat == kLatUnavailable || lon == kLonUnavailable) {
    throw Error(ErrorCode::OutOfRangePosition, "position not available");
  }
  r.lon = lon / kMinutesScale;
  r.lat = lat / kMinutesScale;
  if (std::abs(r.lat) > 90.0 || std::abs(r.lon) > 180.0) {
    throw Error(ErrorCode::OutOfRangePosition, "position outside the valid range");
  }

  const std::uint32_t cog = bits.get_uint(116, 12);
  if (cog < 3600) {
    r.cog = cog / 10.0;
  }
  const std::uint32_t heading = bits.get_uint(128, 9);
  if (heading < 360) {
    r.heading = static_cast<int>(heading);
  }
  return r;
}

namespace {

std::string trim_padding(std::string s) {
  while (!s.empty() && (s.back() == '@' || s.back() == ' ')) {
    s.pop_back();
  }
  return s;
}

}  // namespace

StaticReport decode_static(const BitBuffer& bits, Timestamp rx_time) {
  const int type = message_type(bits);
  if (type != 5) {
    throw Error(ErrorCode::WrongType, "type " + std::to_string(type) + " is not a static report");
  }
  if (bits.size() < kStaticMinBits) {
    throw Error(ErrorCode::TruncatedBuffer,
                std::to_string(bits.size()) + " bits, static report needs 420");
  }
  StaticReport r;
  r.mmsi = bits.get_uint(8, 30);
  r.timestamp = rx_time;
  r.imo = bits.get_uint(40, 30);
  r.callsign = trim_padding(bits.get_text(70, 7));
  r.vessel_name = trim_padding(bits.get_text(112, 20));
  const auto ship_type = static_cast<int>(bits.get_uint(232, 8));
  // Values above 99 are reserved; treat them as "not available".
  r.ship_type = ship_type <= 99 ? ship_type : 0;
  Dimensions dim{static_cast<int>(bits.get_uint(240, 9)), static_cast<int>(bits.get_uint(249, 9)),
                 static_cast<int>(bits.get_uint(258, 6)), static_cast<int>(bits.get_uint(264, 6))};
  if (dim != Dimensions{}) {
    r.dimensions = dim;
  }
  r.destination = trim_padding(bits.get_text(302, 20));
  return r;
}

BitBuffer encode_position(const PositionReport& r) {
  BitBuffer b;
  b.append_bits(static_cast<std::uint32_t>(r.msg_type), 6);
  b.append_bits(0, 2);
  b.append_bits(r.mmsi, 30);
  b.append_bits(r.navstat, 4);
  b.append_signed(r.rot.value_or(-128), 8);
  b.append_bits(r.sog ? static_cast<std::uint32_t>(std::llround(*r.sog * 10.0)) : 1023u, 10);
  b.append_bits(0, 1);
  b.append_signed(static_cast<std::int32_t>(std::llround(r.lon * kMinutesScale)), 28);
  b.append_signed(static_cast<std::int32_t>(std::llround(r.lat * kMinutesScale)), 27);
  b.append_bits(r.cog ? static_cast<std::uint32_t>(std::llround(*r.cog * 10.0)) : 3600u, 12);
  b.append_bits(r.heading ? static_cast<std::uint32_t>(*r.heading) : 511u, 9);
  b.append_bits(static_cast<std::uint32_t>(to_unix(r.timestamp) % 60), 6);
  b.append_bits(0, 2);   // maneuver
  b.append_bits(0, 3);   // spare
  b.append_bits(0, 1);   // RAIM
  b.append_bits(0, 19);  // radio status
  return b;
}

BitBuffer encode_static(const StaticReport& r) {
  BitBuffer b;
  b.append_bits(5, 6);
  b.append_bits(0, 2);
  b.append_bits(r.mmsi, 30);
  b.append_bits(0, 2);
  b.append_bits(r.imo, 30);
  b.append_text(r.callsign, 7);
  b.append_text(r.vessel_name, 20);
  b.append_bits(static_cast<std::uint32_t>(r.ship_type), 8);
  const Dimensions dim = r.dimensions.value_or(Dimensions{});
  b.append_bits(static_cast<std::uint32_t>(dim.to_bow), 9);
  b.append_bits(static_cast<std::uint32_t>(dim.to_stern), 9);
  b.append_bits(static_cast<std::uint32_t>(dim.to_port), 6);
  b.append_bits(static_cast<std::uint32_t>(dim.to_starboard), 6);
  b.append_bits(1, 4);   // EPFD: GPS
  b.append_bits(0, 4);   // ETA month
  b.append_bits(0, 5);   // ETA day
  b.append_bits(24, 5);  // ETA hour
  b.append_bits(60, 6);  // ETA minute
  b.append_bits(0, 8);   // draught
  b.append_text(r.destination, 20);
  b.append_bits(0, 1);  // DTE
  b.append_bits(0, 1);  // spare
  return b;
}

std::vector<std::string> to_sentences(const BitBuffer& bits, char channel, int message_id,
                                      std::optional<Timestamp> tag_time) {
  constexpr std::size_t kMaxChars = 60;
  const auto [payload, fill] = bits.to_payload();
  const std::size_t count = std::max<std::size_t>(1, (payload.size() + kMaxChars - 1) / kMaxChars);

  std::string tag;
  if (tag_time) {
    const std::string body = "c:" + std::to_string(to_unix(*tag_time));
    char cs[4];
    std::snprintf(cs, sizeof(cs), "%02X", nmea_checksum(body));
    tag = "\\" + body + "*" + cs + "\\";
  }

  std::vector<std::string> lines;
  lines.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const bool last = i + 1 == count;
    std::string body = "AIVDM," + std::to_string(count) + "," + std::to_string(i + 1) + ",";
    if (count > 1) {
      body += std::to_string(message_id);
    }
    body += ",";
    if (channel != '\0') {
      body.push_back(channel);
    }
    body += ",";
    body += payload.substr(i * kMaxChars, kMaxChars);
    body += ",";
    body += std::to_string(last ? fill : 0);
    char cs[4];
    std::snprintf(cs, sizeof(cs), "%02X", nmea_checksum(body));
    lines.push_back(tag + "!" + body + "*" + cs);
  }
  return lines;
}

std::vector<DecodeError> FragmentAssembler::expire(Timestamp now) {
  std::vector<DecodeError> out;
  for (auto it = groups_.begin(); it != groups_.end();) {
    if (now - it->second.first_rx > window_) {
      out.push_back({ErrorCode::Timeout, it->second.raw, "fragment group not completed in time"});
      it = groups_.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

FragmentAssembler::Result FragmentAssembler::add(const RawSentence& s, std::string_view raw_line,
                                                 Timestamp rx_time) {
  Result result;
  if (!groups_.empty()) {
    result.discarded = expire(rx_time);
  }
  const std::string_view raw = strip_eol(raw_line);

  if (s.fragment_count == 1) {
    try {
      BitBuffer bits;
      bits.append_payload(s.payload, s.fill_bits);
      result.complete = std::move(bits);
    } catch (const Error& e) {
      result.error = DecodeError{e.code(), std::string(raw), e.what()};
    }
    return result;
  }

  const std::pair<char, int> key{s.channel, s.message_id.value_or(-1)};
  auto it = groups_.find(key);
  if (s.fragment_index == 1) {
    if (it != groups_.end()) {
      result.discarded.push_back(
          {ErrorCode::MissingFragment, it->second.raw, "group restarted before completion"});
      groups_.erase(it);
    }
    Group g;
    g.count = s.fragment_count;
    g.next_index = 2;
    g.first_rx = rx_time;
    g.sentences.push_back(s);
    g.raw = std::string(raw);
    groups_.emplace(key, std::move(g));
    return result;
  }

  if (it == groups_.end()) {
    result.error = DecodeError{ErrorCode::MissingFragment, std::string(raw),
                               "fragment " + std::to_string(s.fragment_index) +
                                   " without its predecessors"};
    return result;
  }
  Group& g = it->second;
  if (s.fragment_count != g.count) {
    result.error = DecodeError{ErrorCode::Malformed, std::string(raw),
                               "fragment count disagrees with its group"};
    return result;
  }
  if (s.fragment_index < g.next_index) {
    result.error = DecodeError{ErrorCode::DuplicateFragment, std::string(raw),
                               "fragment " + std::to_string(s.fragment_index) + " repeated"};
    return result;
  }
  if (s.fragment_index > g.next_index) {
    result.discarded.push_back(
        {ErrorCode::MissingFragment, g.raw,
         "fragment " + std::to_string(g.next_index) + " never arrived"});
    groups_.erase(it);
    result.error = DecodeError{ErrorCode::MissingFragment, std::string(raw),
                               "fragment " + std::to_string(s.fragment_index) +
                                   " without its predecessors"};
    return result;
  }

  g.sentences.push_back(s);
  g.raw += "\n";
  g.raw += raw;
  ++g.next_index;
  if (g.next_index > g.count) {
    try {
      result.complete = assemble_fragments(g.sentences);
    } catch (const Error& e) {
      result.error = DecodeError{e.code(), g.raw, e.what()};
    }
    groups_.erase(it);
  }
  return result;
}

std::vector<DecodeError> FragmentAssembler::flush() {
  std::vector<DecodeError> out;
  for (auto& [key, g] : groups_) {
    out.push_back({ErrorCode::MissingFragment, g.raw, "input ended before group completed"});
  }
  groups_.clear();
  return out;
}

DecodeEvent Decoder::decode_buffer(const BitBuffer& bits, Timestamp rx, std::string_view raw) {
  try {
    const int type = message_type(bits);
    if (type >= 1 && type <= 3) {
      return decode_position(bits, rx);
    }
    if (type == 5) {
      return decode_static(bits, rx);
    }
    return Skipped{type};
  } catch (const Error& e) {
    return DecodeError{e.code(), std::string(strip_eol(raw)), e.what()};
  }
}

void Decoder::count(const DecodeEvent& ev) {
  switch (ev.index()) {
    case 0: ++stats_.positions; break;
    case 1: ++stats_.statics; break;
    case 2: ++stats_.buffered; break;
    case 3: ++stats_.skipped; break;
    default: ++stats_.errors; break;
  }
}

Decoder::FeedResult Decoder::feed(std::string_view line, Timestamp rx_time) {
  ++stats_.lines;
  FeedResult result{Buffered{}, {}};
  RawSentence sentence;
  try {
    sentence = parse_sentence(line);
  } catch (const Error& e) {
    result.outcome = DecodeError{e.code(), std::string(strip_eol(line)), e.what()};
    count(result.outcome);
    return result;
  }
  const Timestamp rx = sentence.tag_time.value_or(rx_time);
  auto assembled = assembler_.add(sentence, line, rx);
  result.discarded = std::move(assembled.discarded);
  stats_.errors += result.discarded.size();
  if (assembled.error) {
    result.outcome = std::move(*assembled.error);
  } else if (assembled.complete) {
    result.outcome = decode_buffer(*assembled.complete, rx, line);
  }
  count(result.outcome);
  return result;
}

std::vector<DecodeError> Decoder::finish() {
  auto out = assembler_.flush();
  stats_.errors += out.size();
  return out;
}

}  // namespace aisport::codec
