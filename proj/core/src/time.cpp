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

#include "aisport/time.hpp"

#include <charconv>
#include <cstdio>

namespace aisport {

namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) {
    return false;
  }
  const char* first = text.data() + pos;
  const char* last = first + len;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

std::string format_iso(Timestamp t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::optional<Timestamp> parse_iso(std::string_view text) {
  using namespace std::chrono;
  if (text.size() < 16) {
    return std::nullopt;
  }
  const auto date = parse_date(text.substr(0, 10));
  if (!date || (text[10] != 'T' && text[10] != ' ') || text[13] != ':') {
    return std::nullopt;
  }
  int hh = 0;
  int mi = 0;
  int ss = 0;
  if (!read_int(text, 11, 2, hh) || !read_int(text, 14, 2, mi)) {
    return std::nullopt;
  }
  std::size_t pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    if (!read_int(text, 17, 2, ss)) {
      return std::nullopt;
    }
    pos = 19;
  }
  if (pos < text.size() && text[pos] == 'Z') {
    ++pos;
  }
  if (pos != text.size() || hh > 23 || mi > 59 || ss > 60) {
    return std::nullopt;
  }
  return start_of(*date) + std::chrono::hours{hh} + minutes{mi} + seconds{ss};
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

std::optional<Date> parse_date(std::string_view text) {
  using namespace std::chrono;
  int y = 0;
  int m = 0;
  int d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !read_int(text, 0, 4, y) ||
      !read_int(text, 5, 2, m) || !read_int(text, 8, 2, d)) {
    return std::nullopt;
  }
  const Date date{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!date.ok()) {
    return std::nullopt;
  }
  return date;
}

std::string iso_week(Date d) {
  using namespace std::chrono;
  const sys_days day{d};
  // The ISO week belongs to the year containing its Thursday.
  const weekday wd{day};
  const sys_days thursday = day + days{4 - static_cast<int>(wd.iso_encoding())};
  const year_month_day th{thursday};
  const sys_days jan1{th.year() / January / 1};
  const int week = static_cast<int>((thursday - jan1).count() / 7) + 1;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-W%02d", static_cast<int>(th.year()), week);
  return buf;
}

std::string format_days_hm(Duration d) {
  const bool negative = d.count() < 0;
  long long total_min = (negative ? -d.count() : d.count()) / 60;
  const long long day_count = total_min / (24 * 60);
  total_min %= 24 * 60;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s%lld days %02lld:%02lld", negative ? "-" : "", day_count,
                total_min / 60, total_min % 60);
  return buf;
}

}  // namespace aisport
