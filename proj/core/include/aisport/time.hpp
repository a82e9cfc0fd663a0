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

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace aisport {

/// UTC instant with one-second resolution. AIS receivers stamp messages to the
/// second, so nothing finer is carried through the pipeline.
using Timestamp = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;
using Date = std::chrono::year_month_day;

inline Timestamp from_unix(long long seconds) { return Timestamp{Duration{seconds}}; }
inline long long to_unix(Timestamp t) { return t.time_since_epoch().count(); }

/// "2019-09-12T14:28:00Z"
std::string format_iso(Timestamp t);
/// Accepts "YYYY-MM-DDTHH:MM:SSZ", "YYYY-MM-DD HH:MM:SS" and "YYYY-MM-DDTHH:MM" (UTC).
std::optional<Timestamp> parse_iso(std::string_view text);

/// "2019-09-12"
std::string format_date(Date d);
std::optional<Date> parse_date(std::string_view text);

inline Date utc_date(Timestamp t) { return Date{std::chrono::floor<std::chrono::days>(t)}; }
inline Timestamp start_of(Date d) { return Timestamp{std::chrono::sys_days{d}}; }

/// ISO-8601 week key, e.g. "2020-W01".
std::string iso_week(Date d);

/// Renders a duration the way pandas prints a Timedelta rounded to minutes,
/// e.g. "1 days 12:26".
std::string format_days_hm(Duration d);

/// Seconds as a decimal number of hours.
inline double hours(Duration d) { return static_cast<double>(d.count()) / 3600.0; }

}  // namespace aisport
