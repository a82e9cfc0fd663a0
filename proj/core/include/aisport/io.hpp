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

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "aisport/codec.hpp"
#include "aisport/validate.hpp"
#include "aisport/voyage.hpp"

// JSON (one object per line) representations of every pipeline record.
// Each object carries a "type" discriminator; instants are ISO-8601 UTC.
namespace aisport::io {

using Json = nlohmann::ordered_json;

Json to_json(const codec::PositionReport& r);
Json to_json(const codec::StaticReport& r);
/// Error channel entry: {"error": code, "raw": line, "detail": text}.
Json to_json(const codec::DecodeError& e);
Json to_json(const validate::ValidatedMessage& m);
Json to_json(const validate::Outage& o);
Json to_json(const voyage::Phase& p);
/// Voyage summary with phases; member messages are not written.
Json to_json(const voyage::Voyage& v);

// Readers throw Error{CorruptLine} on missing or ill-typed fields.
codec::PositionReport position_from_json(const Json& j);
codec::StaticReport static_from_json(const Json& j);
codec::DecodeError decode_error_from_json(const Json& j);
validate::ValidatedMessage validated_from_json(const Json& j);
validate::Outage outage_from_json(const Json& j);
voyage::Voyage voyage_from_json(const Json& j);

/// Compact single-line form.
std::string dump(const Json& j);
/// Throws Error{CorruptLine}.
Json parse_line(std::string_view line);

/// Decoded message as stored by ingest and decode.
using Record = std::variant<codec::PositionReport, codec::StaticReport>;

/// Throws Error{CorruptLine} unless the line is a position or static record.
Record parse_record(std::string_view line);
std::string dump_record(const Record& r);

/// Splits a file into lines (LF or CRLF). Throws Error{MissingFile}.
std::vector<std::string> read_lines(const std::string& path);
/// Reads a whole file. Throws Error{MissingFile}.
std::string read_file(const std::string& path);
/// Writes `lines` each terminated by LF. Throws Error{SinkWriteFailure}.
void write_lines(const std::string& path, const std::vector<std::string>& lines);
void write_file(const std::string& path, std::string_view content);

/// Reads a JSONL file of records of one kind, skipping blank lines.
std::vector<validate::ValidatedMessage> load_validated(const std::string& path);
std::vector<voyage::Voyage> load_voyages(const std::string& path);
std::vector<validate::Outage> load_outages(const std::string& path);

}  // namespace aisport::io
