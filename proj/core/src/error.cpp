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

#include "aisport/error.hpp"

namespace aisport {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BadChecksum: return "BadChecksum";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::MissingFragment: return "MissingFragment";
    case ErrorCode::DuplicateFragment: return "DuplicateFragment";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::WrongType: return "WrongType";
    case ErrorCode::TruncatedBuffer: return "TruncatedBuffer";
    case ErrorCode::OutOfRangePosition: return "OutOfRangePosition";
    case ErrorCode::UnavailableHeading: return "UnavailableHeading";
    case ErrorCode::OutOfExtent: return "OutOfExtent";
    case ErrorCode::InvalidPolygon: return "InvalidPolygon";
    case ErrorCode::MalformedGeoJson: return "MalformedGeoJson";
    case ErrorCode::UnavailableSpeed: return "UnavailableSpeed";
    case ErrorCode::InsufficientWindow: return "InsufficientWindow";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyOverlap: return "EmptyOverlap";
    case ErrorCode::MalformedGroundTruth: return "MalformedGroundTruth";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::CorruptLine: return "CorruptLine";
    case ErrorCode::UnresolvableEndpoint: return "UnresolvableEndpoint";
    case ErrorCode::SinkWriteFailure: return "SinkWriteFailure";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::optional<ErrorCode> parse_error_code(std::string_view text) noexcept {
  for (int i = 0; i <= static_cast<int>(ErrorCode::Io); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    if (to_string(code) == text) return code;
  }
  return std::nullopt;
}

}  // namespace aisport
