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

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace aisport::tool {

/// Lower-case hex SHA-256 of a file; "-" for stdin (not hashed).
std::string sha256_file(const std::string& path);
std::string sha256_hex(const std::string& data);

/// Reproducibility record written next to every output. Contains no wall-clock
/// data, so equal inputs give a byte-identical manifest.
class RunManifest {
 public:
  explicit RunManifest(std::string command) : command_(std::move(command)) {}

  void input(const std::string& path);
  void output(const std::string& path) { outputs_.push_back(path); }
  void option(const std::string& key, nlohmann::ordered_json value) { config_[key] = std::move(value); }

  nlohmann::ordered_json to_json() const;
  void write(const std::string& path) const;

 private:
  std::string command_;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::string> outputs_;
};

}  // namespace aisport::tool
