// Copyright 2026 The Semlink Authors
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


#ifndef SEMLINK_CLI_MANIFEST_H_
#define SEMLINK_CLI_MANIFEST_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace semlink::cli {

inline constexpr const char* kDigestAlgorithm = "sha256";
inline constexpr const char* kManifestName = "manifest.json";

// Lowercase hex SHA-256 of a file's bytes.
std::string Sha256File(const std::filesystem::path& path);

// Provenance of one command run. Each output directory holds a single
// manifest.json with one entry per output, keyed by the output's file name;
// re-running a command replaces its entry.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> argv);

  void SetConfig(std::map<std::string, std::string> config) {
    config_ = std::move(config);
  }
  void SetSeed(std::uint64_t seed) { seed_ = seed; }
  void AddInput(const std::filesystem::path& path);
  void AddOutput(const std::filesystem::path& path);

  // Writes or updates `<dir>/manifest.json` under `key`.
  void Commit(const std::filesystem::path& dir, const std::string& key) const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::map<std::string, std::string> config_;
  std::optional<std::uint64_t> seed_;
  std::vector<std::pair<std::string, std::string>> inputs_;   // path, digest
  std::vector<std::pair<std::string, std::string>> outputs_;  // path, digest
  std::chrono::system_clock::time_point started_;
  std::chrono::steady_clock::time_point start_tick_;
};

}  // namespace semlink::cli

#endif  // SEMLINK_CLI_MANIFEST_H_
