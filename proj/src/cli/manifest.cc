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


#include "cli/manifest.h"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include "json.hpp"
#include "semlink/random.h"
#include "semlink/status.h"
#include "semlink/text_io.h"

#ifndef SEMLINK_VERSION
#define SEMLINK_VERSION "unknown"
#endif

namespace semlink::cli {

std::string Sha256File(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                             &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "sha256 unavailable");
  }
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 15];
  }
  return hex;
}

RunManifest::RunManifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)),
      argv_(std::move(argv)),
      started_(std::chrono::system_clock::now()),
      start_tick_(std::chrono::steady_clock::now()) {}

void RunManifest::AddInput(const std::filesystem::path& path) {
  inputs_.emplace_back(path.string(), Sha256File(path));
}

void RunManifest::AddOutput(const std::filesystem::path& path) {
  outputs_.emplace_back(path.string(), Sha256File(path));
}

namespace {

std::string Iso8601(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json Digests(
    const std::vector<std::pair<std::string, std::string>>& files) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& [path, digest] : files) {
    j.push_back({{"path", path}, {"digest", digest}});
  }
  return j;
}

}  // namespace

void RunManifest::Commit(const std::filesystem::path& dir,
                         const std::string& key) const {
  const std::filesystem::path path =
      (dir.empty() ? std::filesystem::path(".") : dir) / kManifestName;
  nlohmann::ordered_json doc;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    doc = nlohmann::ordered_json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (!doc.is_object() || doc.value("format", "") != "semlink-manifest") {
      doc = nlohmann::ordered_json();
    }
  }
  if (doc.is_null()) {
    doc["format"] = "semlink-manifest";
    doc["version"] = 1;
    doc["digest_algorithm"] = kDigestAlgorithm;
    doc["runs"] = nlohmann::ordered_json::object();
  }

  nlohmann::ordered_json run;
  run["command"] = command_;
  run["argv"] = argv_;
  run["config"] = config_;
  run["seed"] = seed_ ? nlohmann::ordered_json(*seed_) : nlohmann::ordered_json();
  run["rng"] = std::string(Rng::kAlgorithm);
  run["tool_version"] = SEMLINK_VERSION;
  run["inputs"] = Digests(inputs_);
  run["outputs"] = Digests(outputs_);
  run["started_utc"] = Iso8601(started_);
  run["duration_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_tick_)
          .count();
  doc["runs"][key] = std::move(run);

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out = OpenForWrite(tmp);
    out << doc.dump(2) << '\n';
    CheckWritten(out, tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace semlink::cli
