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

// Small helpers shared by the file formats.

#ifndef SEMLINK_TEXT_IO_H_
#define SEMLINK_TEXT_IO_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semlink {

// Shortest decimal string that parses back to exactly `value`.
std::string FormatDouble(double value);

std::optional<double> ParseDouble(std::string_view text);
std::optional<std::int64_t> ParseInt(std::string_view text);
std::optional<std::uint64_t> ParseUint(std::string_view text);

std::vector<std::string_view> Split(std::string_view text, char sep);
std::string_view Trim(std::string_view text);

std::ifstream OpenForRead(const std::filesystem::path& path);
std::ofstream OpenForWrite(const std::filesystem::path& path);

// Throws Error(kIo) if the stream is in a failed state.
void CheckWritten(std::ofstream& out, const std::filesystem::path& path);

}  // namespace semlink

#endif  // SEMLINK_TEXT_IO_H_
