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

#ifndef SEMLINK_STATUS_H_
#define SEMLINK_STATUS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semlink {

// Broad failure classes. The CLI maps each one to a distinct exit code.
enum class ErrorCode {
  kInvalidArgument,
  kOutOfRange,
  kParse,
  kIo,
  kSchemaMismatch,
  kInsufficientData,
  kTrainingFailed,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// An input record (edge, pair) that violates a precondition.
class RecordError : public Error {
 public:
  RecordError(std::size_t record, const std::string& message)
      : Error(ErrorCode::kOutOfRange,
              "record " + std::to_string(record) + ": " + message),
        record_(record) {}

  std::size_t record() const { return record_; }

 private:
  std::size_t record_;
};

// Malformed text input; `line` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::kParse,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace semlink

#endif  // SEMLINK_STATUS_H_
