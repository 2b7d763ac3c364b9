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

#ifndef SEMLINK_CLI_H_
#define SEMLINK_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace semlink {

// Process exit codes of the `semlink` tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,           // unknown flag, bad flag value, invalid argument
  kExitIo = 3,              // missing or unreadable input, failed write
  kExitParse = 4,           // malformed input file
  kExitSchemaMismatch = 5,  // inputs that do not belong together
  kExitInsufficientData = 6,
  kExitTrainingFailed = 7,
  kExitOutOfRange = 8,      // node id or record outside the graph
};

// Runs one command. Normal output goes to `out`; failures print a single
// line "error code=<name> exit=<n> message=\"...\"" to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);
int RunCli(int argc, char** argv);

}  // namespace semlink

#endif  // SEMLINK_CLI_H_
