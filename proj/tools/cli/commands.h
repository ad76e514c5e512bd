// Copyright 2026 The driftood Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DRIFTOOD_TOOLS_CLI_COMMANDS_H_
#define DRIFTOOD_TOOLS_CLI_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

namespace driftood::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // check violation or runtime failure
inline constexpr int kExitUsage = 2;

// Parses argv-style arguments (args[0] is the program name) and runs the
// selected subcommand. Normal output goes to `out`, diagnostics to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace driftood::cli

#endif  // DRIFTOOD_TOOLS_CLI_COMMANDS_H_
