// Copyright 2026 The mixbound Authors
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

#ifndef MIXBOUND_TOOLS_COMMANDS_H_
#define MIXBOUND_TOOLS_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

namespace mixbound::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

// Environment variable that relocates relative --out paths.
inline constexpr const char* kOutputDirEnv = "MIXBOUND_OUTPUT_DIR";

// Runs the command line `args` (without the program name).
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Round-half-even of x to `digits` decimals, rendered as text.
std::string RoundHalfEven(double x, int digits);

}  // namespace mixbound::cli

#endif  // MIXBOUND_TOOLS_COMMANDS_H_
