// Copyright 2026 The bqaoa Authors
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

#include <ostream>
#include <string>
#include <vector>

namespace bqaoa::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kOk = 0,
  kConfig = 2,
  kInfeasible = 3,
  kInternal = 4,
};

/// Runs the command line `args` (program name excluded), writing results to
/// `out` and diagnostics to `err`. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Parses "a..b" or "a" into an inclusive range; throws ConfigError.
std::pair<int, int> parse_range(const std::string& s);

}  // namespace bqaoa::cli
