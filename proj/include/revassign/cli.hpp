// Copyright 2026 The revassign Authors.
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

// Command-line front end: solve, sample, decompose, experiment, generate.

#ifndef REVASSIGN_CLI_HPP_
#define REVASSIGN_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace revassign {

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 1,
  kExitInfeasible = 2,
  kExitInternal = 3,
  kExitCheckFailed = 4,
};

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace revassign

#endif  // REVASSIGN_CLI_HPP_
