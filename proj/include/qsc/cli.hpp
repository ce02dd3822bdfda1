// Copyright 2026 The qsc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QSC_CLI_HPP
#define QSC_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace qsc::cli {

/// Exit statuses of run().
enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNumericalError = 3 };

/// Runs one subcommand. `args` excludes the program name. Every command
/// that writes files also writes a run manifest next to its primary output;
/// `replay <manifest>` re-runs it and checks the output digests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsc::cli

#endif  // QSC_CLI_HPP
