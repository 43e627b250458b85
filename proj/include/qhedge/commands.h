// Copyright 2026 The qhedge Authors
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

#ifndef QHEDGE_COMMANDS_H
#define QHEDGE_COMMANDS_H

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace qhedge::cli {

enum ExitCode : int {
    kOk = 0,
    /// unreadable or malformed input, bad arguments, invalid bound query
    kParseError = 2,
    /// input parsed but is not a valid test/channel, or dimensions do not match
    kValidationError = 3,
    /// the solver did not converge or its certificate failed
    kNotConverged = 4,
    /// composite Choi dimension dim_y * dim_x above kDimensionCap
    kDimensionTooLarge = 5,
    /// a demo assertion failed
    kAssertionFailed = 6,
};

inline constexpr std::size_t kDimensionCap = 64;

/// Runs one command line (args excludes the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qhedge::cli

#endif
