// Copyright 2026 The qknn-sim Authors
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
/**
 * @file
 * Command-line front end shared by the `qknn_sim` tool and the tests.
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qknn::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 1,
    kRuntime = 2,
    kVerificationFailed = 3,
};

/// Parses `args` (without the program name) and dispatches the subcommand.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace qknn::cli
