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
 * Runtime invariant suites behind the `verify` subcommand.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qknn {

struct VerifyOptions {
    std::uint64_t seed{7};
    /// Random instances per sampled suite.
    std::size_t samples{50};
    /// Fault injection: invert the comparator output.
    bool negate_comparator{false};
};

struct InvariantResult {
    std::string name;
    bool passed{false};
    double deviation{0.0};
    double tolerance{0.0};
    std::string detail;
};

struct VerifyReport {
    std::vector<InvariantResult> results;

    bool all_passed() const;
    std::string to_json() const;
};

VerifyReport run_verification(const VerifyOptions &opts);

} // namespace qknn
