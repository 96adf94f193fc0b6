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
 * Search with an unknown number of marked items, simulated from the Grover
 * success law, and the k-maxima loop built on it.
 */
#pragma once

#include "qknn/oracle.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace qknn {

struct SearchConfig {
    double lambda{1.2};
    /// Search attempts before a search reports failure.
    std::size_t max_rounds{30};
    std::uint64_t seed{0};
    /// Stop k-maxima once the threshold already holds the largest code.
    bool stop_at_ceiling{false};

    void validate() const;
};

struct SearchOutcome {
    std::optional<std::uint64_t> found;
    std::uint64_t iterations{0}; ///< coherent oracle applications
    std::uint64_t attempts{0};   ///< measurements (each verified once)
};

/// Size of the search register for M items: the next power of two.
std::uint64_t search_domain(std::size_t M);

/// Success probability after r Grover iterations with t of N items marked.
double grover_success(std::uint64_t r, std::uint64_t t, std::uint64_t N);

/// Randomized search over [0, M) with a growing iteration cap. Charges one
/// query per Grover iteration and one per classical verification.
SearchOutcome grover_search_unknown(OracleHandle &oracle, std::size_t M,
                                    const SearchConfig &cfg,
                                    std::mt19937_64 &rng);
SearchOutcome grover_search_unknown(OracleHandle &oracle, std::size_t M,
                                    const SearchConfig &cfg);

struct KMaxRound {
    std::uint64_t y{0};
    std::optional<std::uint64_t> replacement;
    std::uint64_t queries{0};
    std::uint64_t attempts{0};
};

struct KMaxResult {
    std::vector<std::uint64_t> top_k; ///< sorted ascending
    std::vector<KMaxRound> rounds;
    std::uint64_t oracle_queries{0};
    std::uint64_t data_prep_queries{0};
    /// Queries spent up to the last successful replacement.
    std::uint64_t queries_to_solution{0};
    /// Classical reads of stored codes for the threshold argmin.
    std::uint64_t value_reads{0};
    bool stopped_at_ceiling{false};
};

/// Threshold variant: y = argmin over A; replace y by any marked index until
/// a search fails.
KMaxResult k_maxima(OracleBackend &backend, std::size_t k,
                    const SearchConfig &cfg);

/// Distinct codes in [0, 2^b - 1) with b = ceil(log2 M) + 1, in random order.
std::vector<std::uint64_t> random_distinct_codes(std::size_t M,
                                                 std::uint64_t seed,
                                                 std::size_t *bits = nullptr);

/// Indices of the k largest codes (ties broken by lower index), sorted.
std::vector<std::uint64_t> top_k_by_sort(const std::vector<std::uint64_t> &codes,
                                         std::size_t k);

struct ScalingRow {
    std::size_t M{0};
    std::size_t k{0};
    std::size_t trials{0};
    double mean_queries{0.0};
    double std_queries{0.0};
    double mean_to_solution{0.0};
    double std_to_solution{0.0};
    double success_rate{0.0};
};

/// Runs k_maxima on `trials` random distinct tables per M with the table
/// backend.
std::vector<ScalingRow> scaling_experiment(const std::vector<std::size_t> &Ms,
                                           std::size_t k, std::size_t trials,
                                           const SearchConfig &cfg);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

/// 64-bit mixing for deriving per-item seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace qknn
