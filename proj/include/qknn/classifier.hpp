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
 * Classical and quantum k-nearest-neighbour classification over pure states.
 */
#pragma once

#include "qknn/kmax.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qknn {

struct TrainSet {
    std::vector<State> states;
    std::vector<int> labels;

    std::size_t size() const { return states.size(); }
    std::size_t num_qubits() const;
    /// Throws on empty sets, label/state count mismatch, unequal dimensions
    /// or unnormalized states.
    void validate() const;
};

/// F = |<test|train>|^2 or X = Re<test|train>.
double similarity(const State &test, const State &train, Similarity kind);

struct FidelityTable {
    Similarity kind{Similarity::Fidelity};
    std::size_t b{12};
    std::vector<double> exact;
    std::vector<std::uint64_t> quantized;
};

FidelityTable make_table(const State &test, const TrainSet &train,
                         Similarity kind, std::size_t b);

enum class Mode { Classical, OracleAbstract, CircuitExact };

Mode parse_mode(const std::string &name);
std::string mode_name(Mode m);

struct Classification {
    int label{0};
    std::vector<std::uint64_t> neighbors;   ///< nearest first
    std::vector<double> similarities;       ///< matching `neighbors`
    std::uint64_t oracle_queries{0};
    std::uint64_t data_prep_queries{0};
    Mode mode{Mode::Classical};
};

/// Majority vote over `neighbors` (nearest first). Ties go to the class of
/// the nearest neighbour among the tied classes.
int majority_vote(const std::vector<std::uint64_t> &neighbors,
                  const std::vector<int> &labels);

/// Exact top-k by similarity, ties broken by lower index.
Classification classical_knn(const State &test, const TrainSet &train,
                             std::size_t k, Similarity kind);
/// Top-k on the quantized codes, ties broken by lower index.
Classification classical_knn_quantized(const FidelityTable &table,
                                       const std::vector<int> &labels,
                                       std::size_t k);

struct QknnConfig {
    std::size_t b{12};
    SearchConfig search;
    Similarity kind{Similarity::Fidelity};
};

/// Quantum k-maxima over the marking oracle, then a vote.
Classification qknn_classify(const StatePrep &v, const TrainSet &train,
                             std::size_t k, const QknnConfig &cfg, Mode mode);

struct Discrimination {
    std::uint64_t index{0};
    std::uint64_t oracle_queries{0};
    std::uint64_t data_prep_queries{0};
    std::size_t rounds{0};
};

/// Finds j with |psi> = |phi_j> by k = 1 maxima search; the search stops as
/// soon as the threshold holds the saturated code.
Discrimination discriminate(const StatePrep &v, const TrainSet &train,
                            const QknnConfig &cfg);

/// sqrt(2 - 2 sqrt(F))
double bures_distance(double fidelity);

} // namespace qknn
