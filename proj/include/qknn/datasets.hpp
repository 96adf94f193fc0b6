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
 * Labeled state corpora for entanglement classification and instances for
 * state discrimination.
 */
#pragma once

#include "qknn/subroutines.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qknn {

enum class Scheme { SepVsEnt2q, SepVsMaxent2q, FiveClass3q };

Scheme parse_scheme(const std::string &name);
std::string scheme_name(Scheme s);
std::size_t scheme_qubits(Scheme s);
std::size_t scheme_classes(Scheme s);
std::string class_name(Scheme s, int label);

/// Normalized complex Gaussian vector on n qubits.
State haar_random_state(std::size_t n, std::uint64_t seed);

/// Entropy floor applied to sampled "entangled" states.
inline constexpr double kEntropyFloor = 0.05;

/// Largest eigenvalue of the reduced state on `kept`.
double largest_schmidt(const State &state, const std::vector<Qubit> &kept);
/// von Neumann entropy (base 2) of the reduced state on `kept`.
double entanglement_entropy(const State &state, const std::vector<Qubit> &kept);
/// Largest Schmidt coefficient within 1e-9 of one.
bool separable_cut(const State &state, const std::vector<Qubit> &kept);

/// Class id of `state` under `scheme`; throws for states outside its classes.
int label_entanglement(const State &state, Scheme scheme);

struct LabeledState {
    State amplitudes;
    int label{0};
    std::string seed_path;
};

struct Corpus {
    Scheme scheme{Scheme::SepVsEnt2q};
    std::uint64_t seed{0};
    std::vector<LabeledState> items;
};

/// `count` states of one class. Item i is drawn from a seed derived from
/// (seed, class_id, i) so generation is order independent.
Corpus gen_class(Scheme scheme, int class_id, std::size_t count,
                 std::uint64_t seed);
/// `per_class` states of every class, grouped by class.
Corpus gen_corpus(Scheme scheme, std::size_t per_class, std::uint64_t seed);

/// One JSON object per line: {label, scheme, amplitudes, seed_path}.
void write_corpus(std::ostream &os, const Corpus &corpus);
Corpus read_corpus(std::istream &is);

struct DiscriminationInstance {
    std::vector<State> train;
    std::size_t chosen{0};
    State psi;
};

/// M Haar states on n qubits with pairwise fidelity below 1 - 1e-6, and a
/// test state equal to one of them.
DiscriminationInstance gen_discrimination_instance(std::size_t M, std::size_t n,
                                                   std::uint64_t seed);

} // namespace qknn
