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
 * Analog-to-digital conversion of similarity values: amplitude encoding,
 * phase estimation, a reversible lookup for the arithmetic and the
 * uncompute that leaves |j>|code_j>.
 */
#pragma once

#include "qknn/subroutines.hpp"

#include <cstdint>
#include <vector>

namespace qknn {

struct PrecisionConfig {
    std::size_t b{3};

    double epsilon() const { return std::ldexp(1.0, -static_cast<int>(b)); }
    std::uint64_t levels() const { return std::uint64_t{1} << b; }
    /// Throws unless lo <= b <= hi.
    void validate(std::size_t lo = 2, std::size_t hi = 8) const;
};

/// How a phase estimate is turned into a stored code.
enum class Encoding {
    Fidelity,  ///< round_b(clamp(2 sin^2 - 1, 0, 1 - 2^-b))
    DotOffset, ///< round_b((X + 1) / 2), clamped to 2^b - 1
    Amplitude, ///< round_b(sqrt(2 sin^2 - 1)), clamped to 2^b - 1
};

/// Quantizes a value in [0, 1] to b bits with saturation at 2^b - 1.
std::uint64_t quantize_unit(double value, std::size_t b);
/// Code stored for an exact similarity value.
std::uint64_t encode_similarity(double value, std::size_t b, Encoding enc);
/// Inverse of the code for reading: value = code / 2^b (dot codes map back to
/// 2 code / 2^b - 1).
double decode_similarity(std::uint64_t code, std::size_t b, Encoding enc);

/// Code produced by the arithmetic stage for phase register value t.
std::uint64_t arithmetic_code(std::uint64_t t, std::size_t b, Encoding enc);

/// |t>|f> -> |t>|f XOR code(t)> on phase (b) and out (b).
Gate arithmetic_map(const std::vector<Qubit> &phase,
                    const std::vector<Qubit> &out, std::size_t b, Encoding enc);

struct FidelityQadcWires {
    FidelityWires amp;
    std::vector<Qubit> phase;
    std::vector<Qubit> out;
};

struct DotQadcWires {
    DotWires amp;
    std::vector<Qubit> phase;
    std::vector<Qubit> out;
};

/// index, train, test, B, phase, fid.
RegisterLayout fidelity_qadc_layout(std::size_t m, std::size_t n, std::size_t b);
FidelityQadcWires fidelity_qadc_wires(const RegisterLayout &layout);
/// index, data, B, phase, dp.
RegisterLayout dot_qadc_layout(std::size_t m, std::size_t n, std::size_t b);
DotQadcWires dot_qadc_wires(const RegisterLayout &layout);

/// QPE on G, arithmetic, QPE^dagger, amplitude-encoding uncompute.
Circuit build_E_dig(const StatePrep &v, const TrainPrep &tr,
                    const FidelityQadcWires &w, const PrecisionConfig &cfg,
                    Encoding enc = Encoding::Fidelity);
/// |j>|0> -> |j>|F_j>
Circuit build_F(const StatePrep &v, const TrainPrep &tr,
                const FidelityQadcWires &w, const PrecisionConfig &cfg,
                Encoding enc = Encoding::Fidelity);
/// |j>|0> -> |j>|X_j> (offset binary)
Circuit build_X_dot(const StatePrep &v, const TrainPrep &tr,
                    const DotQadcWires &w, const PrecisionConfig &cfg);

/// Number of tagged preparation calls in one F (fidelity) or X (dot) circuit.
std::uint64_t prep_calls_per_conversion(std::size_t b, Similarity kind);

StateVector apply_E_amp(const StateVector &state, const StatePrep &v,
                        const TrainPrep &tr, const FidelityQadcWires &w);
StateVector apply_E_dig(const StateVector &state, const StatePrep &v,
                        const TrainPrep &tr, const FidelityQadcWires &w,
                        const PrecisionConfig &cfg);
StateVector apply_F(const StateVector &state, const StatePrep &v,
                    const TrainPrep &tr, const FidelityQadcWires &w,
                    const PrecisionConfig &cfg);
StateVector apply_X_dot(const StateVector &state, const StatePrep &v,
                        const TrainPrep &tr, const DotQadcWires &w,
                        const PrecisionConfig &cfg);

/// P(out = c | cond = j) as rows indexed by j.
std::vector<std::vector<double>> conditional_probs(const StateVector &state,
                                                   const std::vector<Qubit> &cond,
                                                   const std::vector<Qubit> &out);

struct AbsQadcResult {
    StateVector state; ///< layout: index, train, test, B, phase, out
    std::vector<std::vector<double>> branch_probs; ///< P(out | index)
};

/// Writes round_b(|c_i|) for the amplitudes of `c` into an output register,
/// with the index register in uniform superposition.
AbsQadcResult abs_qadc(const State &c, const PrecisionConfig &cfg);

} // namespace qknn
