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
 * State-preparation oracles, swap and Hadamard tests, the reflection
 * composites whose eigenphases carry the similarity values, and phase
 * estimation.
 */
#pragma once

#include "qknn/gate.hpp"
#include "qknn/statevec.hpp"

#include <Eigen/Dense>

#include <vector>

namespace qknn {

using State = std::vector<Complex>;

/// Unitary whose first column is exactly `state` (built from a Householder QR).
Eigen::MatrixXcd prep_unitary(std::span<const Complex> state);

/// The test-state oracle: |0^n> -> |psi>.
class StatePrep {
  public:
    explicit StatePrep(State psi);

    std::size_t num_qubits() const { return n_; }
    const State &state() const { return psi_; }

    /// One tagged gate acting on `qubits` (size n).
    Circuit circuit(const std::vector<Qubit> &qubits) const;

  private:
    State psi_;
    std::size_t n_;
    std::vector<Complex> matrix_;
};

/// The train-state oracle: |j>|0^n> -> |j>|phi_j>, a multiplexed preparation.
/// Index values at or beyond the number of states act as identity.
class TrainPrep {
  public:
    explicit TrainPrep(std::vector<State> states);

    std::size_t num_states() const { return states_.size(); }
    std::size_t num_qubits() const { return n_; }
    /// Smallest m with 2^m >= number of states (at least 1).
    std::size_t index_qubits() const { return m_; }
    const std::vector<State> &states() const { return states_; }

    Circuit circuit(const std::vector<Qubit> &index,
                    const std::vector<Qubit> &data) const;

  private:
    std::vector<State> states_;
    std::size_t n_;
    std::size_t m_;
    std::vector<Complex> blocks_;
};

/// Wires of the fidelity construction.
struct FidelityWires {
    std::vector<Qubit> index;
    std::vector<Qubit> train;
    std::vector<Qubit> test;
    Qubit b{0};
};

/// Wires of the dot-product construction.
struct DotWires {
    std::vector<Qubit> index;
    std::vector<Qubit> data;
    Qubit b{0};
};

Circuit swap_test(const std::vector<Qubit> &train, const std::vector<Qubit> &test,
                  Qubit b);

/// V on test, then the swap test.
Circuit build_U(const StatePrep &v, const FidelityWires &w);
/// |j>|0>|0>|0> -> |j>|Psi_j>
Circuit build_E_amp(const StatePrep &v, const TrainPrep &tr,
                    const FidelityWires &w);
/// U W S_0 W^dagger U^dagger Z_B
Circuit build_G(const StatePrep &v, const TrainPrep &tr, const FidelityWires &w);

/// |j>|0>|0> -> |j> (1/2)[(|v>+|u_j>)|0> + (|v>-|u_j>)|1>]
Circuit build_V_dot(const StatePrep &v, const TrainPrep &tr, const DotWires &w);
/// V S_0 V^dagger Z_B
Circuit build_H_dot(const StatePrep &v, const TrainPrep &tr, const DotWires &w);

/// Little-endian QFT: |t> -> 2^{-b/2} sum_x e^{2 pi i t x / 2^b} |x>.
Circuit qft(const std::vector<Qubit> &qubits);

/// Phase estimation of `unitary` into `phase` (fresh). Controlled powers are
/// built by repetition.
Circuit qpe(const Circuit &unitary, const std::vector<Qubit> &phase);

StateVector swap_test_apply(const StateVector &state,
                            const std::vector<Qubit> &train,
                            const std::vector<Qubit> &test, Qubit b);

StateVector hadamard_test_apply(const StateVector &state, const StatePrep &v,
                                const TrainPrep &tr, const DotWires &w);

StateVector qpe_apply(const StateVector &state, const Circuit &unitary,
                      const std::vector<Qubit> &phase);

/// sin(pi theta) = sqrt((1 + s) / 2), theta in [0, 1/2].
double theta_of(double similarity);

enum class Similarity { Fidelity, Dot };

struct EigenReport {
    double similarity{0.0};
    double theta_expected{0.0};
    double theta_measured{0.0};
    double eigenvalue_error{0.0};   ///< max |G_j Psi_{j+-} - e^{+-i2pi theta} Psi_{j+-}|
    double decomposition_error{0.0};
    double invariance_error{0.0};   ///< leakage of G_j out of span(Psi_j0, Psi_j1)
    bool degenerate{false};         ///< beta_j = 0; decomposition skipped
};

/// Diagonalizes block j of the constructed G (or H) on the span of
/// Psi_j0, Psi_j1 and checks it against the closed-form eigenstructure.
EigenReport verify_eigendecomposition(const StatePrep &v, const TrainPrep &tr,
                                      std::size_t j, Similarity kind);

/// |Psi_j> for the fidelity construction on (train, test, B), little-endian
/// in that order.
State swap_test_state(const State &phi, const State &psi);
/// |Psi_j> for the dot-product construction on (data, B).
State hadamard_test_state(const State &u, const State &v);

} // namespace qknn
