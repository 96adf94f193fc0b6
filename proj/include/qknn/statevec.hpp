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
 * Dense state-vector engine with named registers.
 */
#pragma once

#include "qknn/gate.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qknn {

/// Contiguous qubit range. Bit k of the register value lives on start + k.
struct Register {
    std::string name;
    Qubit start{0};
    std::size_t size{0};

    Qubit operator[](std::size_t k) const { return start + k; }
    std::vector<Qubit> qubits() const;
};

class RegisterLayout {
  public:
    /// Appends a register after the last declared one.
    const Register &add(const std::string &name, std::size_t size);

    const Register &get(const std::string &name) const;
    bool has(const std::string &name) const;
    std::size_t num_qubits() const { return next_; }
    const std::vector<Register> &registers() const { return regs_; }

    /// Qubits of several registers concatenated in the given order.
    std::vector<Qubit> qubits(const std::vector<std::string> &names) const;

  private:
    std::vector<Register> regs_;
    std::size_t next_{0};
};

class StateVector {
  public:
    /// |0...0> on `num_qubits` qubits.
    explicit StateVector(std::size_t num_qubits);
    explicit StateVector(const RegisterLayout &layout);
    /// Takes ownership of `amplitudes`, whose length must be a power of two.
    explicit StateVector(std::vector<Complex> amplitudes,
                         RegisterLayout layout = {});

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<Complex> &amplitudes() const { return amps_; }
    std::vector<Complex> &amplitudes() { return amps_; }
    Complex operator[](std::size_t i) const { return amps_[i]; }

    const RegisterLayout &layout() const { return layout_; }
    void set_layout(RegisterLayout layout);

    double norm() const;
    void normalize();

    /// Sets the basis state |index>.
    void set_basis(std::uint64_t index);

    StateVector &apply(const Gate &gate);
    StateVector &apply(const Circuit &circuit);

  private:
    std::size_t num_qubits_;
    std::vector<Complex> amps_;
    RegisterLayout layout_;
};

/// Applies `gate` to a raw amplitude array over `num_qubits` qubits.
void apply_gate(std::vector<Complex> &amps, std::size_t num_qubits,
                const Gate &gate);
/// As above, given that every qubit in `zero_mask` is known to be |0>.
void apply_gate(std::vector<Complex> &amps, std::size_t num_qubits,
                const Gate &gate, std::uint64_t zero_mask);

/// Marginal Born probabilities over `qubits`, little-endian in list order.
std::vector<double> measure_probs(const StateVector &state,
                                  const std::vector<Qubit> &qubits);
std::vector<double> measure_probs(const StateVector &state,
                                  const std::string &reg);

struct Measurement {
    std::uint64_t outcome;
    StateVector collapsed;
};

Measurement sample_measurement(const StateVector &state,
                               const std::vector<Qubit> &qubits,
                               std::uint64_t seed);
Measurement sample_measurement(const StateVector &state, const std::string &reg,
                               std::uint64_t seed);

/// Projects onto `outcome` of `qubits` and renormalizes.
StateVector collapse(const StateVector &state, const std::vector<Qubit> &qubits,
                     std::uint64_t outcome);

/// <a|b>
Complex inner_product(const StateVector &a, const StateVector &b);
Complex inner_product(std::span<const Complex> a, std::span<const Complex> b);

/// Hermitian, unit-trace matrix.
class DensityMatrix {
  public:
    explicit DensityMatrix(Eigen::MatrixXcd rho);

    std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
    const Eigen::MatrixXcd &matrix() const { return rho_; }

    Complex trace() const { return rho_.trace(); }
    double purity() const;
    /// Ascending eigenvalues.
    Eigen::VectorXd eigenvalues() const;
    /// -Tr(rho log2 rho)
    double von_neumann_entropy() const;

  private:
    Eigen::MatrixXcd rho_;
};

/// Reduced state on `kept`, little-endian in list order.
DensityMatrix partial_trace(const StateVector &state,
                            const std::vector<Qubit> &kept);
DensityMatrix partial_trace(const StateVector &state,
                            const std::vector<std::string> &regs);

/// Full unitary of `circuit` on `num_qubits` qubits (column j = image of |j>).
Eigen::MatrixXcd circuit_matrix(const Circuit &circuit, std::size_t num_qubits);

/// JSON with "num_qubits", "amplitudes" ([re, im] pairs) and "layout"
/// (name -> [start, len]).
std::string dump_json(const StateVector &state);
StateVector load_json(const std::string &text);

} // namespace qknn
