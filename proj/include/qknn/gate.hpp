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
 * Gate and circuit descriptions consumed by the dense state-vector engine.
 *
 * A gate is a unitary acting on a list of target qubits, optionally guarded
 * by control qubits (all of which must be |1>). Matrices use little-endian
 * target ordering: targets[0] is the least significant bit of the matrix
 * row/column index.
 */
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qknn {

using Complex = std::complex<double>;
using Qubit = std::size_t;

/// Thrown when an argument violates a documented precondition.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class GateKind {
    Single,        ///< 2x2 matrix on one target
    Swap,          ///< exchange two qubits
    Dense,         ///< 2^k x 2^k matrix on k targets
    Multiplexed,   ///< one dense matrix per value of a select register
    Permutation,   ///< bijection on the basis states of the targets
    PhaseFlipZero, ///< 1 - 2|0..0><0..0| on the targets
};

/// Marks gates that stand for one call to a state-preparation oracle.
enum class OracleTag : std::uint8_t { None, PrepV, PrepW };

class Gate {
  public:
    GateKind kind() const { return kind_; }
    const std::string &name() const { return name_; }
    const std::vector<Qubit> &targets() const { return targets_; }
    const std::vector<Qubit> &controls() const { return controls_; }
    const std::vector<Qubit> &select() const { return select_; }
    OracleTag tag() const { return tag_; }

    /// Row-major matrix data. Single: 4 entries, Dense: d*d, Multiplexed:
    /// (2^|select|) consecutive d*d blocks.
    const std::vector<Complex> &matrices() const { return *matrices_; }
    const std::vector<std::uint64_t> &table() const { return *table_; }

    /// Copy of this gate with additional control qubits.
    Gate controlled(std::span<const Qubit> extra) const;
    Gate controlled(Qubit extra) const;
    Gate inverse() const;
    Gate tagged(OracleTag tag) const;
    Gate renamed(std::string name) const;

    /// Every qubit the gate reads or writes.
    std::vector<Qubit> qubits() const;
    Qubit max_qubit() const;

    friend Gate make_single(std::string, Qubit, const std::array<Complex, 4> &);
    friend Gate make_swap(Qubit, Qubit);
    friend Gate make_dense(std::string, std::vector<Qubit>, std::vector<Complex>);
    friend Gate make_multiplexed(std::string, std::vector<Qubit>,
                                 std::vector<Qubit>, std::vector<Complex>);
    friend Gate make_permutation(std::string, std::vector<Qubit>,
                                 std::vector<std::uint64_t>);
    friend Gate make_phase_flip_zero(std::string, std::vector<Qubit>);

  private:
    Gate() = default;
    void check_distinct() const;

    GateKind kind_{GateKind::Single};
    std::string name_;
    std::vector<Qubit> targets_;
    std::vector<Qubit> controls_;
    std::vector<Qubit> select_;
    std::shared_ptr<const std::vector<Complex>> matrices_;
    std::shared_ptr<const std::vector<std::uint64_t>> table_;
    OracleTag tag_{OracleTag::None};
};

/// Largest deviation of U^dagger U from the identity (max-abs entry).
double unitarity_error(std::span<const Complex> matrix, std::size_t dim);

Gate make_single(std::string name, Qubit target,
                 const std::array<Complex, 4> &matrix);
Gate make_swap(Qubit a, Qubit b);
Gate make_dense(std::string name, std::vector<Qubit> targets,
                std::vector<Complex> matrix);
Gate make_multiplexed(std::string name, std::vector<Qubit> select,
                      std::vector<Qubit> targets, std::vector<Complex> blocks);
/// `table[v]` is the image of basis value v of the packed target register.
Gate make_permutation(std::string name, std::vector<Qubit> targets,
                      std::vector<std::uint64_t> table);
Gate make_phase_flip_zero(std::string name, std::vector<Qubit> targets);

namespace gates {
Gate h(Qubit q);
Gate x(Qubit q);
Gate z(Qubit q);
/// diag(1, e^{i angle})
Gate phase(Qubit q, double angle);
Gate cnot(Qubit control, Qubit target);
Gate toffoli(Qubit c0, Qubit c1, Qubit target);
Gate cswap(Qubit control, Qubit a, Qubit b);
/// X on `target` guarded by an arbitrary control set.
Gate mcx(std::span<const Qubit> controls, Qubit target);
} // namespace gates

/// Ordered gate list. Gates are applied front to back.
class Circuit {
  public:
    Circuit() = default;

    Circuit &add(Gate gate);
    Circuit &append(const Circuit &other);

    Circuit inverse() const;
    Circuit controlled(std::span<const Qubit> extra) const;
    Circuit controlled(Qubit extra) const;

    const std::vector<Gate> &gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    bool empty() const { return gates_.empty(); }

    std::size_t count_tag(OracleTag tag) const;
    std::set<Qubit> touched_qubits() const;

    /// One gate per line: `NAME t0,t1 [c0,c1]`; multiplexed gates append
    /// their select qubits as `sel=s0,s1`.
    std::string netlist() const;

  private:
    std::vector<Gate> gates_;
};

} // namespace qknn
