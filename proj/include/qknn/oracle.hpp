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
 * The marking oracle for threshold search: reversible comparators, the
 * membership cascade, full circuit assembly and a table-backed shortcut.
 */
#pragma once

#include "qknn/qadc.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qknn {

/// flag ^= (a > b) given that `carry` (when present) is 1.
Circuit build_U_gt(Qubit a, Qubit b, Qubit flag, std::optional<Qubit> carry = {});
/// flag ^= (a != b) given that `carry` (when present) is 1.
Circuit build_U_neq(Qubit a, Qubit b, Qubit flag,
                    std::optional<Qubit> carry = {});

/// out ^= [a > b] for little-endian registers a, b. Needs |a| - 1 clean
/// carry qubits, returned clean.
Circuit build_J(const std::vector<Qubit> &a, const std::vector<Qubit> &b,
                Qubit out, const std::vector<Qubit> &carries,
                bool negate = false);

/// target ^= [index == i]. `scratch` (|index| qubits) and `anc` (|index|
/// qubits: a flag followed by carries) must be clean and are returned clean.
Circuit build_D(std::uint64_t i, const std::vector<Qubit> &index,
                const std::vector<Qubit> &scratch, Qubit target,
                const std::vector<Qubit> &anc);

/// Injected defects used to check that the verifier catches them.
struct OracleFaults {
    bool negate_comparator{false};
};

/// Register layout of the full oracle. Fidelity: index, train, test, B,
/// phase, fid, index', fid', Q1, Q2, Q3, anc. Dot: data replaces
/// train/test and dp replaces fid.
RegisterLayout oracle_layout(std::size_t m, std::size_t n, std::size_t b,
                             Similarity kind);

/// O_{y,A}|j>|0> = |j>|f_{y,A}(j)> with f = [value_j > value_y and j not in A].
Circuit assemble_O_yA(const StatePrep &v, const TrainPrep &tr,
                      const PrecisionConfig &cfg, Similarity kind,
                      std::uint64_t y, const std::vector<std::uint64_t> &A,
                      const RegisterLayout &layout,
                      const OracleFaults &faults = {});

struct QubitAccount {
    std::size_t layout_qubits{0};  ///< qubits declared by the layout
    std::size_t touched_qubits{0}; ///< distinct qubits used by the circuit
    std::size_t k_J{0};
    std::size_t k_D{0};
    std::size_t formula_qubits{0}; ///< recycled-register count from the analysis
    long delta{0};                 ///< layout_qubits - formula_qubits
    std::string explanation;
};

QubitAccount qubit_accounting(std::size_t m, std::size_t n, std::size_t b,
                              Similarity kind,
                              std::optional<std::size_t> touched = {});

/// Source of f_{y,A} and of stored codes for threshold reads.
class OracleBackend {
  public:
    virtual ~OracleBackend() = default;

    virtual std::size_t size() const = 0;
    virtual std::size_t bits() const = 0;
    virtual std::uint64_t code(std::size_t j) const = 0;
    /// f_{y,A}(j) for every j < size().
    virtual std::vector<std::uint8_t>
    evaluate(std::uint64_t y, const std::vector<std::uint64_t> &A) = 0;
    /// Preparation-oracle calls charged to one oracle query.
    virtual std::uint64_t prep_calls_per_query() const = 0;
    virtual std::string name() const = 0;

    std::uint64_t max_code() const { return (std::uint64_t{1} << bits()) - 1; }
};

/// f_{y,A} evaluated from a quantized code table.
class AbstractBackend : public OracleBackend {
  public:
    AbstractBackend(std::vector<std::uint64_t> codes, std::size_t b,
                    Similarity kind = Similarity::Fidelity);

    std::size_t size() const override { return codes_.size(); }
    std::size_t bits() const override { return b_; }
    std::uint64_t code(std::size_t j) const override { return codes_.at(j); }
    std::vector<std::uint8_t>
    evaluate(std::uint64_t y, const std::vector<std::uint64_t> &A) override;
    std::uint64_t prep_calls_per_query() const override;
    std::string name() const override { return "oracle-abstract"; }

  private:
    std::vector<std::uint64_t> codes_;
    std::size_t b_;
    Similarity kind_;
};

/// Result of running one assembled oracle on a uniform index superposition.
struct CircuitEvaluation {
    std::vector<double> p_marked;   ///< P(Q3 = 1 | index = j)
    std::vector<std::uint8_t> marks; ///< most probable Q3 outcome per j
    double ancilla_residual{0.0};   ///< mass outside |0> on non-output wires
    std::size_t num_qubits{0};
    std::size_t prep_calls{0};      ///< tagged gates in the circuit
};

/// f_{y,A} read from full state-vector simulation of the assembled circuit.
class CircuitBackend : public OracleBackend {
  public:
    CircuitBackend(StatePrep v, TrainPrep tr, PrecisionConfig cfg,
                   Similarity kind = Similarity::Fidelity,
                   OracleFaults faults = {});

    std::size_t size() const override { return tr_.num_states(); }
    std::size_t bits() const override { return cfg_.b; }
    std::uint64_t code(std::size_t j) const override { return codes_.at(j); }
    std::vector<std::uint8_t>
    evaluate(std::uint64_t y, const std::vector<std::uint64_t> &A) override;
    std::uint64_t prep_calls_per_query() const override;
    std::string name() const override { return "circuit-exact"; }

    CircuitEvaluation run(std::uint64_t y, const std::vector<std::uint64_t> &A);
    const RegisterLayout &layout() const { return layout_; }
    /// P(code | j) of the standalone conversion circuit.
    const std::vector<std::vector<double>> &code_probs() const { return code_probs_; }
    double worst_ancilla_residual() const { return worst_residual_; }

  private:
    StatePrep v_;
    TrainPrep tr_;
    PrecisionConfig cfg_;
    Similarity kind_;
    OracleFaults faults_;
    RegisterLayout layout_;
    std::vector<std::uint64_t> codes_;
    std::vector<std::vector<double>> code_probs_;
    std::map<std::pair<std::uint64_t, std::vector<std::uint64_t>>,
             std::vector<std::uint8_t>>
        cache_;
    double worst_residual_{0.0};
};

/// Boolean view of f_{y,A} with a query counter.
class OracleHandle {
  public:
    OracleHandle(OracleBackend &backend, std::uint64_t y,
                 std::vector<std::uint64_t> A);

    std::uint64_t y() const { return y_; }
    const std::vector<std::uint64_t> &A() const { return A_; }
    std::size_t size() const { return marks_.size(); }
    const std::vector<std::uint8_t> &marks() const { return marks_; }
    std::size_t num_marked() const { return num_marked_; }

    /// One classical evaluation of f_{y,A}(j); costs one query.
    bool query(std::uint64_t j);
    /// Accounts for `iterations` coherent applications.
    void apply_coherent(std::uint64_t iterations) { queries_ += iterations; }

    std::uint64_t query_count() const { return queries_; }
    std::uint64_t prep_calls() const {
        return queries_ * backend_->prep_calls_per_query();
    }

  private:
    OracleBackend *backend_;
    std::uint64_t y_;
    std::vector<std::uint64_t> A_;
    std::vector<std::uint8_t> marks_;
    std::size_t num_marked_{0};
    std::uint64_t queries_{0};
};

/// Table-backed handle; `table` holds b-bit codes.
OracleHandle oracle_abstract(AbstractBackend &table, std::uint64_t y,
                             const std::vector<std::uint64_t> &A);

/// Checks y < M and that A has distinct members below M.
void validate_threshold(std::size_t M, std::uint64_t y,
                        const std::vector<std::uint64_t> &A);

} // namespace qknn
