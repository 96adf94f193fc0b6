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
#include "qknn/gate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qknn {

namespace {

constexpr double kUnitaryTol = 1e-12;

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::vector<Complex> adjoint(std::span<const Complex> m, std::size_t dim) {
    std::vector<Complex> out(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            out[c * dim + r] = std::conj(m[r * dim + c]);
        }
    }
    return out;
}

void require_unitary(std::span<const Complex> m, std::size_t dim,
                     const std::string &name) {
    const double err = unitarity_error(m, dim);
    if (!(err <= kUnitaryTol)) {
        throw ValidationError("gate " + name +
                              ": matrix is not unitary (deviation " +
                              std::to_string(err) + ")");
    }
}

std::string toggle_dagger(const std::string &name) {
    static const std::string suffix = "_dg";
    if (name.size() > suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return name.substr(0, name.size() - suffix.size());
    }
    return name + suffix;
}

bool self_inverse_name(const std::string &name) {
    return name == "H" || name == "X" || name == "Z" || name == "CNOT" ||
           name == "TOFFOLI" || name == "CSWAP" || name == "SWAP" ||
           name == "MCX";
}

} // namespace

double unitarity_error(std::span<const Complex> m, std::size_t dim) {
    if (m.size() != dim * dim) {
        return std::numeric_limits<double>::infinity();
    }
    double worst = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            Complex acc{0.0, 0.0};
            for (std::size_t k = 0; k < dim; ++k) {
                acc += std::conj(m[k * dim + r]) * m[k * dim + c];
            }
            if (r == c) {
                acc -= 1.0;
            }
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

void Gate::check_distinct() const {
    auto all = qubits();
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
        throw ValidationError("gate " + name_ + ": qubit used more than once");
    }
}

std::vector<Qubit> Gate::qubits() const {
    std::vector<Qubit> all;
    all.reserve(targets_.size() + controls_.size() + select_.size());
    all.insert(all.end(), targets_.begin(), targets_.end());
    all.insert(all.end(), controls_.begin(), controls_.end());
    all.insert(all.end(), select_.begin(), select_.end());
    return all;
}

Qubit Gate::max_qubit() const {
    const auto all = qubits();
    return all.empty() ? 0 : *std::max_element(all.begin(), all.end());
}

Gate Gate::controlled(std::span<const Qubit> extra) const {
    Gate g = *this;
    g.controls_.insert(g.controls_.end(), extra.begin(), extra.end());
    g.check_distinct();
    return g;
}

Gate Gate::controlled(Qubit extra) const {
    return controlled(std::span<const Qubit>(&extra, 1));
}

Gate Gate::tagged(OracleTag tag) const {
    Gate g = *this;
    g.tag_ = tag;
    return g;
}

Gate Gate::renamed(std::string name) const {
    Gate g = *this;
    g.name_ = std::move(name);
    return g;
}

Gate Gate::inverse() const {
    Gate g = *this;
    switch (kind_) {
    case GateKind::Swap:
    case GateKind::PhaseFlipZero:
        return g;
    case GateKind::Single:
        g.matrices_ = std::make_shared<const std::vector<Complex>>(
            adjoint(*matrices_, 2));
        break;
    case GateKind::Dense: {
        const std::size_t dim = std::size_t{1} << targets_.size();
        g.matrices_ = std::make_shared<const std::vector<Complex>>(
            adjoint(*matrices_, dim));
        break;
    }
    case GateKind::Multiplexed: {
        const std::size_t dim = std::size_t{1} << targets_.size();
        const std::size_t blocks = std::size_t{1} << select_.size();
        std::vector<Complex> out;
        out.reserve(matrices_->size());
        for (std::size_t s = 0; s < blocks; ++s) {
            auto adj = adjoint(
                std::span<const Complex>(matrices_->data() + s * dim * dim,
                                         dim * dim),
                dim);
            out.insert(out.end(), adj.begin(), adj.end());
        }
        g.matrices_ = std::make_shared<const std::vector<Complex>>(std::move(out));
        break;
    }
    case GateKind::Permutation: {
        std::vector<std::uint64_t> inv(table_->size());
        for (std::size_t v = 0; v < table_->size(); ++v) {
            inv[(*table_)[v]] = v;
        }
        g.table_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(inv));
        break;
    }
    }
    if (!self_inverse_name(name_)) {
        g.name_ = toggle_dagger(name_);
    }
    return g;
}

Gate make_single(std::string name, Qubit target,
                 const std::array<Complex, 4> &matrix) {
    require_unitary(matrix, 2, name);
    Gate g;
    g.kind_ = GateKind::Single;
    g.name_ = std::move(name);
    g.targets_ = {target};
    g.matrices_ = std::make_shared<const std::vector<Complex>>(matrix.begin(),
                                                               matrix.end());
    return g;
}

Gate make_swap(Qubit a, Qubit b) {
    Gate g;
    g.kind_ = GateKind::Swap;
    g.name_ = "SWAP";
    g.targets_ = {a, b};
    g.check_distinct();
    return g;
}

Gate make_dense(std::string name, std::vector<Qubit> targets,
                std::vector<Complex> matrix) {
    const std::size_t dim = std::size_t{1} << targets.size();
    if (matrix.size() != dim * dim) {
        throw ValidationError("gate " + name + ": matrix size does not match " +
                              std::to_string(targets.size()) + " targets");
    }
    require_unitary(matrix, dim, name);
    Gate g;
    g.kind_ = GateKind::Dense;
    g.name_ = std::move(name);
    g.targets_ = std::move(targets);
    g.matrices_ = std::make_shared<const std::vector<Complex>>(std::move(matrix));
    g.check_distinct();
    return g;
}

Gate make_multiplexed(std::string name, std::vector<Qubit> select,
                      std::vector<Qubit> targets, std::vector<Complex> blocks) {
    const std::size_t dim = std::size_t{1} << targets.size();
    const std::size_t count = std::size_t{1} << select.size();
    if (blocks.size() != count * dim * dim) {
        throw ValidationError("gate " + name +
                              ": expected one block per select value");
    }
    for (std::size_t s = 0; s < count; ++s) {
        require_unitary(std::span<const Complex>(blocks.data() + s * dim * dim,
                                                 dim * dim),
                        dim, name);
    }
    Gate g;
    g.kind_ = GateKind::Multiplexed;
    g.name_ = std::move(name);
    g.select_ = std::move(select);
    g.targets_ = std::move(targets);
    g.matrices_ = std::make_shared<const std::vector<Complex>>(std::move(blocks));
    g.check_distinct();
    return g;
}

Gate make_permutation(std::string name, std::vector<Qubit> targets,
                      std::vector<std::uint64_t> table) {
    const std::size_t dim = std::size_t{1} << targets.size();
    if (table.size() != dim || !is_power_of_two(dim)) {
        throw ValidationError("gate " + name + ": table must have 2^k entries");
    }
    std::vector<bool> seen(dim, false);
    for (const auto v : table) {
        if (v >= dim || seen[v]) {
            throw ValidationError("gate " + name + ": table is not a bijection");
        }
        seen[v] = true;
    }
    Gate g;
    g.kind_ = GateKind::Permutation;
    g.name_ = std::move(name);
    g.targets_ = std::move(targets);
    g.table_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(table));
    g.check_distinct();
    return g;
}

Gate make_phase_flip_zero(std::string name, std::vector<Qubit> targets) {
    if (targets.empty()) {
        throw ValidationError("gate " + name + ": needs at least one target");
    }
    Gate g;
    g.kind_ = GateKind::PhaseFlipZero;
    g.name_ = std::move(name);
    g.targets_ = std::move(targets);
    g.check_distinct();
    return g;
}

namespace gates {

Gate h(Qubit q) {
    const double s = std::numbers::sqrt2 / 2.0;
    return make_single("H", q, {Complex{s}, Complex{s}, Complex{s}, Complex{-s}});
}

Gate x(Qubit q) {
    return make_single("X", q, {Complex{0}, Complex{1}, Complex{1}, Complex{0}});
}

Gate z(Qubit q) {
    return make_single("Z", q, {Complex{1}, Complex{0}, Complex{0}, Complex{-1}});
}

Gate phase(Qubit q, double angle) {
    return make_single("P", q,
                       {Complex{1}, Complex{0}, Complex{0}, std::polar(1.0, angle)});
}

Gate cnot(Qubit control, Qubit target) {
    return x(target).controlled(control).renamed("CNOT");
}

Gate toffoli(Qubit c0, Qubit c1, Qubit target) {
    const std::array<Qubit, 2> ctrl{c0, c1};
    return x(target).controlled(ctrl).renamed("TOFFOLI");
}

Gate cswap(Qubit control, Qubit a, Qubit b) {
    return make_swap(a, b).controlled(control).renamed("CSWAP");
}

Gate mcx(std::span<const Qubit> controls, Qubit target) {
    switch (controls.size()) {
    case 0:
        return x(target);
    case 1:
        return cnot(controls[0], target);
    case 2:
        return toffoli(controls[0], controls[1], target);
    default:
        return x(target).controlled(controls).renamed("MCX");
    }
}

} // namespace gates

Circuit &Circuit::add(Gate gate) {
    gates_.push_back(std::move(gate));
    return *this;
}

Circuit &Circuit::append(const Circuit &other) {
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
}

Circuit Circuit::inverse() const {
    Circuit out;
    out.gates_.reserve(gates_.size());
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
        out.gates_.push_back(it->inverse());
    }
    return out;
}

Circuit Circuit::controlled(std::span<const Qubit> extra) const {
    Circuit out;
    out.gates_.reserve(gates_.size());
    for (const auto &g : gates_) {
        out.gates_.push_back(g.controlled(extra));
    }
    return out;
}

Circuit Circuit::controlled(Qubit extra) const {
    return controlled(std::span<const Qubit>(&extra, 1));
}

std::size_t Circuit::count_tag(OracleTag tag) const {
    return static_cast<std::size_t>(std::count_if(
        gates_.begin(), gates_.end(),
        [tag](const Gate &g) { return g.tag() == tag; }));
}

std::set<Qubit> Circuit::touched_qubits() const {
    std::set<Qubit> out;
    for (const auto &g : gates_) {
        for (const auto q : g.qubits()) {
            out.insert(q);
        }
    }
    return out;
}

std::string Circuit::netlist() const {
    std::ostringstream os;
    auto join = [&os](const std::vector<Qubit> &qs) {
        for (std::size_t i = 0; i < qs.size(); ++i) {
            os << (i ? "," : "") << qs[i];
        }
    };
    for (const auto &g : gates_) {
        os << g.name() << ' ';
        join(g.targets());
        if (!g.controls().empty()) {
            os << " [";
            join(g.controls());
            os << ']';
        }
        if (!g.select().empty()) {
            os << " sel=";
            join(g.select());
        }
        os << '\n';
    }
    return os.str();
}

} // namespace qknn
