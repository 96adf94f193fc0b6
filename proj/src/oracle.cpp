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
#include "qknn/oracle.hpp"

#include <algorithm>
#include <set>

namespace qknn {

namespace {

/// c_k = c_{k+1} AND [a_k == b_k]; the top level has no incoming carry.
Circuit equality_step(Qubit a, Qubit b, Qubit out, std::optional<Qubit> carry) {
    Circuit c;
    c.add(gates::cnot(a, b));
    c.add(gates::x(b));
    if (carry) {
        c.add(gates::toffoli(*carry, b, out));
    } else {
        c.add(gates::cnot(b, out));
    }
    c.add(gates::x(b));
    c.add(gates::cnot(a, b));
    return c;
}

Circuit load_constant(std::uint64_t value, const std::vector<Qubit> &reg) {
    Circuit c;
    for (std::size_t k = 0; k < reg.size(); ++k) {
        if ((value >> k) & 1U) {
            c.add(gates::x(reg[k]));
        }
    }
    return c;
}

std::vector<Qubit> head(const std::vector<Qubit> &v, std::size_t n) {
    return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)};
}

} // namespace

Circuit build_U_gt(Qubit a, Qubit b, Qubit flag, std::optional<Qubit> carry) {
    std::vector<Qubit> ctrl;
    if (carry) {
        ctrl.push_back(*carry);
    }
    ctrl.push_back(a);
    ctrl.push_back(b);
    Circuit c;
    c.add(gates::x(b));
    c.add(gates::mcx(ctrl, flag));
    c.add(gates::x(b));
    return c;
}

Circuit build_U_neq(Qubit a, Qubit b, Qubit flag, std::optional<Qubit> carry) {
    std::vector<Qubit> ctrl;
    if (carry) {
        ctrl.push_back(*carry);
    }
    ctrl.push_back(b);
    Circuit c;
    c.add(gates::cnot(a, b));
    c.add(gates::mcx(ctrl, flag));
    c.add(gates::cnot(a, b));
    return c;
}

Circuit build_J(const std::vector<Qubit> &a, const std::vector<Qubit> &b,
                Qubit out, const std::vector<Qubit> &carries, bool negate) {
    const std::size_t nb = a.size();
    if (nb == 0 || b.size() != nb) {
        throw ValidationError("comparator: operands must have equal nonzero width");
    }
    if (carries.size() + 1 < nb) {
        throw ValidationError("comparator: needs " + std::to_string(nb - 1) +
                              " carry qubits");
    }
    // carry for level k (k < nb - 1) lives on carries[k]: all bits above k equal.
    auto carry_of = [&](std::size_t k) -> std::optional<Qubit> {
        if (k + 1 >= nb) {
            return std::nullopt;
        }
        return carries[k];
    };
    Circuit c;
    std::vector<Circuit> steps;
    for (std::size_t k = nb; k-- > 0;) {
        c.append(build_U_gt(a[k], b[k], out, carry_of(k)));
        if (k >= 1) {
            steps.push_back(equality_step(a[k], b[k], carries[k - 1], carry_of(k)));
            c.append(steps.back());
        }
    }
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        c.append(it->inverse());
    }
    if (negate) {
        c.add(gates::x(out));
    }
    return c;
}

Circuit build_D(std::uint64_t i, const std::vector<Qubit> &index,
                const std::vector<Qubit> &scratch, Qubit target,
                const std::vector<Qubit> &anc) {
    const std::size_t m = index.size();
    if (m == 0 || scratch.size() != m || anc.size() < m) {
        throw ValidationError("membership gate: register sizes do not match");
    }
    if (m < 64 && (i >> m) != 0) {
        throw ValidationError("membership gate: value " + std::to_string(i) +
                              " does not fit the index register");
    }
    const Qubit flag = anc[0];
    // carry for level k (k < m - 1) lives on anc[k + 1].
    auto carry_of = [&](std::size_t k) -> std::optional<Qubit> {
        if (k + 1 >= m) {
            return std::nullopt;
        }
        return anc[k + 1];
    };
    const Circuit prep = load_constant(i, scratch);
    Circuit cascade;
    for (std::size_t k = m; k-- > 0;) {
        cascade.append(build_U_neq(index[k], scratch[k], flag, carry_of(k)));
        if (k >= 1) {
            cascade.append(
                equality_step(index[k], scratch[k], anc[k], carry_of(k)));
        }
    }
    Circuit c = prep;
    c.append(cascade);
    c.add(gates::x(flag));
    c.add(gates::cnot(flag, target));
    c.add(gates::x(flag));
    c.append(cascade.inverse());
    c.append(prep.inverse());
    return c;
}

RegisterLayout oracle_layout(std::size_t m, std::size_t n, std::size_t b,
                             Similarity kind) {
    RegisterLayout l;
    l.add("index", m);
    if (kind == Similarity::Fidelity) {
        l.add("train", n);
        l.add("test", n);
    } else {
        l.add("data", n);
    }
    l.add("B", 1);
    l.add("phase", b);
    const char *out = kind == Similarity::Fidelity ? "fid" : "dp";
    l.add(out, b);
    l.add("index'", m);
    l.add(std::string(out) + "'", b);
    l.add("Q1", 1);
    l.add("Q2", 1);
    l.add("Q3", 1);
    l.add("anc", std::max({b > 0 ? b - 1 : 0, m, std::size_t{1}}));
    return l;
}

Circuit assemble_O_yA(const StatePrep &v, const TrainPrep &tr,
                      const PrecisionConfig &cfg, Similarity kind,
                      std::uint64_t y, const std::vector<std::uint64_t> &A,
                      const RegisterLayout &l, const OracleFaults &faults) {
    const std::size_t m = tr.index_qubits();
    validate_threshold(std::size_t{1} << m, y, A);
    const bool fid = kind == Similarity::Fidelity;
    const std::string out = fid ? "fid" : "dp";
    if (l.get("index").size != m || l.get("phase").size != cfg.b ||
        l.get("anc").size < std::max(cfg.b - 1, m)) {
        throw ValidationError("oracle layout too small for this configuration");
    }
    const auto index = l.get("index").qubits();
    const auto index2 = l.get("index'").qubits();
    const auto val = l.get(out).qubits();
    const auto val2 = l.get(out + "'").qubits();
    const auto phase = l.get("phase").qubits();
    const auto anc = l.get("anc").qubits();
    const Qubit q1 = l.get("Q1").start;
    const Qubit q2 = l.get("Q2").start;
    const Qubit q3 = l.get("Q3").start;

    Circuit conv1;
    Circuit conv2;
    if (fid) {
        FidelityQadcWires w;
        w.amp.train = l.get("train").qubits();
        w.amp.test = l.get("test").qubits();
        w.amp.b = l.get("B").start;
        w.phase = phase;
        w.amp.index = index;
        w.out = val;
        conv1 = build_F(v, tr, w, cfg);
        w.amp.index = index2;
        w.out = val2;
        conv2 = build_F(v, tr, w, cfg);
    } else {
        DotQadcWires w;
        w.amp.data = l.get("data").qubits();
        w.amp.b = l.get("B").start;
        w.phase = phase;
        w.amp.index = index;
        w.out = val;
        conv1 = build_X_dot(v, tr, w, cfg);
        w.amp.index = index2;
        w.out = val2;
        conv2 = build_X_dot(v, tr, w, cfg);
    }
    const Circuit conv2_inv = conv2.inverse();
    const Circuit load_y = load_constant(y, index2);
    const Circuit cmp =
        build_J(val, val2, q1, head(anc, cfg.b - 1), faults.negate_comparator);
    Circuit member;
    for (const auto i : A) {
        member.append(build_D(i, index, index2, q2, head(anc, m)));
    }

    // Q1 = [value_j > value_y], with index'/value' recycled afterwards.
    Circuit threshold = load_y;
    threshold.append(conv2);
    threshold.append(cmp);
    threshold.append(conv2_inv);
    threshold.append(load_y);

    Circuit c = conv1;
    c.append(threshold);
    c.append(member);
    c.add(gates::x(q2));
    c.add(gates::toffoli(q1, q2, q3));
    c.add(gates::x(q2));
    c.append(member.inverse());
    c.append(threshold.inverse());
    c.append(conv1.inverse());
    return c;
}

QubitAccount qubit_accounting(std::size_t m, std::size_t n, std::size_t b,
                              Similarity kind, std::optional<std::size_t> touched) {
    QubitAccount q;
    q.layout_qubits = oracle_layout(m, n, b, kind).num_qubits();
    q.touched_qubits = touched.value_or(q.layout_qubits);
    q.k_J = b > 0 ? b - 1 : 0;
    q.k_D = m;
    const long lm = static_cast<long>(m);
    const long lb = static_cast<long>(b);
    const long kj = static_cast<long>(q.k_J);
    const long kd = static_cast<long>(q.k_D);
    const long data = kind == Similarity::Fidelity ? 2 * static_cast<long>(n)
                                                   : static_cast<long>(n);
    const long formula =
        2 * lm + 2 * lb + kj + 1 + std::max(kd + 2 - lm - lb, data + lb - kj);
    q.formula_qubits = static_cast<std::size_t>(formula);
    q.delta = static_cast<long>(q.layout_qubits) - formula;
    const std::size_t anc = std::max({q.k_J, q.k_D, std::size_t{1}});
    q.explanation =
        "layout keeps the " + std::to_string(data + lb + 1) +
        " conversion work qubits (data, B, phase) separate from the " +
        std::to_string(3 + anc) +
        " comparator/membership qubits (Q1, Q2, Q3 and " + std::to_string(anc) +
        " ancillas, sized max(k_J, k_D, 1)); the recycled count reuses the "
        "uncomputed work qubits for them";
    return q;
}

void validate_threshold(std::size_t M, std::uint64_t y,
                        const std::vector<std::uint64_t> &A) {
    if (y >= M) {
        throw ValidationError("threshold index " + std::to_string(y) +
                              " out of range");
    }
    std::set<std::uint64_t> seen;
    for (const auto a : A) {
        if (a >= M) {
            throw ValidationError("set member " + std::to_string(a) +
                                  " out of range");
        }
        if (!seen.insert(a).second) {
            throw ValidationError("set members must be distinct");
        }
    }
}

AbstractBackend::AbstractBackend(std::vector<std::uint64_t> codes, std::size_t b,
                                 Similarity kind)
    : codes_(std::move(codes)), b_(b), kind_(kind) {
    if (codes_.empty()) {
        throw ValidationError("empty code table");
    }
    if (b_ == 0 || b_ > 62) {
        throw ValidationError("code width must be in [1, 62]");
    }
    for (const auto c : codes_) {
        if (c > max_code()) {
            throw ValidationError("code does not fit in b bits");
        }
    }
}

std::vector<std::uint8_t>
AbstractBackend::evaluate(std::uint64_t y, const std::vector<std::uint64_t> &A) {
    validate_threshold(codes_.size(), y, A);
    std::vector<std::uint8_t> f(codes_.size(), 0);
    const std::uint64_t thr = codes_[y];
    for (std::size_t j = 0; j < codes_.size(); ++j) {
        f[j] = codes_[j] > thr ? 1 : 0;
    }
    for (const auto a : A) {
        f[a] = 0;
    }
    return f;
}

std::uint64_t AbstractBackend::prep_calls_per_query() const {
    return b_ < 32 ? 6 * prep_calls_per_conversion(b_, kind_) : 0;
}

CircuitBackend::CircuitBackend(StatePrep v, TrainPrep tr, PrecisionConfig cfg,
                               Similarity kind, OracleFaults faults)
    : v_(std::move(v)), tr_(std::move(tr)), cfg_(cfg), kind_(kind),
      faults_(faults) {
    cfg_.validate(1, 8);
    const std::size_t m = tr_.index_qubits();
    if (tr_.num_states() != (std::size_t{1} << m)) {
        throw ValidationError("circuit-exact mode needs a power-of-two train set");
    }
    if (v_.num_qubits() != tr_.num_qubits()) {
        throw ValidationError("test and train states differ in qubit count");
    }
    layout_ = oracle_layout(m, tr_.num_qubits(), cfg_.b, kind_);
    if (layout_.num_qubits() > 24) {
        throw ValidationError("circuit-exact instance needs " +
                              std::to_string(layout_.num_qubits()) +
                              " qubits; the limit is 24");
    }

    StateVector s(layout_);
    const auto index = layout_.get("index").qubits();
    for (const auto q : index) {
        s.apply(gates::h(q));
    }
    std::vector<Qubit> out;
    if (kind_ == Similarity::Fidelity) {
        FidelityQadcWires w;
        w.amp = {index, layout_.get("train").qubits(), layout_.get("test").qubits(),
                 layout_.get("B").start};
        w.phase = layout_.get("phase").qubits();
        w.out = out = layout_.get("fid").qubits();
        s.apply(build_F(v_, tr_, w, cfg_));
    } else {
        DotQadcWires w;
        w.amp = {index, layout_.get("data").qubits(), layout_.get("B").start};
        w.phase = layout_.get("phase").qubits();
        w.out = out = layout_.get("dp").qubits();
        s.apply(build_X_dot(v_, tr_, w, cfg_));
    }
    code_probs_ = conditional_probs(s, index, out);
    for (const auto &row : code_probs_) {
        codes_.push_back(static_cast<std::uint64_t>(
            std::max_element(row.begin(), row.end()) - row.begin()));
    }
}

CircuitEvaluation CircuitBackend::run(std::uint64_t y,
                                      const std::vector<std::uint64_t> &A) {
    const Circuit c = assemble_O_yA(v_, tr_, cfg_, kind_, y, A, layout_, faults_);
    StateVector s(layout_);
    const auto index = layout_.get("index").qubits();
    for (const auto q : index) {
        s.apply(gates::h(q));
    }
    s.apply(c);

    const Qubit q3 = layout_.get("Q3").start;
    CircuitEvaluation ev;
    ev.num_qubits = layout_.num_qubits();
    ev.prep_calls = c.count_tag(OracleTag::PrepV) + c.count_tag(OracleTag::PrepW);
    for (const auto &row : conditional_probs(s, index, {q3})) {
        ev.p_marked.push_back(row[1]);
        ev.marks.push_back(row[1] > 0.5 ? 1 : 0);
    }
    std::vector<Qubit> rest;
    for (Qubit q = 0; q < layout_.num_qubits(); ++q) {
        if (q != q3 && std::find(index.begin(), index.end(), q) == index.end()) {
            rest.push_back(q);
        }
    }
    ev.ancilla_residual = std::max(0.0, 1.0 - measure_probs(s, rest)[0]);
    worst_residual_ = std::max(worst_residual_, ev.ancilla_residual);
    return ev;
}

std::vector<std::uint8_t>
CircuitBackend::evaluate(std::uint64_t y, const std::vector<std::uint64_t> &A) {
    validate_threshold(size(), y, A);
    auto key = std::make_pair(y, A);
    std::sort(key.second.begin(), key.second.end());
    auto it = cache_.find(key);
    if (it == cache_.end()) {
        it = cache_.emplace(key, run(y, A).marks).first;
    }
    return it->second;
}

std::uint64_t CircuitBackend::prep_calls_per_query() const {
    return 6 * prep_calls_per_conversion(cfg_.b, kind_);
}

OracleHandle::OracleHandle(OracleBackend &backend, std::uint64_t y,
                           std::vector<std::uint64_t> A)
    : backend_(&backend), y_(y), A_(std::move(A)) {
    marks_ = backend.evaluate(y_, A_);
    num_marked_ = static_cast<std::size_t>(
        std::count(marks_.begin(), marks_.end(), std::uint8_t{1}));
}

bool OracleHandle::query(std::uint64_t j) {
    ++queries_;
    return j < marks_.size() && marks_[j] != 0;
}

OracleHandle oracle_abstract(AbstractBackend &table, std::uint64_t y,
                             const std::vector<std::uint64_t> &A) {
    return OracleHandle(table, y, A);
}

} // namespace qknn
