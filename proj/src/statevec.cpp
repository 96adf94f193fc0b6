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
#include "qknn/statevec.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace qknn {

namespace {

/// Spreads the low bits of `v` onto the positions listed in `pos`.
std::uint64_t deposit(std::uint64_t v, const std::vector<Qubit> &pos) {
    std::uint64_t out = 0;
    for (std::size_t k = 0; k < pos.size(); ++k) {
        if ((v >> k) & 1U) {
            out |= std::uint64_t{1} << pos[k];
        }
    }
    return out;
}

std::uint64_t extract(std::uint64_t idx, const std::vector<Qubit> &pos) {
    std::uint64_t out = 0;
    for (std::size_t k = 0; k < pos.size(); ++k) {
        out |= ((idx >> pos[k]) & 1U) << k;
    }
    return out;
}

/// Iterates over all basis indices whose `fixed` bits are zero, calling
/// fn(index | set_mask).
template <class Fn>
void for_each_base(std::size_t num_qubits, const std::vector<Qubit> &fixed,
                   std::uint64_t set_mask, Fn &&fn) {
    std::uint64_t hole = 0;
    for (const auto p : fixed) {
        hole |= std::uint64_t{1} << p;
    }
    const std::uint64_t count = std::uint64_t{1}
                                << (num_qubits - fixed.size());
    // (idx | hole) + 1 carries straight across the fixed bits.
    std::uint64_t idx = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        fn(idx | set_mask);
        idx = ((idx | hole) + 1) & ~hole;
    }
}

void check_range(const Gate &gate, std::size_t num_qubits) {
    for (const auto q : gate.qubits()) {
        if (q >= num_qubits) {
            throw ValidationError("gate " + gate.name() + ": qubit " +
                                  std::to_string(q) + " out of range for " +
                                  std::to_string(num_qubits) + " qubits");
        }
    }
}

void apply_single(std::vector<Complex> &a, std::size_t n, const Gate &g,
                  const std::vector<Qubit> &fixed, std::uint64_t cmask) {
    const auto &m = g.matrices();
    const Qubit t = g.targets()[0];
    const std::uint64_t bit = std::uint64_t{1} << t;
    const Complex m00 = m[0], m01 = m[1], m10 = m[2], m11 = m[3];
    if (m01 == Complex{} && m10 == Complex{}) {
        for_each_base(n, fixed, cmask, [&](std::uint64_t i) {
            a[i] *= m00;
            a[i | bit] *= m11;
        });
    } else if (m00 == Complex{} && m11 == Complex{}) {
        for_each_base(n, fixed, cmask, [&](std::uint64_t i) {
            const Complex a0 = a[i];
            a[i] = m01 * a[i | bit];
            a[i | bit] = m10 * a0;
        });
    } else {
        for_each_base(n, fixed, cmask, [&](std::uint64_t i) {
            const Complex a0 = a[i];
            const Complex a1 = a[i | bit];
            a[i] = m00 * a0 + m01 * a1;
            a[i | bit] = m10 * a0 + m11 * a1;
        });
    }
}

} // namespace

std::vector<Qubit> Register::qubits() const {
    std::vector<Qubit> out(size);
    std::iota(out.begin(), out.end(), start);
    return out;
}

const Register &RegisterLayout::add(const std::string &name, std::size_t size) {
    if (has(name)) {
        throw ValidationError("duplicate register '" + name + "'");
    }
    regs_.push_back(Register{name, next_, size});
    next_ += size;
    return regs_.back();
}

const Register &RegisterLayout::get(const std::string &name) const {
    for (const auto &r : regs_) {
        if (r.name == name) {
            return r;
        }
    }
    throw ValidationError("unknown register '" + name + "'");
}

bool RegisterLayout::has(const std::string &name) const {
    return std::any_of(regs_.begin(), regs_.end(),
                       [&](const Register &r) { return r.name == name; });
}

std::vector<Qubit>
RegisterLayout::qubits(const std::vector<std::string> &names) const {
    std::vector<Qubit> out;
    for (const auto &n : names) {
        const auto qs = get(n).qubits();
        out.insert(out.end(), qs.begin(), qs.end());
    }
    return out;
}

StateVector::StateVector(std::size_t num_qubits)
    : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits) {
    if (num_qubits > 30) {
        throw ValidationError("state vector limited to 30 qubits");
    }
    amps_[0] = 1.0;
}

StateVector::StateVector(const RegisterLayout &layout)
    : StateVector(layout.num_qubits()) {
    layout_ = layout;
}

StateVector::StateVector(std::vector<Complex> amplitudes, RegisterLayout layout)
    : num_qubits_(0), amps_(std::move(amplitudes)), layout_(std::move(layout)) {
    const std::size_t d = amps_.size();
    if (d == 0 || (d & (d - 1)) != 0) {
        throw ValidationError("amplitude count must be a power of two");
    }
    while ((std::size_t{1} << num_qubits_) < d) {
        ++num_qubits_;
    }
    if (layout_.num_qubits() > num_qubits_) {
        throw ValidationError("layout larger than state");
    }
}

void StateVector::set_layout(RegisterLayout layout) {
    if (layout.num_qubits() > num_qubits_) {
        throw ValidationError("layout larger than state");
    }
    layout_ = std::move(layout);
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto &c : amps_) {
        s += std::norm(c);
    }
    return std::sqrt(s);
}

void StateVector::normalize() {
    const double nrm = norm();
    if (nrm == 0.0) {
        throw ValidationError("cannot normalize the zero vector");
    }
    for (auto &c : amps_) {
        c /= nrm;
    }
}

void StateVector::set_basis(std::uint64_t index) {
    if (index >= amps_.size()) {
        throw ValidationError("basis index out of range");
    }
    std::fill(amps_.begin(), amps_.end(), Complex{});
    amps_[index] = 1.0;
}

StateVector &StateVector::apply(const Gate &gate) {
    apply_gate(amps_, num_qubits_, gate);
    return *this;
}

StateVector &StateVector::apply(const Circuit &circuit) {
    // Qubits whose |1> half is exactly zero stay so until a gate targets them.
    std::uint64_t occupied = 0;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (amps_[i] != Complex{}) {
            occupied |= i;
        }
    }
    const std::uint64_t all =
        num_qubits_ >= 64 ? ~std::uint64_t{0}
                          : (std::uint64_t{1} << num_qubits_) - 1;
    std::uint64_t zero = ~occupied & all;
    for (const auto &g : circuit.gates()) {
        apply_gate(amps_, num_qubits_, g, zero);
        const bool diagonal =
            g.kind() == GateKind::PhaseFlipZero ||
            (g.kind() == GateKind::Single && g.matrices()[1] == Complex{} &&
             g.matrices()[2] == Complex{});
        if (!diagonal) {
            for (const auto t : g.targets()) {
                zero &= ~(std::uint64_t{1} << t);
            }
        }
    }
    return *this;
}

void apply_gate(std::vector<Complex> &a, std::size_t n, const Gate &g) {
    apply_gate(a, n, g, 0);
}

void apply_gate(std::vector<Complex> &a, std::size_t n, const Gate &g,
                std::uint64_t zero_mask) {
    check_range(g, n);
    std::uint64_t cmask = 0;
    for (const auto c : g.controls()) {
        cmask |= std::uint64_t{1} << c;
    }
    if ((cmask & zero_mask) != 0) {
        return;
    }
    const auto &tg = g.targets();
    std::vector<Qubit> fixed = g.controls();
    fixed.insert(fixed.end(), tg.begin(), tg.end());
    {
        std::uint64_t used = cmask;
        for (const auto q : g.qubits()) {
            used |= std::uint64_t{1} << q;
        }
        for (Qubit q = 0; q < n; ++q) {
            if (((zero_mask & ~used) >> q) & 1U) {
                fixed.push_back(q);
            }
        }
    }

    switch (g.kind()) {
    case GateKind::Single:
        apply_single(a, n, g, fixed, cmask);
        return;
    case GateKind::Swap: {
        const std::uint64_t b0 = std::uint64_t{1} << tg[0];
        const std::uint64_t b1 = std::uint64_t{1} << tg[1];
        for_each_base(n, fixed, cmask,
                      [&](std::uint64_t i) { std::swap(a[i | b0], a[i | b1]); });
        return;
    }
    case GateKind::PhaseFlipZero:
        for_each_base(n, fixed, cmask, [&](std::uint64_t i) { a[i] = -a[i]; });
        return;
    case GateKind::Permutation: {
        const auto &table = g.table();
        const std::size_t d = table.size();
        std::vector<std::uint64_t> off(d), dst(d);
        for (std::size_t v = 0; v < d; ++v) {
            off[v] = deposit(v, tg);
        }
        for (std::size_t v = 0; v < d; ++v) {
            dst[v] = off[table[v]];
        }
        std::vector<Complex> buf(d);
        for_each_base(n, fixed, cmask, [&](std::uint64_t i) {
            for (std::size_t v = 0; v < d; ++v) {
                buf[v] = a[i | off[v]];
            }
            for (std::size_t v = 0; v < d; ++v) {
                a[i | dst[v]] = buf[v];
            }
        });
        return;
    }
    case GateKind::Dense:
    case GateKind::Multiplexed: {
        const std::size_t d = std::size_t{1} << tg.size();
        const auto &sel = g.select();
        fixed.insert(fixed.end(), sel.begin(), sel.end());
        std::vector<std::uint64_t> off(d);
        for (std::size_t v = 0; v < d; ++v) {
            off[v] = deposit(v, tg);
        }
        const std::size_t nsel = std::size_t{1} << sel.size();
        std::vector<std::uint64_t> sel_off(nsel);
        for (std::size_t s = 0; s < nsel; ++s) {
            sel_off[s] = deposit(s, sel);
        }
        const Complex *mats = g.matrices().data();
        if (d == 2) {
            const std::uint64_t bit = off[1];
            for_each_base(n, fixed, cmask, [&](std::uint64_t base) {
                for (std::size_t s = 0; s < nsel; ++s) {
                    const std::uint64_t i = base | sel_off[s];
                    const Complex *m = mats + 4 * s;
                    const Complex a0 = a[i];
                    const Complex a1 = a[i | bit];
                    a[i] = m[0] * a0 + m[1] * a1;
                    a[i | bit] = m[2] * a0 + m[3] * a1;
                }
            });
            return;
        }
        std::vector<Complex> in(d), out(d);
        for_each_base(n, fixed, cmask, [&](std::uint64_t base) {
            for (std::size_t s = 0; s < nsel; ++s) {
                const std::uint64_t i = base | sel_off[s];
                const Complex *m = mats + s * d * d;
                for (std::size_t v = 0; v < d; ++v) {
                    in[v] = a[i | off[v]];
                }
                for (std::size_t r = 0; r < d; ++r) {
                    Complex acc{};
                    for (std::size_t c = 0; c < d; ++c) {
                        acc += m[r * d + c] * in[c];
                    }
                    out[r] = acc;
                }
                for (std::size_t v = 0; v < d; ++v) {
                    a[i | off[v]] = out[v];
                }
            }
        });
        return;
    }
    }
}

std::vector<double> measure_probs(const StateVector &state,
                                  const std::vector<Qubit> &qubits) {
    for (const auto q : qubits) {
        if (q >= state.num_qubits()) {
            throw ValidationError("measured qubit out of range");
        }
    }
    std::vector<double> p(std::size_t{1} << qubits.size(), 0.0);
    const auto &a = state.amplitudes();
    for (std::uint64_t i = 0; i < a.size(); ++i) {
        const double w = std::norm(a[i]);
        if (w != 0.0) {
            p[extract(i, qubits)] += w;
        }
    }
    return p;
}

std::vector<double> measure_probs(const StateVector &state,
                                  const std::string &reg) {
    return measure_probs(state, state.layout().get(reg).qubits());
}

StateVector collapse(const StateVector &state, const std::vector<Qubit> &qubits,
                     std::uint64_t outcome) {
    StateVector out = state;
    auto &a = out.amplitudes();
    double mass = 0.0;
    for (std::uint64_t i = 0; i < a.size(); ++i) {
        if (extract(i, qubits) != outcome) {
            a[i] = 0.0;
        } else {
            mass += std::norm(a[i]);
        }
    }
    if (mass <= 0.0) {
        throw ValidationError("collapse onto a zero-probability outcome");
    }
    out.normalize();
    return out;
}

Measurement sample_measurement(const StateVector &state,
                               const std::vector<Qubit> &qubits,
                               std::uint64_t seed) {
    const auto p = measure_probs(state, qubits);
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::uint64_t> dist(p.begin(), p.end());
    const std::uint64_t outcome = dist(rng);
    return Measurement{outcome, collapse(state, qubits, outcome)};
}

Measurement sample_measurement(const StateVector &state, const std::string &reg,
                               std::uint64_t seed) {
    return sample_measurement(state, state.layout().get(reg).qubits(), seed);
}

Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw ValidationError("inner product of states with different dimension");
    }
    Complex acc{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

Complex inner_product(const StateVector &a, const StateVector &b) {
    return inner_product(std::span<const Complex>(a.amplitudes()),
                         std::span<const Complex>(b.amplitudes()));
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols()) {
        throw ValidationError("density matrix must be square");
    }
    if (std::abs(rho_.trace() - Complex{1.0}) > 1e-10) {
        throw ValidationError("density matrix trace differs from 1");
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw ValidationError("density matrix is not Hermitian");
    }
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

Eigen::VectorXd DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double DensityMatrix::von_neumann_entropy() const {
    double s = 0.0;
    for (const double l : eigenvalues()) {
        if (l > 1e-15) {
            s -= l * std::log2(l);
        }
    }
    return std::max(s, 0.0);
}

DensityMatrix partial_trace(const StateVector &state,
                            const std::vector<Qubit> &kept) {
    const std::size_t n = state.num_qubits();
    std::vector<bool> is_kept(n, false);
    for (const auto q : kept) {
        if (q >= n || is_kept[q]) {
            throw ValidationError("invalid kept qubit list");
        }
        is_kept[q] = true;
    }
    std::vector<Qubit> traced;
    for (Qubit q = 0; q < n; ++q) {
        if (!is_kept[q]) {
            traced.push_back(q);
        }
    }
    const std::size_t dk = std::size_t{1} << kept.size();
    const std::size_t de = std::size_t{1} << traced.size();
    // Rows: kept index, columns: environment index.
    Eigen::MatrixXcd psi(dk, de);
    const auto &a = state.amplitudes();
    for (std::size_t e = 0; e < de; ++e) {
        const std::uint64_t eoff = deposit(e, traced);
        for (std::size_t k = 0; k < dk; ++k) {
            psi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(e)) =
                a[eoff | deposit(k, kept)];
        }
    }
    Eigen::MatrixXcd rho = psi * psi.adjoint();
    rho = (rho + rho.adjoint()) / 2.0;
    rho /= rho.trace();
    return DensityMatrix(std::move(rho));
}

DensityMatrix partial_trace(const StateVector &state,
                            const std::vector<std::string> &regs) {
    return partial_trace(state, state.layout().qubits(regs));
}

Eigen::MatrixXcd circuit_matrix(const Circuit &circuit, std::size_t num_qubits) {
    const std::size_t d = std::size_t{1} << num_qubits;
    Eigen::MatrixXcd u(d, d);
    std::vector<Complex> col(d);
    for (std::size_t j = 0; j < d; ++j) {
        std::fill(col.begin(), col.end(), Complex{});
        col[j] = 1.0;
        for (const auto &g : circuit.gates()) {
            apply_gate(col, num_qubits, g);
        }
        for (std::size_t i = 0; i < d; ++i) {
            u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                col[i];
        }
    }
    return u;
}

std::string dump_json(const StateVector &state) {
    nlohmann::json j;
    j["num_qubits"] = state.num_qubits();
    auto &amps = j["amplitudes"] = nlohmann::json::array();
    for (const auto &c : state.amplitudes()) {
        amps.push_back({c.real(), c.imag()});
    }
    auto &layout = j["layout"] = nlohmann::json::object();
    for (const auto &r : state.layout().registers()) {
        layout[r.name] = {r.start, r.size};
    }
    return j.dump();
}

StateVector load_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("state JSON: ") + e.what());
    }
    try {
        const auto n = j.at("num_qubits").get<std::size_t>();
        std::vector<Complex> amps;
        for (const auto &p : j.at("amplitudes")) {
            amps.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        }
        if (amps.size() != (std::size_t{1} << n)) {
            throw ValidationError("state JSON: amplitude count does not match "
                                  "num_qubits");
        }
        std::vector<Register> regs;
        if (j.contains("layout")) {
            for (const auto &[name, range] : j.at("layout").items()) {
                regs.push_back(Register{name, range.at(0).get<Qubit>(),
                                        range.at(1).get<std::size_t>()});
            }
        }
        std::sort(regs.begin(), regs.end(),
                  [](const Register &x, const Register &y) {
                      return x.start < y.start;
                  });
        RegisterLayout layout;
        for (const auto &r : regs) {
            if (r.start != layout.num_qubits()) {
                throw ValidationError("state JSON: layout registers must be "
                                      "contiguous and disjoint");
            }
            layout.add(r.name, r.size);
        }
        return StateVector(std::move(amps), std::move(layout));
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("state JSON: ") + e.what());
    }
}

} // namespace qknn
