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
#include "qknn/subroutines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qknn {

namespace {

std::size_t log2_exact(std::size_t d, const char *what) {
    if (d == 0 || (d & (d - 1)) != 0) {
        throw ValidationError(std::string(what) +
                              ": dimension must be a power of two");
    }
    std::size_t n = 0;
    while ((std::size_t{1} << n) < d) {
        ++n;
    }
    return n;
}

void require_normalized(const State &s, const char *what) {
    double nrm = 0.0;
    for (const auto &c : s) {
        nrm += std::norm(c);
    }
    if (std::abs(nrm - 1.0) > 1e-10) {
        throw ValidationError(std::string(what) + ": state is not normalized");
    }
}

std::vector<Complex> row_major(const Eigen::MatrixXcd &u) {
    std::vector<Complex> out(static_cast<std::size_t>(u.size()));
    const auto d = u.rows();
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            out[static_cast<std::size_t>(r * d + c)] = u(r, c);
        }
    }
    return out;
}

double mass_outside_zero(const StateVector &s, const std::vector<Qubit> &qs) {
    const auto p = measure_probs(s, qs);
    return 1.0 - p[0];
}

double vec_distance(const State &a, const State &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::norm(a[i] - b[i]);
    }
    return std::sqrt(s);
}

} // namespace

Eigen::MatrixXcd prep_unitary(std::span<const Complex> state) {
    const auto d = static_cast<Eigen::Index>(state.size());
    Eigen::MatrixXcd a(d, d + 1);
    a.setZero();
    for (Eigen::Index i = 0; i < d; ++i) {
        a(i, 0) = state[static_cast<std::size_t>(i)];
        a(i, i + 1) = 1.0;
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    const Complex r00 = qr.matrixQR()(0, 0);
    q.col(0) *= r00 / std::abs(r00);
    for (Eigen::Index i = 0; i < d; ++i) {
        q(i, 0) = state[static_cast<std::size_t>(i)];
    }
    return q;
}

StatePrep::StatePrep(State psi) : psi_(std::move(psi)) {
    n_ = log2_exact(psi_.size(), "test state");
    require_normalized(psi_, "test state");
    matrix_ = row_major(prep_unitary(psi_));
}

Circuit StatePrep::circuit(const std::vector<Qubit> &qubits) const {
    if (qubits.size() != n_) {
        throw ValidationError("test-state oracle: register size mismatch");
    }
    Circuit c;
    if (n_ == 0) {
        return c;
    }
    c.add(make_dense("V", qubits, matrix_).tagged(OracleTag::PrepV));
    return c;
}

TrainPrep::TrainPrep(std::vector<State> states) : states_(std::move(states)) {
    if (states_.empty()) {
        throw ValidationError("train-state oracle needs at least one state");
    }
    n_ = log2_exact(states_[0].size(), "train state");
    for (const auto &s : states_) {
        if (s.size() != states_[0].size()) {
            throw ValidationError("train states differ in dimension");
        }
        require_normalized(s, "train state");
    }
    m_ = 1;
    while ((std::size_t{1} << m_) < states_.size()) {
        ++m_;
    }
    const std::size_t d = std::size_t{1} << n_;
    const std::size_t count = std::size_t{1} << m_;
    blocks_.reserve(count * d * d);
    for (std::size_t j = 0; j < count; ++j) {
        if (j < states_.size()) {
            const auto blk = row_major(prep_unitary(states_[j]));
            blocks_.insert(blocks_.end(), blk.begin(), blk.end());
        } else {
            for (std::size_t r = 0; r < d; ++r) {
                for (std::size_t c = 0; c < d; ++c) {
                    blocks_.push_back(r == c ? 1.0 : 0.0);
                }
            }
        }
    }
}

Circuit TrainPrep::circuit(const std::vector<Qubit> &index,
                           const std::vector<Qubit> &data) const {
    if (index.size() != m_ || data.size() != n_) {
        throw ValidationError("train-state oracle: register size mismatch");
    }
    Circuit c;
    c.add(make_multiplexed("W", index, data, blocks_).tagged(OracleTag::PrepW));
    return c;
}

Circuit swap_test(const std::vector<Qubit> &train, const std::vector<Qubit> &test,
                  Qubit b) {
    if (train.size() != test.size()) {
        throw ValidationError("swap test: register size mismatch");
    }
    Circuit c;
    c.add(gates::h(b));
    for (std::size_t k = 0; k < train.size(); ++k) {
        c.add(gates::cswap(b, train[k], test[k]));
    }
    c.add(gates::h(b));
    return c;
}

Circuit build_U(const StatePrep &v, const FidelityWires &w) {
    Circuit c = v.circuit(w.test);
    c.append(swap_test(w.train, w.test, w.b));
    return c;
}

Circuit build_E_amp(const StatePrep &v, const TrainPrep &tr,
                    const FidelityWires &w) {
    Circuit c = tr.circuit(w.index, w.train);
    c.append(build_U(v, w));
    return c;
}

Circuit build_G(const StatePrep &v, const TrainPrep &tr, const FidelityWires &w) {
    const Circuit u = build_U(v, w);
    const Circuit wc = tr.circuit(w.index, w.train);
    std::vector<Qubit> zero_reg = w.train;
    zero_reg.insert(zero_reg.end(), w.test.begin(), w.test.end());
    zero_reg.push_back(w.b);

    Circuit g;
    g.add(gates::z(w.b));
    g.append(u.inverse());
    g.append(wc.inverse());
    g.add(make_phase_flip_zero("S0", zero_reg));
    g.append(wc);
    g.append(u);
    return g;
}

Circuit build_V_dot(const StatePrep &v, const TrainPrep &tr, const DotWires &w) {
    Circuit branch = v.circuit(w.data).inverse();
    branch.append(tr.circuit(w.index, w.data));

    Circuit c = v.circuit(w.data);
    c.add(gates::h(w.b));
    c.append(branch.controlled(w.b));
    c.add(gates::h(w.b));
    return c;
}

Circuit build_H_dot(const StatePrep &v, const TrainPrep &tr, const DotWires &w) {
    const Circuit vc = build_V_dot(v, tr, w);
    std::vector<Qubit> zero_reg = w.data;
    zero_reg.push_back(w.b);

    Circuit h;
    h.add(gates::z(w.b));
    h.append(vc.inverse());
    h.add(make_phase_flip_zero("S0", zero_reg));
    h.append(vc);
    return h;
}

Circuit qft(const std::vector<Qubit> &q) {
    Circuit c;
    const std::size_t n = q.size();
    for (std::size_t k = n; k-- > 0;) {
        c.add(gates::h(q[k]));
        for (std::size_t l = 0; l < k; ++l) {
            const double angle =
                2.0 * std::numbers::pi / static_cast<double>(std::uint64_t{1} << (k - l + 1));
            c.add(gates::phase(q[k], angle).controlled(q[l]).renamed("CP"));
        }
    }
    for (std::size_t k = 0; k < n / 2; ++k) {
        c.add(make_swap(q[k], q[n - 1 - k]));
    }
    return c;
}

Circuit qpe(const Circuit &unitary, const std::vector<Qubit> &phase) {
    Circuit c;
    for (const auto q : phase) {
        c.add(gates::h(q));
    }
    for (std::size_t k = 0; k < phase.size(); ++k) {
        const Circuit cu = unitary.controlled(phase[k]);
        for (std::uint64_t r = 0; r < (std::uint64_t{1} << k); ++r) {
            c.append(cu);
        }
    }
    c.append(qft(phase).inverse());
    return c;
}

StateVector swap_test_apply(const StateVector &state,
                            const std::vector<Qubit> &train,
                            const std::vector<Qubit> &test, Qubit b) {
    if (mass_outside_zero(state, {b}) > 1e-12) {
        throw ValidationError("swap test: ancilla B is not in |0>");
    }
    StateVector out = state;
    out.apply(swap_test(train, test, b));
    return out;
}

StateVector hadamard_test_apply(const StateVector &state, const StatePrep &v,
                                const TrainPrep &tr, const DotWires &w) {
    std::vector<Qubit> fresh = w.data;
    fresh.push_back(w.b);
    if (mass_outside_zero(state, fresh) > 1e-12) {
        throw ValidationError("Hadamard test: data and B registers must be fresh");
    }
    StateVector out = state;
    out.apply(build_V_dot(v, tr, w));
    return out;
}

StateVector qpe_apply(const StateVector &state, const Circuit &unitary,
                      const std::vector<Qubit> &phase) {
    if (mass_outside_zero(state, phase) > 1e-12) {
        throw ValidationError("phase estimation: phase register is not fresh");
    }
    StateVector out = state;
    out.apply(qpe(unitary, phase));
    return out;
}

double theta_of(double similarity) {
    const double a2 = std::clamp((1.0 + similarity) / 2.0, 0.0, 1.0);
    return std::asin(std::sqrt(a2)) / std::numbers::pi;
}

State swap_test_state(const State &phi, const State &psi) {
    const std::size_t d = phi.size();
    State out(2 * d * d);
    for (std::size_t tst = 0; tst < d; ++tst) {
        for (std::size_t tr = 0; tr < d; ++tr) {
            const Complex a = phi[tr] * psi[tst];
            const Complex s = psi[tr] * phi[tst];
            out[tr + d * tst] = 0.5 * (a + s);
            out[tr + d * tst + d * d] = 0.5 * (a - s);
        }
    }
    return out;
}

State hadamard_test_state(const State &u, const State &v) {
    const std::size_t d = u.size();
    State out(2 * d);
    for (std::size_t i = 0; i < d; ++i) {
        out[i] = 0.5 * (v[i] + u[i]);
        out[i + d] = 0.5 * (v[i] - u[i]);
    }
    return out;
}

EigenReport verify_eigendecomposition(const StatePrep &v, const TrainPrep &tr,
                                      std::size_t j, Similarity kind) {
    if (j >= tr.num_states()) {
        throw ValidationError("eigen check: index out of range");
    }
    const std::size_t m = tr.index_qubits();
    const std::size_t n = tr.num_qubits();
    const State &phi = tr.states()[j];
    const State &psi = v.state();

    Circuit op;
    Circuit prep;
    std::size_t width = 0;
    State psi_j;
    if (kind == Similarity::Fidelity) {
        FidelityWires w;
        for (std::size_t k = 0; k < m; ++k) w.index.push_back(k);
        for (std::size_t k = 0; k < n; ++k) w.train.push_back(m + k);
        for (std::size_t k = 0; k < n; ++k) w.test.push_back(m + n + k);
        w.b = m + 2 * n;
        op = build_G(v, tr, w);
        prep = build_E_amp(v, tr, w);
        width = 2 * n + 1;
        psi_j = swap_test_state(phi, psi);
    } else {
        DotWires w;
        for (std::size_t k = 0; k < m; ++k) w.index.push_back(k);
        for (std::size_t k = 0; k < n; ++k) w.data.push_back(m + k);
        w.b = m + n;
        op = build_H_dot(v, tr, w);
        prep = build_V_dot(v, tr, w);
        width = n + 1;
        psi_j = hadamard_test_state(phi, psi);
    }
    const std::size_t total = m + width;
    const std::size_t sub = std::size_t{1} << width;
    const std::size_t half = sub / 2;

    EigenReport rep;
    if (kind == Similarity::Fidelity) {
        rep.similarity = std::norm(inner_product(psi, phi));
    } else {
        rep.similarity = inner_product(psi, phi).real();
    }
    rep.theta_expected = theta_of(rep.similarity);
    const double alpha = std::sqrt(std::clamp((1.0 + rep.similarity) / 2.0, 0.0, 1.0));
    const double beta = std::sqrt(std::clamp((1.0 - rep.similarity) / 2.0, 0.0, 1.0));

    // Embeds a (train,test,B) or (data,B) vector at index value j.
    auto embed = [&](const State &x) {
        std::vector<Complex> amps(std::size_t{1} << total);
        for (std::size_t i = 0; i < sub; ++i) {
            amps[j | (i << m)] = x[i];
        }
        return StateVector(std::move(amps));
    };
    // Applies op and returns the j block; leakage accumulates into invariance.
    double leak = 0.0;
    auto apply_block = [&](const State &x) {
        StateVector s = embed(x);
        s.apply(op);
        State out(sub);
        for (std::uint64_t i = 0; i < s.dim(); ++i) {
            if ((i & ((std::uint64_t{1} << m) - 1)) == j) {
                out[i >> m] = s[i];
            } else {
                leak = std::max(leak, std::abs(s[i]));
            }
        }
        return out;
    };

    // The prepared state from the circuit, for the decomposition identity.
    StateVector start(total);
    start.set_basis(j);
    start.apply(prep);
    State prepared(sub);
    for (std::size_t i = 0; i < sub; ++i) {
        prepared[i] = start[j | (i << m)];
    }
    rep.decomposition_error = vec_distance(prepared, psi_j);

    State p0(sub), p1(sub);
    for (std::size_t i = 0; i < half; ++i) {
        if (alpha > 1e-7) p0[i] = psi_j[i] / alpha;
        if (beta > 1e-7) p1[i + half] = psi_j[i + half] / beta;
    }

    const double two_pi_theta = 2.0 * std::numbers::pi * rep.theta_expected;
    if (alpha <= 1e-7 || beta <= 1e-7) {
        rep.degenerate = true;
        const State &only = alpha > 1e-7 ? p0 : p1;
        const State img = apply_block(only);
        const Complex lambda = inner_product(only, img);
        rep.theta_measured = std::abs(std::arg(lambda)) / (2.0 * std::numbers::pi);
        State expect(sub);
        for (std::size_t i = 0; i < sub; ++i) {
            expect[i] = std::polar(1.0, two_pi_theta) * only[i];
        }
        rep.eigenvalue_error = vec_distance(img, expect);
        State resid(sub);
        for (std::size_t i = 0; i < sub; ++i) {
            resid[i] = img[i] - lambda * only[i];
        }
        rep.invariance_error = std::max(leak, vec_distance(resid, State(sub)));
        return rep;
    }

    const State g0 = apply_block(p0);
    const State g1 = apply_block(p1);
    Eigen::Matrix2cd k;
    k(0, 0) = inner_product(p0, g0);
    k(1, 0) = inner_product(p1, g0);
    k(0, 1) = inner_product(p0, g1);
    k(1, 1) = inner_product(p1, g1);
    double inv = leak;
    for (std::size_t i = 0; i < sub; ++i) {
        inv = std::max(inv, std::abs(g0[i] - k(0, 0) * p0[i] - k(1, 0) * p1[i]));
        inv = std::max(inv, std::abs(g1[i] - k(0, 1) * p0[i] - k(1, 1) * p1[i]));
    }
    rep.invariance_error = inv;

    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(k);
    rep.theta_measured =
        std::abs(std::arg(es.eigenvalues()(0))) / (2.0 * std::numbers::pi);

    const Complex I{0.0, 1.0};
    const double r2 = std::numbers::sqrt2 / 2.0;
    State plus(sub), minus(sub), recon(sub);
    for (std::size_t i = 0; i < sub; ++i) {
        plus[i] = r2 * (p0[i] + I * p1[i]);
        minus[i] = r2 * (p0[i] - I * p1[i]);
    }
    const State gp = apply_block(plus);
    const State gm = apply_block(minus);
    double err = 0.0;
    State ep(sub), em(sub);
    for (std::size_t i = 0; i < sub; ++i) {
        ep[i] = std::polar(1.0, two_pi_theta) * plus[i];
        em[i] = std::polar(1.0, -two_pi_theta) * minus[i];
    }
    err = std::max(vec_distance(gp, ep), vec_distance(gm, em));
    rep.eigenvalue_error = err;

    const double pt = std::numbers::pi * rep.theta_expected;
    for (std::size_t i = 0; i < sub; ++i) {
        recon[i] = -I * r2 *
                   (std::polar(1.0, pt) * plus[i] - std::polar(1.0, -pt) * minus[i]);
    }
    rep.decomposition_error =
        std::max(rep.decomposition_error, vec_distance(prepared, recon));
    return rep;
}

} // namespace qknn
