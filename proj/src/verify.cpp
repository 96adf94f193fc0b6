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
#include "qknn/verify.hpp"

#include "qknn/classifier.hpp"
#include "qknn/datasets.hpp"

#include <json.hpp>

#include <cmath>
#include <random>

namespace qknn {

namespace {

InvariantResult make(std::string name, double dev, double tol, std::string detail) {
    return InvariantResult{std::move(name), dev <= tol, dev, tol, std::move(detail)};
}

Circuit random_circuit(std::size_t n, std::size_t len, std::mt19937_64 &rng) {
    std::uniform_int_distribution<Qubit> pick(0, n - 1);
    std::uniform_int_distribution<int> kind(0, 3);
    Circuit c;
    auto distinct = [&](std::size_t count) {
        std::vector<Qubit> qs;
        while (qs.size() < count) {
            const Qubit q = pick(rng);
            if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);
        }
        return qs;
    };
    for (std::size_t g = 0; g < len; ++g) {
        switch (kind(rng)) {
        case 0: {
            const auto u = prep_unitary(haar_random_state(1, rng()));
            c.add(make_single("U", pick(rng), {u(0, 0), u(0, 1), u(1, 0), u(1, 1)}));
            break;
        }
        case 1: {
            const auto qs = distinct(2);
            c.add(gates::cnot(qs[0], qs[1]));
            break;
        }
        case 2: {
            const auto qs = distinct(3);
            c.add(gates::toffoli(qs[0], qs[1], qs[2]));
            break;
        }
        default: {
            const auto qs = distinct(3);
            const auto u = prep_unitary(haar_random_state(2, rng()));
            std::vector<Complex> m;
            for (int r = 0; r < 4; ++r)
                for (int col = 0; col < 4; ++col) m.push_back(u(r, col));
            c.add(make_dense("U2", {qs[0], qs[1]}, m).controlled(qs[2]));
        }
        }
    }
    return c;
}

State real_random_state(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    State s(std::size_t{1} << n);
    double nrm = 0.0;
    for (auto &c : s) {
        c = g(rng);
        nrm += std::norm(c);
    }
    for (auto &c : s) c /= std::sqrt(nrm);
    return s;
}

InvariantResult norm_preservation(const VerifyOptions &o) {
    std::mt19937_64 rng(mix_seed(o.seed, 1));
    double dev = 0.0;
    for (std::size_t t = 0; t < o.samples; ++t) {
        StateVector s(haar_random_state(10, rng()));
        s.apply(random_circuit(10, 20, rng));
        dev = std::max(dev, std::abs(s.norm() - 1.0));
    }
    return make("statevec.norm_preservation", dev, 1e-9,
                std::to_string(o.samples) + " random 20-gate circuits on 10 qubits");
}

InvariantResult unitarity_roundtrip(const VerifyOptions &o) {
    std::mt19937_64 rng(mix_seed(o.seed, 2));
    double dev = 0.0;
    for (std::size_t t = 0; t < o.samples; ++t) {
        const State start = haar_random_state(8, rng());
        const Circuit c = random_circuit(8, 20, rng);
        StateVector s(start);
        s.apply(c).apply(c.inverse());
        for (std::size_t i = 0; i < start.size(); ++i) {
            dev = std::max(dev, std::abs(s[i] - start[i]));
        }
    }
    return make("statevec.unitarity_roundtrip", dev, 1e-10,
                "circuit followed by its inverse");
}

InvariantResult swap_law(const VerifyOptions &o) {
    std::mt19937_64 rng(mix_seed(o.seed, 3));
    double dev = 0.0;
    for (std::size_t t = 0; t < 4 * o.samples; ++t) {
        const std::size_t n = 1 + t % 3;
        const State phi = haar_random_state(n, rng());
        const State psi = haar_random_state(n, rng());
        std::vector<Qubit> tr, ts;
        for (std::size_t k = 0; k < n; ++k) {
            tr.push_back(k);
            ts.push_back(n + k);
        }
        std::vector<Complex> amps(std::size_t{1} << (2 * n + 1));
        for (std::size_t a = 0; a < phi.size(); ++a)
            for (std::size_t b = 0; b < psi.size(); ++b)
                amps[a + (b << n)] = phi[a] * psi[b];
        const auto out = swap_test_apply(StateVector(std::move(amps)), tr, ts, 2 * n);
        const double p0 = measure_probs(out, std::vector<Qubit>{2 * n})[0];
        const double f = std::norm(inner_product(psi, phi));
        dev = std::max(dev, std::abs(p0 - (1 + f) / 2));
    }
    return make("subroutines.swap_test_law", dev, 1e-10, "P(B=0) = (1+F)/2");
}

InvariantResult hadamard_law(const VerifyOptions &o) {
    std::mt19937_64 rng(mix_seed(o.seed, 4));
    double dev = 0.0;
    for (std::size_t t = 0; t < 4 * o.samples; ++t) {
        const std::size_t n = 1 + t % 3;
        const State v = real_random_state(n, rng);
        const State u = real_random_state(n, rng);
        const StatePrep vp(v);
        const TrainPrep tp({u});
        DotWires w;
        w.index = {0};
        for (std::size_t k = 0; k < n; ++k) w.data.push_back(1 + k);
        w.b = 1 + n;
        const auto out = hadamard_test_apply(StateVector(n + 2), vp, tp, w);
        const double p0 = measure_probs(out, std::vector<Qubit>{w.b})[0];
        const double x = inner_product(v, u).real();
        dev = std::max(dev, std::abs(p0 - (1 + x) / 2));
    }
    return make("subroutines.hadamard_test_law", dev, 1e-10, "P(B=0) = (1+Re<v|u>)/2");
}

InvariantResult eigenstructure(const VerifyOptions &o) {
    std::mt19937_64 rng(mix_seed(o.seed, 5));
    double dev = 0.0;
    std::size_t skipped = 0;
    for (std::size_t t = 0; t < o.samples; ++t) {
        const bool dot = t % 2 == 1;
        const std::size_t n = 1 + (t / 2) % 2;
        const std::size_t M = 2 + t % 3;
        std::vector<State> train;
        for (std::size_t j = 0; j < M; ++j) {
            train.push_back(dot ? real_random_state(n, rng) : haar_random_state(n, rng()));
        }
        const State psi = dot ? real_random_state(n, rng) : haar_random_state(n, rng());
        const StatePrep v(psi);
        const TrainPrep tr(train);
        for (std::size_t j = 0; j < M; ++j) {
            const auto r = verify_eigendecomposition(
                v, tr, j, dot ? Similarity::Dot : Similarity::Fidelity);
            skipped += r.degenerate ? 1 : 0;
            dev = std::max({dev, r.eigenvalue_error, r.decomposition_error,
                            r.invariance_error,
                            std::abs(r.theta_measured - r.theta_expected)});
        }
    }
    return make("subroutines.eigenstructure", dev, 1e-9,
                "eigenphases +-theta with sin(pi theta) = sqrt((1+s)/2); " +
                    std::to_string(skipped) + " degenerate blocks");
}

InvariantResult folding(const VerifyOptions &) {
    double bad = 0;
    for (std::size_t b = 1; b <= 8; ++b) {
        const std::uint64_t n = std::uint64_t{1} << b;
        for (std::uint64_t t = 0; t < n; ++t) {
            for (auto enc : {Encoding::Fidelity, Encoding::DotOffset}) {
                if (arithmetic_code(t, b, enc) != arithmetic_code((n - t) % n, b, enc)) {
                    bad += 1;
                }
            }
        }
    }
    return make("qadc.theta_folding", bad, 0.0, "code(t) = code(2^b - t), b <= 8");
}

InvariantResult comparator(const VerifyOptions &o) {
    double bad = 0;
    for (std::size_t b = 1; b <= 4; ++b) {
        std::vector<Qubit> a, c, carry;
        for (std::size_t k = 0; k < b; ++k) {
            a.push_back(k);
            c.push_back(b + k);
        }
        const Qubit out = 2 * b;
        for (std::size_t k = 0; k + 1 < b; ++k) carry.push_back(2 * b + 1 + k);
        const std::size_t nq = 2 * b + 1 + carry.size();
        const Circuit j = build_J(a, c, out, carry, o.negate_comparator);
        for (std::uint64_t x = 0; x < (1U << b); ++x) {
            for (std::uint64_t y = 0; y < (1U << b); ++y) {
                StateVector s(nq);
                s.set_basis(x | (y << b));
                s.apply(j);
                const std::uint64_t want = x | (y << b) | (std::uint64_t(x > y) << out);
                if (std::norm(s[want]) < 1 - 1e-12) bad += 1;
            }
        }
    }
    return make("oracle.comparator_exhaustive", bad, 0.0,
                "J against integer comparison, b <= 4");
}

InvariantResult membership(const VerifyOptions &) {
    double bad = 0;
    for (std::size_t m = 1; m <= 3; ++m) {
        std::vector<Qubit> idx, scratch, anc;
        for (std::size_t k = 0; k < m; ++k) {
            idx.push_back(k);
            scratch.push_back(m + k);
            anc.push_back(2 * m + 1 + k);
        }
        const Qubit target = 2 * m;
        const std::size_t nq = 3 * m + 1;
        const std::uint64_t M = 1U << m;
        std::vector<std::vector<std::uint64_t>> sets;
        for (std::uint64_t mask = 1; mask < (1U << M); ++mask) {
            std::vector<std::uint64_t> A;
            for (std::uint64_t i = 0; i < M; ++i)
                if ((mask >> i) & 1U) A.push_back(i);
            if (A.size() <= 3) sets.push_back(A);
        }
        for (const auto &A : sets) {
            Circuit c;
            for (const auto i : A) c.append(build_D(i, idx, scratch, target, anc));
            for (std::uint64_t j = 0; j < M; ++j) {
                StateVector s(nq);
                s.set_basis(j);
                s.apply(c);
                const bool in = std::find(A.begin(), A.end(), j) != A.end();
                if (std::norm(s[j | (std::uint64_t(in) << target)]) < 1 - 1e-12) bad += 1;
            }
        }
    }
    return make("oracle.membership_exhaustive", bad, 0.0,
                "D cascade against set indicator, m <= 3, |A| <= 3");
}

InvariantResult equivalence(const VerifyOptions &o) {
    const State zero{1.0, 0.0}, one{0.0, 1.0};
    const PrecisionConfig cfg{2};
    OracleFaults faults;
    faults.negate_comparator = o.negate_comparator;
    CircuitBackend circ(StatePrep(zero), TrainPrep({zero, one}), cfg,
                        Similarity::Fidelity, faults);
    AbstractBackend abst(make_table(zero, TrainSet{{zero, one}, {0, 1}},
                                    Similarity::Fidelity, cfg.b)
                             .quantized,
                         cfg.b);
    double dev = 0.0;
    double mismatches = 0;
    const std::vector<std::vector<std::uint64_t>> sets{{0}, {1}, {0, 1}};
    for (std::uint64_t y = 0; y < 2; ++y) {
        for (const auto &A : sets) {
            const auto ev = circ.run(y, A);
            const auto f = abst.evaluate(y, A);
            for (std::size_t j = 0; j < 2; ++j) {
                dev = std::max(dev, std::abs(ev.p_marked[j] - f[j]));
                mismatches += ev.marks[j] != f[j] ? 1 : 0;
            }
            dev = std::max(dev, ev.ancilla_residual);
        }
    }
    return make("oracle.circuit_abstract_equivalence", std::max(dev, mismatches), 1e-9,
                "M=2, n=1, b=2, F=[1,0], all y and A");
}

InvariantResult kmax_correct(const VerifyOptions &o) {
    double bad = 0;
    for (std::size_t t = 0; t < 4 * o.samples; ++t) {
        const std::size_t M = 2 + t % 7;
        const std::size_t k = 1 + t % M;
        std::size_t b = 0;
        auto codes = random_distinct_codes(M, mix_seed(o.seed, 100 + t), &b);
        const auto truth = top_k_by_sort(codes, k);
        AbstractBackend be(std::move(codes), b);
        SearchConfig sc;
        sc.seed = mix_seed(o.seed, 200 + t);
        if (k_maxima(be, k, sc).top_k != truth) bad += 1;
    }
    return make("kmax.correctness_small_tables", bad, 0.0,
                "final set equals sorted top-k, M <= 8");
}

InvariantResult label_closure(const VerifyOptions &o) {
    double bad = 0;
    std::size_t total = 0;
    for (auto s : {Scheme::SepVsEnt2q, Scheme::SepVsMaxent2q, Scheme::FiveClass3q}) {
        const auto c = gen_corpus(s, o.samples, o.seed);
        for (const auto &it : c.items) {
            ++total;
            if (label_entanglement(it.amplitudes, s) != it.label) bad += 1;
        }
    }
    return make("datasets.label_closure", bad, 0.0,
                std::to_string(total) + " generated states relabelled");
}

} // namespace

bool VerifyReport::all_passed() const {
    return std::all_of(results.begin(), results.end(),
                       [](const InvariantResult &r) { return r.passed; });
}

std::string VerifyReport::to_json() const {
    nlohmann::json j;
    j["passed"] = all_passed();
    auto &arr = j["invariants"] = nlohmann::json::array();
    for (const auto &r : results) {
        arr.push_back({{"name", r.name},
                       {"passed", r.passed},
                       {"deviation", r.deviation},
                       {"tolerance", r.tolerance},
                       {"detail", r.detail}});
    }
    return j.dump(2);
}

VerifyReport run_verification(const VerifyOptions &opts) {
    VerifyReport rep;
    rep.results.push_back(norm_preservation(opts));
    rep.results.push_back(unitarity_roundtrip(opts));
    rep.results.push_back(swap_law(opts));
    rep.results.push_back(hadamard_law(opts));
    rep.results.push_back(eigenstructure(opts));
    rep.results.push_back(folding(opts));
    rep.results.push_back(comparator(opts));
    rep.results.push_back(membership(opts));
    rep.results.push_back(equivalence(opts));
    rep.results.push_back(kmax_correct(opts));
    rep.results.push_back(label_closure(opts));
    return rep;
}

} // namespace qknn
