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
#include "qknn/datasets.hpp"
#include "qknn/oracle.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace qknn;
using Catch::Matchers::WithinAbs;

namespace {

// Runs a classical reversible circuit on one basis state and returns the
// unique output basis index (fails the test otherwise).
std::uint64_t run_basis(const Circuit &c, std::size_t nq, std::uint64_t in) {
    StateVector s(nq);
    s.set_basis(in);
    s.apply(c);
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
        if (std::abs(s[i]) > 0.5) {
            REQUIRE(std::abs(s[i] - 1.0) < 1e-12);
            return i;
        }
    }
    FAIL("no output");
    return 0;
}

std::vector<Qubit> range(Qubit start, std::size_t n) {
    std::vector<Qubit> q(n);
    for (std::size_t k = 0; k < n; ++k) q[k] = start + k;
    return q;
}

} // namespace

TEST_CASE("single-bit comparators") {
    // qubits: a=0, b=1, flag=2
    const Circuit gt = build_U_gt(0, 1, 2);
    CHECK(run_basis(gt, 3, 0b001) == 0b101);
    CHECK(run_basis(gt, 3, 0b000) == 0b000);
    CHECK(run_basis(gt, 3, 0b011) == 0b011);
    CHECK(run_basis(gt, 3, 0b010) == 0b010);
    const Circuit ne = build_U_neq(0, 1, 2);
    CHECK(run_basis(ne, 3, 0b010) == 0b110);
    CHECK(run_basis(ne, 3, 0b001) == 0b101);
    CHECK(run_basis(ne, 3, 0b011) == 0b011);
    // with a carry on qubit 3 the decision only fires when the carry is set
    const Circuit gtc = build_U_gt(0, 1, 2, Qubit{3});
    CHECK(run_basis(gtc, 4, 0b0001) == 0b0001);
    CHECK(run_basis(gtc, 4, 0b1001) == 0b1101);
}

TEST_CASE("comparator examples on three bits") {
    const std::size_t b = 3;
    const auto a = range(0, b), bb = range(b, b), carries = range(2 * b + 1, b - 1);
    const Qubit out = 2 * b;
    const Circuit j = build_J(a, bb, out, carries);
    const std::size_t nq = 3 * b;
    auto cmp = [&](std::uint64_t x, std::uint64_t y) {
        const auto r = run_basis(j, nq, x | (y << b));
        return (r >> out) & 1U;
    };
    CHECK(cmp(0b101, 0b011) == 1);
    CHECK(cmp(0b011, 0b011) == 0);
    CHECK(cmp(0b010, 0b111) == 0);
}

TEST_CASE("comparator is exact on all pairs for b <= 4") {
    for (std::size_t b = 1; b <= 4; ++b) {
        const auto a = range(0, b), bb = range(b, b);
        const Qubit out = 2 * b;
        const auto carries = range(2 * b + 1, b - 1);
        const std::size_t nq = 3 * b;
        const Circuit j = build_J(a, bb, out, carries);
        const Circuit jn = build_J(a, bb, out, carries, true);
        for (std::uint64_t x = 0; x < (1U << b); ++x) {
            for (std::uint64_t y = 0; y < (1U << b); ++y) {
                const std::uint64_t in = x | (y << b);
                const std::uint64_t expect = in | (std::uint64_t(x > y) << out);
                REQUIRE(run_basis(j, nq, in) == expect);
                REQUIRE(run_basis(jn, nq, in) == (expect ^ (std::uint64_t{1} << out)));
            }
        }
    }
    CHECK_THROWS_AS(build_J({0, 1}, {2}, 3, {}), ValidationError);
    CHECK_THROWS_AS(build_J({0, 1, 2}, {3, 4, 5}, 6, {7}), ValidationError);
}

TEST_CASE("membership gate examples") {
    // index 0..1, scratch 2..3, target 4, anc 5..6
    const auto index = range(0, 2), scratch = range(2, 2), anc = range(5, 2);
    auto run = [&](const Circuit &c, std::uint64_t j) { return (run_basis(c, 7, j) >> 4) & 1U; };
    CHECK(run(build_D(3, index, scratch, 4, anc), 3) == 1);
    CHECK(run(build_D(3, index, scratch, 4, anc), 2) == 0);
    Circuit both = build_D(1, index, scratch, 4, anc);
    both.append(build_D(2, index, scratch, 4, anc));
    CHECK(run(both, 2) == 1);
    CHECK(run(both, 0) == 0);
    CHECK_THROWS_AS(build_D(4, index, scratch, 4, anc), ValidationError);
}

TEST_CASE("membership cascade computes the indicator for m <= 3") {
    for (std::size_t m = 1; m <= 3; ++m) {
        const auto index = range(0, m), scratch = range(m, m), anc = range(2 * m + 1, m);
        const Qubit target = 2 * m;
        const std::size_t nq = 3 * m + 1;
        const std::uint64_t M = std::uint64_t{1} << m;
        // every subset of size <= 3, as a bitmask over indices
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << M); ++mask) {
            if (__builtin_popcountll(mask) > 3) continue;
            Circuit c;
            for (std::uint64_t i = 0; i < M; ++i)
                if ((mask >> i) & 1U) c.append(build_D(i, index, scratch, target, anc));
            for (std::uint64_t j = 0; j < M; ++j) {
                const std::uint64_t expect = j | (((mask >> j) & 1U) << target);
                REQUIRE(run_basis(c, nq, j) == expect);
            }
        }
    }
}

TEST_CASE("abstract oracle semantics") {
    const std::size_t b = 12;
    std::vector<std::uint64_t> codes;
    for (double f : {0.2, 0.8, 0.5, 0.7}) codes.push_back(encode_similarity(f, b, Encoding::Fidelity));
    AbstractBackend table(codes, b);
    auto h = oracle_abstract(table, 3, {3});
    CHECK(h.marks() == std::vector<std::uint8_t>{0, 1, 0, 0});
    CHECK(h.num_marked() == 1);
    CHECK(h.query(1));
    CHECK_FALSE(h.query(2));
    CHECK(h.query_count() == 2);
    CHECK(h.prep_calls() == 2 * 6 * prep_calls_per_conversion(b, Similarity::Fidelity));
    CHECK(oracle_abstract(table, 1, {1}).num_marked() == 0);

    AbstractBackend coarse({3, 3, 2, 1}, 2);
    CHECK(oracle_abstract(coarse, 1, {1}).marks() == std::vector<std::uint8_t>{0, 0, 0, 0});
    CHECK(oracle_abstract(coarse, 3, {3}).marks() == std::vector<std::uint8_t>{1, 1, 1, 0});

    CHECK_THROWS_AS(oracle_abstract(table, 4, {}), ValidationError);
    CHECK_THROWS_AS(oracle_abstract(table, 0, {1, 1}), ValidationError);
    CHECK_THROWS_AS(AbstractBackend({8}, 3), ValidationError);
}

TEST_CASE("circuit oracle on the two-state example") {
    const State zero{1.0, 0.0}, one{0.0, 1.0};
    CircuitBackend be(StatePrep(zero), TrainPrep({zero, one}), PrecisionConfig{2});
    CHECK(be.code(0) == 3);
    CHECK(be.code(1) == 0);
    const auto ev = be.run(1, {1});
    CHECK_THAT(ev.p_marked[0], WithinAbs(1.0, 1e-9));
    CHECK_THAT(ev.p_marked[1], WithinAbs(0.0, 1e-9));
    // uniform index superposition: Q3 marginal
    CHECK_THAT((ev.p_marked[0] + ev.p_marked[1]) / 2.0, WithinAbs(0.5, 1e-9));
    CHECK(ev.ancilla_residual < 1e-9);
    CHECK(ev.num_qubits == 15);
    CHECK(ev.prep_calls == 6 * prep_calls_per_conversion(2, Similarity::Fidelity));
    CHECK(ev.prep_calls == 168);

    AbstractBackend table({3, 0}, 2);
    for (std::uint64_t y = 0; y < 2; ++y) {
        for (const auto &A : std::vector<std::vector<std::uint64_t>>{{}, {0}, {1}, {0, 1}}) {
            CHECK(be.evaluate(y, A) == table.evaluate(y, A));
        }
    }
}

TEST_CASE("assembled oracle is reversible on arbitrary inputs") {
    const State psi = haar_random_state(1, 3);
    const StatePrep v(psi);
    const TrainPrep tr({haar_random_state(1, 4), haar_random_state(1, 5)});
    const PrecisionConfig cfg{2};
    const auto lay = oracle_layout(1, 1, 2, Similarity::Fidelity);
    const Circuit o = assemble_O_yA(v, tr, cfg, Similarity::Fidelity, 0, {0}, lay);
    StateVector s(haar_random_state(lay.num_qubits(), 6), lay);
    const auto before = s.amplitudes();
    s.apply(o);
    CHECK_THAT(s.norm(), WithinAbs(1.0, 1e-12));
    s.apply(o.inverse());
    double err = 0.0;
    for (std::size_t i = 0; i < before.size(); ++i) err = std::max(err, std::abs(s[i] - before[i]));
    CHECK(err < 1e-10);
}

TEST_CASE("negated comparator is caught by the circuit") {
    const State zero{1.0, 0.0}, one{0.0, 1.0};
    CircuitBackend be(StatePrep(zero), TrainPrep({zero, one}), PrecisionConfig{2},
                      Similarity::Fidelity, OracleFaults{true});
    CHECK(be.evaluate(1, {1}) == std::vector<std::uint8_t>{0, 0});
    CHECK(be.evaluate(0, {}) == std::vector<std::uint8_t>{1, 1});
}

TEST_CASE("dot-product oracle on a dyadic pair") {
    const State zero{1.0, 0.0}, one{0.0, 1.0};
    CircuitBackend be(StatePrep(zero), TrainPrep({one, zero}), PrecisionConfig{2},
                      Similarity::Dot);
    CHECK(be.code(0) == 2);
    CHECK(be.code(1) == 3);
    const auto ev = be.run(0, {0});
    CHECK_THAT(ev.p_marked[1], WithinAbs(1.0, 1e-9));
    CHECK_THAT(ev.p_marked[0], WithinAbs(0.0, 1e-9));
    CHECK(ev.ancilla_residual < 1e-9);
}

TEST_CASE("layout and qubit accounting") {
    const auto lay = oracle_layout(2, 1, 3, Similarity::Fidelity);
    for (const char *name : {"index", "train", "test", "B", "phase", "fid", "index'", "fid'",
                             "Q1", "Q2", "Q3", "anc"})
        CHECK(lay.has(name));
    CHECK(lay.num_qubits() == 2 + 1 + 1 + 1 + 3 + 3 + 2 + 3 + 3 + 2);
    const auto acc = qubit_accounting(2, 1, 3, Similarity::Fidelity);
    CHECK(acc.layout_qubits == lay.num_qubits());
    CHECK(acc.k_J == 2);
    CHECK(acc.k_D == 2);
    // 2m + 2b + k_J + 1 + max(k_D + 2 - m - b, 2n + b - k_J)
    CHECK(acc.formula_qubits == 4 + 6 + 2 + 1 + std::max(2 + 2 - 2 - 3, 2 + 3 - 2));
    CHECK(acc.delta == long(acc.layout_qubits) - long(acc.formula_qubits));
    CHECK_FALSE(acc.explanation.empty());
    CHECK_THROWS_AS(CircuitBackend(StatePrep(State{1.0, 0.0}),
                                   TrainPrep({State{1.0, 0.0}, State{0.0, 1.0},
                                              State{1.0, 0.0}}),
                                   PrecisionConfig{2}),
                    ValidationError);
}
