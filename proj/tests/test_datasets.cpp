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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

using namespace qknn;
using Catch::Matchers::WithinAbs;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

double norm2(const State &s) {
    double t = 0.0;
    for (auto a : s) t += std::norm(a);
    return t;
}

State kron(const State &hi, const State &lo) {
    State out(hi.size() * lo.size());
    for (std::size_t i = 0; i < hi.size(); ++i)
        for (std::size_t j = 0; j < lo.size(); ++j) out[i * lo.size() + j] = hi[i] * lo[j];
    return out;
}

const State bell{kS, 0.0, 0.0, kS};

} // namespace

TEST_CASE("Haar states are normalized, seeded and isotropic") {
    CHECK(haar_random_state(3, 5) == haar_random_state(3, 5));
    CHECK(haar_random_state(3, 5) != haar_random_state(3, 6));
    double bx = 0.0, by = 0.0, bz = 0.0, p0 = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const auto s = haar_random_state(1, static_cast<std::uint64_t>(i));
        REQUIRE_THAT(norm2(s), WithinAbs(1.0, 1e-12));
        const Complex c = std::conj(s[0]) * s[1];
        bx += 2.0 * c.real();
        by += 2.0 * c.imag();
        bz += std::norm(s[0]) - std::norm(s[1]);
        p0 += std::norm(s[0]);
    }
    CHECK(std::abs(bx / n) < 0.05);
    CHECK(std::abs(by / n) < 0.05);
    CHECK(std::abs(bz / n) < 0.05);
    // |amplitude|^2 is uniform on [0,1] for one qubit: sigma = 1/sqrt(12 n)
    CHECK(std::abs(p0 / n - 0.5) < 3.0 / std::sqrt(12.0 * n));
}

TEST_CASE("entanglement measures on textbook states") {
    CHECK_THAT(entanglement_entropy(bell, {0}), WithinAbs(1.0, 1e-12));
    CHECK_FALSE(separable_cut(bell, {0}));
    const State zero_plus = kron(State{kS, kS}, State{1.0, 0.0});
    CHECK_THAT(entanglement_entropy(zero_plus, {0}), WithinAbs(0.0, 1e-12));
    CHECK(separable_cut(zero_plus, {1}));
    CHECK_THAT(largest_schmidt(bell, {1}), WithinAbs(0.5, 1e-12));
    CHECK(label_entanglement(bell, Scheme::SepVsEnt2q) == 1);
    CHECK(label_entanglement(bell, Scheme::SepVsMaxent2q) == 1);
    CHECK(label_entanglement(zero_plus, Scheme::SepVsEnt2q) == 0);
    CHECK(label_entanglement(zero_plus, Scheme::SepVsMaxent2q) == 0);
    const State partial{std::sqrt(0.8), 0.0, 0.0, std::sqrt(0.2)};
    CHECK(label_entanglement(partial, Scheme::SepVsEnt2q) == 1);
    CHECK_THROWS_AS(label_entanglement(partial, Scheme::SepVsMaxent2q), ValidationError);
    CHECK_THROWS_AS(label_entanglement(State{1.0, 0.0}, Scheme::SepVsEnt2q), ValidationError);
}

TEST_CASE("three-qubit patterns") {
    State zero3(8, 0.0);
    zero3[0] = 1.0;
    CHECK(label_entanglement(zero3, Scheme::FiveClass3q) == 0);
    // qubit 2 (C) is the most significant factor
    CHECK(label_entanglement(kron(State{1.0, 0.0}, bell), Scheme::FiveClass3q) == 1);
    CHECK(label_entanglement(kron(State{0.0, 1.0}, bell), Scheme::FiveClass3q) == 1);
    CHECK(class_name(Scheme::FiveClass3q, 1) == "AB-C");
    // Bell on B,C with A alone
    CHECK(label_entanglement(kron(bell, State{1.0, 0.0}), Scheme::FiveClass3q) == 2);
    // Bell on A,C with B alone: |0_A 0_B 0_C> + |1_A 0_B 1_C>
    State ac(8, 0.0);
    ac[0b000] = kS;
    ac[0b101] = kS;
    CHECK(label_entanglement(ac, Scheme::FiveClass3q) == 3);
    State ghz(8, 0.0);
    ghz[0] = kS;
    ghz[7] = kS;
    CHECK(label_entanglement(ghz, Scheme::FiveClass3q) == 4);
    State w(8, 0.0);
    w[1] = w[2] = w[4] = 1.0 / std::sqrt(3.0);
    CHECK(label_entanglement(w, Scheme::FiveClass3q) == 4);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const int l = label_entanglement(haar_random_state(3, seed), Scheme::FiveClass3q);
        CHECK((l >= 0 && l < 5));
    }
}

TEST_CASE("generated corpora carry their own labels") {
    for (auto scheme : {Scheme::SepVsEnt2q, Scheme::SepVsMaxent2q, Scheme::FiveClass3q}) {
        const auto corpus = gen_corpus(scheme, 1000, 17);
        CHECK(corpus.items.size() == 1000 * scheme_classes(scheme));
        std::size_t bad = 0;
        for (const auto &it : corpus.items) {
            bad += label_entanglement(it.amplitudes, scheme) == it.label ? 0 : 1;
            const std::size_t n = scheme_qubits(scheme);
            for (std::size_t q = 0; q < n; ++q) {
                const double s = entanglement_entropy(it.amplitudes, {q});
                REQUIRE(s >= -1e-9);
                REQUIRE(s <= 1.0 + 1e-9);
            }
        }
        CHECK(bad == 0);
    }
}

TEST_CASE("generated classes respect the entropy floor") {
    const auto ent = gen_class(Scheme::SepVsEnt2q, 1, 200, 3);
    for (const auto &it : ent.items) CHECK(entanglement_entropy(it.amplitudes, {0}) >= kEntropyFloor);
    const auto maxent = gen_class(Scheme::SepVsMaxent2q, 1, 200, 3);
    for (const auto &it : maxent.items)
        CHECK_THAT(entanglement_entropy(it.amplitudes, {0}), WithinAbs(1.0, 1e-6));
    CHECK(gen_class(Scheme::FiveClass3q, 4, 5, 9).items[2].amplitudes ==
          gen_class(Scheme::FiveClass3q, 4, 5, 9).items[2].amplitudes);
    CHECK_THROWS_AS(gen_class(Scheme::SepVsEnt2q, 2, 1, 0), ValidationError);
}

TEST_CASE("corpus round trip through JSON lines") {
    const auto corpus = gen_corpus(Scheme::FiveClass3q, 3, 2);
    std::stringstream ss;
    write_corpus(ss, corpus);
    const auto back = read_corpus(ss);
    CHECK(back.scheme == Scheme::FiveClass3q);
    REQUIRE(back.items.size() == corpus.items.size());
    for (std::size_t i = 0; i < corpus.items.size(); ++i) {
        CHECK(back.items[i].label == corpus.items[i].label);
        CHECK(back.items[i].seed_path == corpus.items[i].seed_path);
        CHECK(back.items[i].amplitudes == corpus.items[i].amplitudes);
    }
    std::stringstream bad("{\"label\": 0}\n");
    CHECK_THROWS(read_corpus(bad));
}

TEST_CASE("scheme names") {
    CHECK(parse_scheme("2q-sep-vs-ent") == Scheme::SepVsEnt2q);
    CHECK(scheme_name(Scheme::SepVsMaxent2q) == "2q-sep-vs-maxent");
    CHECK(scheme_qubits(Scheme::FiveClass3q) == 3);
    CHECK(scheme_classes(Scheme::FiveClass3q) == 5);
    CHECK_THROWS_AS(parse_scheme("4q"), ValidationError);
}

TEST_CASE("discrimination instances") {
    const auto a = gen_discrimination_instance(2, 1, 8);
    REQUIRE(a.train.size() == 2);
    CHECK(a.psi == a.train[a.chosen]);
    const auto b = gen_discrimination_instance(2, 1, 8);
    CHECK(a.chosen == b.chosen);
    const auto big = gen_discrimination_instance(64, 4, 1);
    for (std::size_t i = 0; i < big.train.size(); ++i) {
        for (std::size_t j = i + 1; j < big.train.size(); ++j) {
            Complex z = 0.0;
            for (std::size_t x = 0; x < big.train[i].size(); ++x)
                z += std::conj(big.train[i][x]) * big.train[j][x];
            REQUIRE(std::norm(z) < 1.0 - 1e-6);
        }
    }
}
