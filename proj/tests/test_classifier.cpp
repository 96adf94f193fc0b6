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
#include "qknn/classifier.hpp"
#include "qknn/datasets.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace qknn;
using Catch::Matchers::WithinAbs;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

TrainSet random_train(std::size_t M, std::size_t n, std::uint64_t seed, int classes = 2) {
    TrainSet t;
    for (std::size_t j = 0; j < M; ++j) {
        t.states.push_back(haar_random_state(n, mix_seed(seed, j)));
        t.labels.push_back(static_cast<int>(j % classes));
    }
    return t;
}

double overlap(const State &a, const State &b) {
    Complex z = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) z += std::conj(a[i]) * b[i];
    return std::abs(z);
}

std::vector<std::uint64_t> sorted(std::vector<std::uint64_t> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_CASE("classical kNN examples") {
    TrainSet t{{State{1.0, 0.0}, State{0.0, 1.0}}, {0, 1}};
    const auto c = classical_knn(State{1.0, 0.0}, t, 1, Similarity::Fidelity);
    CHECK(c.label == 0);
    CHECK(c.neighbors == std::vector<std::uint64_t>{0});
    CHECK_THAT(c.similarities[0], WithinAbs(1.0, 1e-15));

    // ties on similarity resolve to the lowest index
    TrainSet tie{{State{kS, kS}, State{kS, -kS}, State{1.0, 0.0}}, {1, 0, 0}};
    const auto d = classical_knn(State{1.0, 0.0}, tie, 2, Similarity::Fidelity);
    CHECK(d.neighbors == std::vector<std::uint64_t>{2, 0});

    CHECK_THROWS_AS(classical_knn(State{1.0, 0.0}, t, 3, Similarity::Fidelity), ValidationError);
    CHECK_THROWS_AS(classical_knn(State{1.0, 0.0}, TrainSet{}, 1, Similarity::Fidelity),
                    ValidationError);
    TrainSet cplx{{State{kS, Complex(0, kS)}}, {0}};
    CHECK_THROWS_AS(classical_knn(State{1.0, 0.0}, cplx, 1, Similarity::Dot), ValidationError);
}

TEST_CASE("majority vote") {
    const std::vector<int> labels{0, 0, 1, 1, 2};
    CHECK(majority_vote({0, 1, 2}, labels) == 0);
    CHECK(majority_vote({2, 3, 0}, labels) == 1);
    // tie between classes: nearest neighbour decides
    CHECK(majority_vote({0, 2}, labels) == 0);
    CHECK(majority_vote({2, 0}, labels) == 1);
    CHECK(majority_vote({4, 0, 2}, labels) == 2);
    CHECK_THROWS_AS(majority_vote({}, labels), ValidationError);
}

TEST_CASE("quantum search finds a copy of the test state") {
    const auto train = random_train(16, 2, 3);
    QknnConfig cfg;
    cfg.search.seed = 8;
    const auto c = qknn_classify(StatePrep(train.states[5]), train, 1, cfg, Mode::OracleAbstract);
    CHECK(c.neighbors == std::vector<std::uint64_t>{5});
    CHECK_THAT(c.similarities[0], WithinAbs(1.0, std::ldexp(1.0, -12)));
    CHECK(c.oracle_queries > 0);
    CHECK(c.data_prep_queries == c.oracle_queries * 6 * (8 * 4096 - 4));
}

TEST_CASE("abstract mode agrees with classical kNN at b = 12") {
    std::size_t same = 0, trials = 0;
    for (std::uint64_t seed = 0; trials < 100; ++seed) {
        const auto train = random_train(32, 2, 100 + seed);
        const auto psi = haar_random_state(2, 999 + seed);
        const auto table = make_table(psi, train, Similarity::Fidelity, 12);
        auto q = table.quantized;
        std::sort(q.begin(), q.end());
        if (std::adjacent_find(q.begin(), q.end()) != q.end()) continue;
        ++trials;
        QknnConfig cfg;
        cfg.search.seed = seed;
        const auto a = qknn_classify(StatePrep(psi), train, 5, cfg, Mode::OracleAbstract);
        const auto c = classical_knn(psi, train, 5, Similarity::Fidelity);
        same += a.neighbors == c.neighbors && a.label == c.label ? 1 : 0;
    }
    CHECK(same == 100);
}

TEST_CASE("abstract mode matches the quantized classical vote on entanglement data") {
    const auto corpus = gen_corpus(Scheme::SepVsEnt2q, 40, 5);
    TrainSet train;
    for (std::size_t i = 0; i + 10 < corpus.items.size(); ++i) {
        train.states.push_back(corpus.items[i].amplitudes);
        train.labels.push_back(corpus.items[i].label);
    }
    for (std::size_t i = corpus.items.size() - 10; i < corpus.items.size(); ++i) {
        const auto &psi = corpus.items[i].amplitudes;
        QknnConfig cfg;
        cfg.search.seed = i;
        const auto a = qknn_classify(StatePrep(psi), train, 5, cfg, Mode::OracleAbstract);
        const auto q = classical_knn_quantized(make_table(psi, train, Similarity::Fidelity, 12),
                                               train.labels, 5);
        CHECK(a.label == q.label);
        CHECK(sorted(a.neighbors) == sorted(q.neighbors));
    }
}

TEST_CASE("coarse precision returns a valid completion among ties") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto train = random_train(12, 1, 300 + seed);
        const auto psi = haar_random_state(1, 400 + seed);
        QknnConfig cfg;
        cfg.b = 1;
        cfg.search.seed = seed;
        const auto a = qknn_classify(StatePrep(psi), train, 3, cfg, Mode::OracleAbstract);
        const auto table = make_table(psi, train, Similarity::Fidelity, 1);
        std::uint64_t lowest_in = ~std::uint64_t{0};
        for (auto j : a.neighbors) lowest_in = std::min(lowest_in, table.quantized[j]);
        for (std::uint64_t j = 0; j < train.size(); ++j) {
            if (std::find(a.neighbors.begin(), a.neighbors.end(), j) == a.neighbors.end()) {
                CHECK(table.quantized[j] <= lowest_in);
            }
        }
        CHECK(a.neighbors.size() == 3);
    }
}

TEST_CASE("classification is deterministic per seed") {
    const auto train = random_train(20, 2, 7, 3);
    const auto psi = haar_random_state(2, 70);
    QknnConfig cfg;
    cfg.search.seed = 11;
    const auto a = qknn_classify(StatePrep(psi), train, 4, cfg, Mode::OracleAbstract);
    const auto b = qknn_classify(StatePrep(psi), train, 4, cfg, Mode::OracleAbstract);
    CHECK(a.label == b.label);
    CHECK(a.neighbors == b.neighbors);
    CHECK(a.oracle_queries == b.oracle_queries);
}

TEST_CASE("Bures distance orders neighbours like fidelity") {
    CHECK_THAT(bures_distance(1.0), WithinAbs(0.0, 1e-15));
    CHECK_THAT(bures_distance(0.0), WithinAbs(std::sqrt(2.0), 1e-15));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto train = random_train(15, 2, 50 + seed);
        const auto psi = haar_random_state(2, 60 + seed);
        const auto byfid = classical_knn(psi, train, 4, Similarity::Fidelity);
        std::vector<std::uint64_t> idx(train.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
            const double da = std::sqrt(2.0 - 2.0 * overlap(psi, train.states[a]));
            const double db = std::sqrt(2.0 - 2.0 * overlap(psi, train.states[b]));
            return da < db;
        });
        idx.resize(4);
        CHECK(idx == byfid.neighbors);
    }
}

TEST_CASE("dot-product similarity on real states") {
    TrainSet t{{State{1.0, 0.0}, State{-1.0, 0.0}, State{kS, kS}}, {0, 1, 2}};
    const auto c = classical_knn(State{1.0, 0.0}, t, 3, Similarity::Dot);
    CHECK(c.neighbors == std::vector<std::uint64_t>{0, 2, 1});
    QknnConfig cfg;
    cfg.kind = Similarity::Dot;
    const auto a = qknn_classify(StatePrep(State{1.0, 0.0}), t, 2, cfg, Mode::OracleAbstract);
    CHECK(a.neighbors == std::vector<std::uint64_t>{0, 2});
}

TEST_CASE("circuit-exact mode on a tiny instance") {
    TrainSet t{{State{0.0, 1.0}, State{1.0, 0.0}}, {1, 0}};
    QknnConfig cfg;
    cfg.b = 2;
    const auto c = qknn_classify(StatePrep(State{1.0, 0.0}), t, 1, cfg, Mode::CircuitExact);
    CHECK(c.neighbors == std::vector<std::uint64_t>{1});
    CHECK(c.label == 0);
    cfg.b = 4;
    CHECK_THROWS_AS(qknn_classify(StatePrep(State{1.0, 0.0}), t, 1, cfg, Mode::CircuitExact),
                    ValidationError);
    cfg.b = 2;
    const auto big = random_train(8, 1, 1);
    CHECK_THROWS_AS(qknn_classify(StatePrep(State{1.0, 0.0}), big, 1, cfg, Mode::CircuitExact),
                    ValidationError);
}

TEST_CASE("state discrimination") {
    const auto inst = gen_discrimination_instance(8, 3, 21);
    TrainSet t{inst.train, std::vector<int>(8, 0)};
    QknnConfig cfg;
    const auto d = discriminate(StatePrep(inst.train[3]), t, cfg);
    CHECK(d.index == 3);
    const auto pair = gen_discrimination_instance(2, 1, 4);
    TrainSet p{pair.train, {0, 1}};
    const auto e = discriminate(StatePrep(pair.psi), p, cfg);
    CHECK(e.index == pair.chosen);
    CHECK(e.oracle_queries <= 10);
    CHECK_THROWS(discriminate(StatePrep(haar_random_state(3, 5)), t, cfg));
}

TEST_CASE("mode names") {
    CHECK(parse_mode("classical") == Mode::Classical);
    CHECK(parse_mode("oracle-abstract") == Mode::OracleAbstract);
    CHECK(parse_mode("circuit-exact") == Mode::CircuitExact);
    CHECK(mode_name(Mode::OracleAbstract) == "oracle-abstract");
    CHECK_THROWS_AS(parse_mode("fast"), ValidationError);
}
