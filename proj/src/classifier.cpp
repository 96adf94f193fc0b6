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

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace qknn {

namespace {

std::vector<std::uint64_t> order_desc(const std::vector<std::uint64_t> &idx,
                                      auto key) {
    std::vector<std::uint64_t> out = idx;
    std::stable_sort(out.begin(), out.end(), [&](auto a, auto b) {
        const auto ka = key(a), kb = key(b);
        return ka != kb ? ka > kb : a < b;
    });
    return out;
}

void check_k(std::size_t k, std::size_t M) {
    if (M == 0) {
        throw ValidationError("train set is empty");
    }
    if (k == 0 || k > M) {
        throw ValidationError("k=" + std::to_string(k) + " must be in [1, M=" +
                              std::to_string(M) + "]");
    }
}

void require_real(const State &s) {
    for (const auto &c : s) {
        if (std::abs(c.imag()) > 1e-12) {
            throw ValidationError("dot-product mode requires real amplitudes");
        }
    }
}

Encoding encoding_of(Similarity kind) {
    return kind == Similarity::Fidelity ? Encoding::Fidelity : Encoding::DotOffset;
}

} // namespace

std::size_t TrainSet::num_qubits() const {
    if (states.empty()) {
        return 0;
    }
    std::size_t n = 0;
    while ((std::size_t{1} << n) < states[0].size()) {
        ++n;
    }
    return n;
}

void TrainSet::validate() const {
    if (states.empty()) {
        throw ValidationError("train set is empty");
    }
    if (labels.size() != states.size()) {
        throw ValidationError("train set has " + std::to_string(states.size()) +
                              " states but " + std::to_string(labels.size()) +
                              " labels");
    }
    for (const auto &s : states) {
        if (s.size() != states[0].size()) {
            throw ValidationError("train states differ in dimension");
        }
        double nrm = 0.0;
        for (const auto &c : s) {
            nrm += std::norm(c);
        }
        if (std::abs(nrm - 1.0) > 1e-10) {
            throw ValidationError("train state is not normalized");
        }
    }
}

double similarity(const State &test, const State &train, Similarity kind) {
    const Complex ip = inner_product(test, train);
    return kind == Similarity::Fidelity ? std::min(std::norm(ip), 1.0) : ip.real();
}

FidelityTable make_table(const State &test, const TrainSet &train,
                         Similarity kind, std::size_t b) {
    FidelityTable t;
    t.kind = kind;
    t.b = b;
    for (const auto &s : train.states) {
        const double v = similarity(test, s, kind);
        t.exact.push_back(v);
        t.quantized.push_back(encode_similarity(v, b, encoding_of(kind)));
    }
    return t;
}

Mode parse_mode(const std::string &name) {
    if (name == "classical") return Mode::Classical;
    if (name == "oracle-abstract") return Mode::OracleAbstract;
    if (name == "circuit-exact") return Mode::CircuitExact;
    throw ValidationError("unknown mode '" + name +
                          "' (expected classical, oracle-abstract or circuit-exact)");
}

std::string mode_name(Mode m) {
    switch (m) {
    case Mode::Classical: return "classical";
    case Mode::OracleAbstract: return "oracle-abstract";
    case Mode::CircuitExact: return "circuit-exact";
    }
    return "";
}

int majority_vote(const std::vector<std::uint64_t> &neighbors,
                  const std::vector<int> &labels) {
    if (neighbors.empty()) {
        throw ValidationError("vote over an empty neighbour set");
    }
    std::map<int, std::size_t> counts;
    for (const auto j : neighbors) {
        ++counts[labels.at(j)];
    }
    std::size_t best = 0;
    for (const auto &[lab, c] : counts) {
        best = std::max(best, c);
    }
    for (const auto j : neighbors) {
        if (counts[labels[j]] == best) {
            return labels[j];
        }
    }
    return labels[neighbors.front()];
}

Classification classical_knn(const State &test, const TrainSet &train,
                             std::size_t k, Similarity kind) {
    train.validate();
    check_k(k, train.size());
    if (kind == Similarity::Dot) {
        require_real(test);
        for (const auto &s : train.states) require_real(s);
    }
    std::vector<double> sim;
    for (const auto &s : train.states) {
        sim.push_back(similarity(test, s, kind));
    }
    std::vector<std::uint64_t> idx(train.size());
    std::iota(idx.begin(), idx.end(), 0);
    idx = order_desc(idx, [&](std::uint64_t j) { return sim[j]; });
    idx.resize(k);
    Classification c;
    c.neighbors = idx;
    for (const auto j : idx) {
        c.similarities.push_back(sim[j]);
    }
    c.label = majority_vote(c.neighbors, train.labels);
    c.mode = Mode::Classical;
    return c;
}

Classification classical_knn_quantized(const FidelityTable &table,
                                       const std::vector<int> &labels,
                                       std::size_t k) {
    check_k(k, table.quantized.size());
    std::vector<std::uint64_t> idx(table.quantized.size());
    std::iota(idx.begin(), idx.end(), 0);
    idx = order_desc(idx, [&](std::uint64_t j) { return table.quantized[j]; });
    idx.resize(k);
    Classification c;
    c.neighbors = idx;
    for (const auto j : idx) {
        c.similarities.push_back(
            decode_similarity(table.quantized[j], table.b, encoding_of(table.kind)));
    }
    c.label = majority_vote(c.neighbors, labels);
    c.mode = Mode::Classical;
    return c;
}

Classification qknn_classify(const StatePrep &v, const TrainSet &train,
                             std::size_t k, const QknnConfig &cfg, Mode mode) {
    if (mode == Mode::Classical) {
        return classical_knn(v.state(), train, k, cfg.kind);
    }
    train.validate();
    check_k(k, train.size());
    if (v.state().size() != train.states[0].size()) {
        throw ValidationError("test and train states differ in dimension");
    }
    if (cfg.kind == Similarity::Dot) {
        require_real(v.state());
        for (const auto &s : train.states) require_real(s);
    }
    const Encoding enc = encoding_of(cfg.kind);

    std::unique_ptr<OracleBackend> backend;
    if (mode == Mode::OracleAbstract) {
        PrecisionConfig{cfg.b}.validate(1, 30);
        const auto table = make_table(v.state(), train, cfg.kind, cfg.b);
        backend = std::make_unique<AbstractBackend>(table.quantized, cfg.b, cfg.kind);
    } else {
        if (train.size() > 4 || train.num_qubits() > 1 || cfg.b > 3) {
            throw ValidationError("circuit-exact mode is limited to M <= 4, "
                                  "n <= 1, b <= 3");
        }
        PrecisionConfig{cfg.b}.validate(2, 3);
        backend = std::make_unique<CircuitBackend>(v, TrainPrep(train.states),
                                                   PrecisionConfig{cfg.b}, cfg.kind);
    }
    const KMaxResult r = k_maxima(*backend, k, cfg.search);
    Classification c;
    c.mode = mode;
    c.neighbors = order_desc(r.top_k, [&](std::uint64_t j) { return backend->code(j); });
    for (const auto j : c.neighbors) {
        c.similarities.push_back(decode_similarity(backend->code(j), cfg.b, enc));
    }
    c.label = majority_vote(c.neighbors, train.labels);
    c.oracle_queries = r.oracle_queries;
    c.data_prep_queries = r.data_prep_queries;
    return c;
}

Discrimination discriminate(const StatePrep &v, const TrainSet &train,
                            const QknnConfig &cfg) {
    train.validate();
    PrecisionConfig{cfg.b}.validate(1, 30);
    const auto table = make_table(v.state(), train, Similarity::Fidelity, cfg.b);
    AbstractBackend backend(table.quantized, cfg.b);
    SearchConfig sc = cfg.search;
    sc.stop_at_ceiling = true;
    const KMaxResult r = k_maxima(backend, 1, sc);
    if (backend.code(r.top_k[0]) != backend.max_code()) {
        throw std::runtime_error("no train state matches the test state");
    }
    return Discrimination{r.top_k[0], r.oracle_queries, r.data_prep_queries,
                          r.rounds.size()};
}

double bures_distance(double fidelity) {
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::sqrt(std::clamp(fidelity, 0.0, 1.0))));
}

} // namespace qknn
