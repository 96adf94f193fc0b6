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

#include "qknn/kmax.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>

namespace qknn {

namespace {

constexpr std::size_t kMaxAttempts = 10000;

struct ReducedOps {
    double lmax;
    double entropy;
};

ReducedOps reduced(const State &state, const std::vector<Qubit> &kept) {
    const StateVector sv(state);
    const DensityMatrix rho = partial_trace(sv, kept);
    const Eigen::VectorXd ev = rho.eigenvalues();
    return {ev.maxCoeff(), rho.von_neumann_entropy()};
}

State kron(const State &low, const State &high) {
    State out(low.size() * high.size());
    for (std::size_t h = 0; h < high.size(); ++h) {
        for (std::size_t l = 0; l < low.size(); ++l) {
            out[l + low.size() * h] = low[l] * high[h];
        }
    }
    return out;
}

/// Three-qubit state with a two-qubit block on (p, q) and a single qubit on r.
State place_pair(const State &pair, const State &single, Qubit p, Qubit q,
                 Qubit r) {
    State out(8);
    for (std::size_t i = 0; i < 8; ++i) {
        const std::size_t bp = (i >> p) & 1U, bq = (i >> q) & 1U, br = (i >> r) & 1U;
        out[i] = pair[bp + 2 * bq] * single[br];
    }
    return out;
}

Eigen::Matrix2cd haar_unitary_2(std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Matrix2cd z;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            z(r, c) = Complex(g(rng), g(rng));
        }
    }
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
    Eigen::Matrix2cd q = qr.householderQ();
    const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < 2; ++c) {
        q.col(c) *= r(c, c) / std::abs(r(c, c));
    }
    return q;
}

State entangled_pair(std::uint64_t seed) {
    for (std::size_t a = 0; a < kMaxAttempts; ++a) {
        State s = haar_random_state(2, mix_seed(seed, a));
        if (entanglement_entropy(s, {0}) >= kEntropyFloor) {
            return s;
        }
    }
    throw std::runtime_error("rejection sampling budget exceeded");
}

State sample(Scheme scheme, int cls, std::uint64_t seed) {
    switch (scheme) {
    case Scheme::SepVsEnt2q:
        if (cls == 0) {
            return kron(haar_random_state(1, mix_seed(seed, 0)),
                        haar_random_state(1, mix_seed(seed, 1)));
        }
        return entangled_pair(seed);
    case Scheme::SepVsMaxent2q: {
        if (cls == 0) {
            return kron(haar_random_state(1, mix_seed(seed, 0)),
                        haar_random_state(1, mix_seed(seed, 1)));
        }
        std::mt19937_64 rng(seed);
        const Eigen::Matrix2cd u1 = haar_unitary_2(rng);
        const Eigen::Matrix2cd u2 = haar_unitary_2(rng);
        const double r = std::numbers::sqrt2 / 2.0;
        State out(4);
        // (U1 x U2)(|00> + |11>)/sqrt2, U1 on qubit 0.
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                out[static_cast<std::size_t>(a + 2 * b)] =
                    r * (u1(a, 0) * u2(b, 0) + u1(a, 1) * u2(b, 1));
            }
        }
        return out;
    }
    case Scheme::FiveClass3q: {
        switch (cls) {
        case 0:
            return kron(kron(haar_random_state(1, mix_seed(seed, 0)),
                             haar_random_state(1, mix_seed(seed, 1))),
                        haar_random_state(1, mix_seed(seed, 2)));
        case 1:
            return place_pair(entangled_pair(mix_seed(seed, 0)),
                              haar_random_state(1, mix_seed(seed, 1)), 0, 1, 2);
        case 2:
            return place_pair(entangled_pair(mix_seed(seed, 0)),
                              haar_random_state(1, mix_seed(seed, 1)), 1, 2, 0);
        case 3:
            return place_pair(entangled_pair(mix_seed(seed, 0)),
                              haar_random_state(1, mix_seed(seed, 1)), 0, 2, 1);
        default:
            for (std::size_t a = 0; a < kMaxAttempts; ++a) {
                State s = haar_random_state(3, mix_seed(seed, a));
                bool ok = true;
                for (Qubit q = 0; q < 3 && ok; ++q) {
                    ok = entanglement_entropy(s, {q}) >= kEntropyFloor;
                }
                if (ok) {
                    return s;
                }
            }
            throw std::runtime_error("rejection sampling budget exceeded");
        }
    }
    }
    throw ValidationError("unknown scheme");
}

} // namespace

Scheme parse_scheme(const std::string &name) {
    if (name == "2q-sep-vs-ent") return Scheme::SepVsEnt2q;
    if (name == "2q-sep-vs-maxent") return Scheme::SepVsMaxent2q;
    if (name == "3q-five-class") return Scheme::FiveClass3q;
    throw ValidationError("unknown scheme '" + name +
                          "' (expected 2q-sep-vs-ent, 2q-sep-vs-maxent or "
                          "3q-five-class)");
}

std::string scheme_name(Scheme s) {
    switch (s) {
    case Scheme::SepVsEnt2q: return "2q-sep-vs-ent";
    case Scheme::SepVsMaxent2q: return "2q-sep-vs-maxent";
    case Scheme::FiveClass3q: return "3q-five-class";
    }
    return "";
}

std::size_t scheme_qubits(Scheme s) { return s == Scheme::FiveClass3q ? 3 : 2; }

std::size_t scheme_classes(Scheme s) { return s == Scheme::FiveClass3q ? 5 : 2; }

std::string class_name(Scheme s, int label) {
    static const std::array<const char *, 5> three{"A-B-C", "AB-C", "A-BC", "AC-B",
                                                   "ABC"};
    if (label < 0 || static_cast<std::size_t>(label) >= scheme_classes(s)) {
        throw ValidationError("class id out of range");
    }
    switch (s) {
    case Scheme::SepVsEnt2q: return label == 0 ? "separable" : "entangled";
    case Scheme::SepVsMaxent2q: return label == 0 ? "separable" : "max-entangled";
    case Scheme::FiveClass3q: return three[static_cast<std::size_t>(label)];
    }
    return "";
}

State haar_random_state(std::size_t n, std::uint64_t seed) {
    if (n < 1) {
        throw ValidationError("random state needs at least one qubit");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    State s(std::size_t{1} << n);
    double nrm = 0.0;
    for (auto &c : s) {
        c = Complex(g(rng), g(rng));
        nrm += std::norm(c);
    }
    nrm = std::sqrt(nrm);
    for (auto &c : s) {
        c /= nrm;
    }
    return s;
}

double largest_schmidt(const State &state, const std::vector<Qubit> &kept) {
    return reduced(state, kept).lmax;
}

double entanglement_entropy(const State &state, const std::vector<Qubit> &kept) {
    return reduced(state, kept).entropy;
}

bool separable_cut(const State &state, const std::vector<Qubit> &kept) {
    return largest_schmidt(state, kept) >= 1.0 - 1e-9;
}

int label_entanglement(const State &state, Scheme scheme) {
    const std::size_t n = scheme_qubits(scheme);
    if (state.size() != (std::size_t{1} << n)) {
        throw ValidationError("scheme " + scheme_name(scheme) + " expects " +
                              std::to_string(n) + "-qubit states");
    }
    switch (scheme) {
    case Scheme::SepVsEnt2q:
        return separable_cut(state, {0}) ? 0 : 1;
    case Scheme::SepVsMaxent2q: {
        const auto r = reduced(state, {0});
        if (r.lmax >= 1.0 - 1e-9) {
            return 0;
        }
        if (r.entropy >= 1.0 - 1e-6) {
            return 1;
        }
        throw ValidationError("state is neither separable nor maximally entangled");
    }
    case Scheme::FiveClass3q: {
        const bool a = separable_cut(state, {0});
        const bool b = separable_cut(state, {1});
        const bool c = separable_cut(state, {2});
        const int count = int(a) + int(b) + int(c);
        if (count >= 2) return 0;
        if (c) return 1;
        if (a) return 2;
        if (b) return 3;
        return 4;
    }
    }
    throw ValidationError("unknown scheme");
}

Corpus gen_class(Scheme scheme, int class_id, std::size_t count,
                 std::uint64_t seed) {
    if (class_id < 0 || static_cast<std::size_t>(class_id) >= scheme_classes(scheme)) {
        throw ValidationError("class id " + std::to_string(class_id) +
                              " not defined for " + scheme_name(scheme));
    }
    Corpus c;
    c.scheme = scheme;
    c.seed = seed;
    c.items.reserve(count);
    const std::uint64_t class_seed =
        mix_seed(seed, static_cast<std::uint64_t>(class_id));
    for (std::size_t i = 0; i < count; ++i) {
        LabeledState item;
        item.amplitudes = sample(scheme, class_id, mix_seed(class_seed, i));
        item.label = class_id;
        item.seed_path = std::to_string(seed) + "/" + std::to_string(class_id) +
                         "/" + std::to_string(i);
        c.items.push_back(std::move(item));
    }
    return c;
}

Corpus gen_corpus(Scheme scheme, std::size_t per_class, std::uint64_t seed) {
    Corpus c;
    c.scheme = scheme;
    c.seed = seed;
    for (std::size_t k = 0; k < scheme_classes(scheme); ++k) {
        auto part = gen_class(scheme, static_cast<int>(k), per_class, seed);
        for (auto &it : part.items) {
            c.items.push_back(std::move(it));
        }
    }
    return c;
}

void write_corpus(std::ostream &os, const Corpus &corpus) {
    for (const auto &it : corpus.items) {
        nlohmann::json j;
        j["label"] = it.label;
        j["scheme"] = scheme_name(corpus.scheme);
        auto &amps = j["amplitudes"] = nlohmann::json::array();
        for (const auto &a : it.amplitudes) {
            amps.push_back({a.real(), a.imag()});
        }
        j["seed_path"] = it.seed_path;
        os << j.dump() << '\n';
    }
}

Corpus read_corpus(std::istream &is) {
    Corpus c;
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(line);
            const Scheme s = parse_scheme(j.at("scheme").get<std::string>());
            if (first) {
                c.scheme = s;
                first = false;
            } else if (s != c.scheme) {
                throw ValidationError("mixed schemes in one corpus");
            }
            LabeledState it;
            it.label = j.at("label").get<int>();
            for (const auto &p : j.at("amplitudes")) {
                it.amplitudes.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
            }
            if (it.amplitudes.size() != (std::size_t{1} << scheme_qubits(s))) {
                throw ValidationError("amplitude count does not match scheme");
            }
            it.seed_path = j.value("seed_path", std::string{});
            c.items.push_back(std::move(it));
        } catch (const nlohmann::json::exception &e) {
            throw ValidationError("corpus line " + std::to_string(lineno) + ": " +
                                  e.what());
        }
    }
    if (c.items.empty()) {
        throw ValidationError("corpus is empty");
    }
    return c;
}

DiscriminationInstance gen_discrimination_instance(std::size_t M, std::size_t n,
                                                   std::uint64_t seed) {
    if (M < 1 || n < 1) {
        throw ValidationError("discrimination instance needs M >= 1 and n >= 1");
    }
    DiscriminationInstance inst;
    std::uint64_t stream = 0;
    std::size_t attempts = 0;
    while (inst.train.size() < M) {
        if (++attempts > M + kMaxAttempts) {
            throw std::runtime_error("rejection sampling budget exceeded");
        }
        State s = haar_random_state(n, mix_seed(seed, stream++));
        bool distinct = true;
        for (const auto &t : inst.train) {
            if (std::norm(inner_product(t, s)) >= 1.0 - 1e-6) {
                distinct = false;
                break;
            }
        }
        if (distinct) {
            inst.train.push_back(std::move(s));
        }
    }
    std::mt19937_64 rng(mix_seed(seed, ~std::uint64_t{0}));
    inst.chosen = std::uniform_int_distribution<std::size_t>(0, M - 1)(rng);
    inst.psi = inst.train[inst.chosen];
    return inst;
}

} // namespace qknn
