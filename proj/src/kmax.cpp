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
#include "qknn/kmax.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qknn {

namespace {

/// Picks the `rank`-th index in [0, N) whose mark equals `want`.
std::uint64_t nth_with_mark(const std::vector<std::uint8_t> &marks,
                            std::uint64_t N, bool want, std::uint64_t rank) {
    for (std::uint64_t j = 0; j < N; ++j) {
        const bool marked = j < marks.size() && marks[j] != 0;
        if (marked == want) {
            if (rank == 0) {
                return j;
            }
            --rank;
        }
    }
    return N - 1;
}

double mean_of(const std::vector<double> &v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double std_of(const std::vector<double> &v) {
    if (v.size() < 2) {
        return 0.0;
    }
    const double mu = mean_of(v);
    double s = 0.0;
    for (const double x : v) {
        s += (x - mu) * (x - mu);
    }
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

} // namespace

void SearchConfig::validate() const {
    if (!(lambda > 1.0) || lambda > 4.0 / 3.0 + 1e-12) {
        throw ValidationError("lambda must lie in (1, 4/3]");
    }
    if (max_rounds < 1) {
        throw ValidationError("search budget must be at least one round");
    }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t search_domain(std::size_t M) {
    std::uint64_t n = 1;
    while (n < M) {
        n <<= 1;
    }
    return n;
}

double grover_success(std::uint64_t r, std::uint64_t t, std::uint64_t N) {
    if (t == 0) {
        return 0.0;
    }
    const double theta =
        std::asin(std::sqrt(static_cast<double>(t) / static_cast<double>(N)));
    const double s = std::sin(static_cast<double>(2 * r + 1) * theta);
    return s * s;
}

SearchOutcome grover_search_unknown(OracleHandle &oracle, std::size_t M,
                                    const SearchConfig &cfg,
                                    std::mt19937_64 &rng) {
    cfg.validate();
    const std::uint64_t N = search_domain(M);
    const std::uint64_t t = oracle.num_marked();
    const double root = std::sqrt(static_cast<double>(N));
    double cap = 1.0;
    SearchOutcome out;
    for (std::size_t attempt = 0; attempt < cfg.max_rounds; ++attempt) {
        const auto hi = static_cast<std::uint64_t>(std::ceil(cap)) - 1;
        const std::uint64_t r = std::uniform_int_distribution<std::uint64_t>(0, hi)(rng);
        oracle.apply_coherent(r);
        out.iterations += r;
        ++out.attempts;

        bool hit =
            std::bernoulli_distribution(std::min(1.0, grover_success(r, t, N)))(rng);
        if (t == N) {
            hit = true;
        }
        const std::uint64_t pool = hit ? t : N - t;
        const std::uint64_t rank =
            std::uniform_int_distribution<std::uint64_t>(0, pool - 1)(rng);
        const std::uint64_t candidate = nth_with_mark(oracle.marks(), N, hit, rank);
        if (oracle.query(candidate)) {
            out.found = candidate;
            return out;
        }
        cap = std::min(cfg.lambda * cap, root);
    }
    return out;
}

SearchOutcome grover_search_unknown(OracleHandle &oracle, std::size_t M,
                                    const SearchConfig &cfg) {
    std::mt19937_64 rng(cfg.seed);
    return grover_search_unknown(oracle, M, cfg, rng);
}

KMaxResult k_maxima(OracleBackend &backend, std::size_t k,
                    const SearchConfig &cfg) {
    cfg.validate();
    const std::size_t M = backend.size();
    if (k == 0 || k > M) {
        throw ValidationError("k must satisfy 1 <= k <= M (k=" +
                              std::to_string(k) + ", M=" + std::to_string(M) +
                              ")");
    }
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::uint64_t> pool(M);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = std::uniform_int_distribution<std::size_t>(i, M - 1)(rng);
        std::swap(pool[i], pool[j]);
    }
    std::vector<std::uint64_t> A(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));

    KMaxResult res;
    for (;;) {
        auto y_it = std::min_element(A.begin(), A.end(), [&](auto a, auto b) {
            const auto ca = backend.code(a), cb = backend.code(b);
            return ca != cb ? ca < cb : a < b;
        });
        res.value_reads += A.size();
        KMaxRound round;
        round.y = *y_it;
        if (cfg.stop_at_ceiling && backend.code(round.y) == backend.max_code()) {
            res.stopped_at_ceiling = true;
            res.rounds.push_back(round);
            break;
        }
        OracleHandle handle(backend, round.y, A);
        const SearchOutcome s = grover_search_unknown(handle, M, cfg, rng);
        round.queries = handle.query_count();
        round.attempts = s.attempts;
        round.replacement = s.found;
        res.oracle_queries += round.queries;
        res.data_prep_queries += handle.prep_calls();
        res.rounds.push_back(round);
        if (!s.found) {
            break;
        }
        *y_it = *s.found;
        res.queries_to_solution = res.oracle_queries;
    }
    res.top_k = A;
    std::sort(res.top_k.begin(), res.top_k.end());
    return res;
}

std::vector<std::uint64_t> random_distinct_codes(std::size_t M,
                                                 std::uint64_t seed,
                                                 std::size_t *bits) {
    std::size_t b = 1;
    while ((std::size_t{1} << b) < M) {
        ++b;
    }
    ++b;
    std::vector<std::uint64_t> values((std::size_t{1} << b) - 1);
    std::iota(values.begin(), values.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < M; ++i) {
        const auto j =
            std::uniform_int_distribution<std::size_t>(i, values.size() - 1)(rng);
        std::swap(values[i], values[j]);
    }
    values.resize(M);
    if (bits != nullptr) {
        *bits = b;
    }
    return values;
}

std::vector<std::uint64_t> top_k_by_sort(const std::vector<std::uint64_t> &codes,
                                         std::size_t k) {
    std::vector<std::uint64_t> idx(codes.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](auto a, auto b) { return codes[a] > codes[b]; });
    idx.resize(std::min(k, idx.size()));
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::vector<ScalingRow> scaling_experiment(const std::vector<std::size_t> &Ms,
                                           std::size_t k, std::size_t trials,
                                           const SearchConfig &cfg) {
    std::vector<ScalingRow> rows;
    for (const auto M : Ms) {
        std::vector<double> total, to_sol;
        std::size_t ok = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::uint64_t s = mix_seed(cfg.seed, M * 1000003ULL + t);
            std::size_t b = 0;
            auto codes = random_distinct_codes(M, s, &b);
            const auto truth = top_k_by_sort(codes, k);
            AbstractBackend backend(std::move(codes), b);
            SearchConfig c = cfg;
            c.seed = mix_seed(s, 1);
            const auto r = k_maxima(backend, k, c);
            total.push_back(static_cast<double>(r.oracle_queries));
            to_sol.push_back(static_cast<double>(r.queries_to_solution));
            ok += r.top_k == truth ? 1 : 0;
        }
        ScalingRow row;
        row.M = M;
        row.k = k;
        row.trials = trials;
        row.mean_queries = mean_of(total);
        row.std_queries = std_of(total);
        row.mean_to_solution = mean_of(to_sol);
        row.std_to_solution = std_of(to_sol);
        row.success_rate = trials ? static_cast<double>(ok) / trials : 0.0;
        rows.push_back(row);
    }
    return rows;
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ValidationError("slope fit needs at least two points");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace qknn
