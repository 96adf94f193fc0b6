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
#include "qknn/cli.hpp"

#include "qknn/classifier.hpp"
#include "qknn/datasets.hpp"
#include "qknn/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace qknn::cli {

namespace {

constexpr const char *kCsvHeader = "# qknn-sim v1";

struct RunConfig {
    std::string scheme{"2q-sep-vs-ent"};
    std::size_t M{16};
    std::size_t n{4};
    std::size_t k{1};
    std::size_t b{12};
    std::string mode{"oracle-abstract"};
    std::string similarity{"fidelity"};
    std::uint64_t seed{1};
    std::size_t trials{100};
    std::size_t budget_rounds{30};
    double lambda{1.2};
    std::string out;
    std::string corpus;
    std::size_t per_class{1000};
    double split{0.9};
    std::vector<std::size_t> Ms{16, 32, 64, 128, 256, 512, 1024};
    std::vector<std::size_t> ks;
    std::string target{"kmax"};
    std::string fault;
};

SearchConfig search_config(const RunConfig &c) {
    SearchConfig s;
    s.lambda = c.lambda;
    s.max_rounds = c.budget_rounds;
    s.seed = c.seed;
    s.validate();
    return s;
}

Similarity parse_similarity(const std::string &s) {
    if (s == "fidelity") return Similarity::Fidelity;
    if (s == "dot") return Similarity::Dot;
    throw ValidationError("unknown similarity '" + s + "' (expected fidelity or dot)");
}

/// Writes to --out when given, otherwise to the console stream.
class Sink {
  public:
    Sink(const std::string &path, std::ostream &fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) {
                throw std::runtime_error("cannot open '" + path + "' for writing");
            }
            os_ = &file_;
            to_file_ = true;
        }
    }
    std::ostream &stream() { return *os_; }
    bool to_file() const { return to_file_; }
    void close() {
        if (file_.is_open()) {
            file_.close();
            if (!file_) {
                throw std::runtime_error("write failed");
            }
        }
    }

  private:
    std::ofstream file_;
    std::ostream *os_;
    bool to_file_{false};
};

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

int cmd_gen_data(const RunConfig &c, std::ostream &out) {
    const Scheme s = parse_scheme(c.scheme);
    if (c.out.empty()) {
        throw ValidationError("gen-data needs --out");
    }
    if (c.per_class == 0) {
        throw ValidationError("--per-class must be positive");
    }
    const Corpus corpus = gen_corpus(s, c.per_class, c.seed);
    Sink sink(c.out, out);
    write_corpus(sink.stream(), corpus);
    sink.close();
    std::map<int, std::size_t> counts;
    for (const auto &it : corpus.items) ++counts[it.label];
    out << "wrote " << corpus.items.size() << " records to " << c.out << '\n';
    for (const auto &[label, count] : counts) {
        out << "  " << class_name(s, label) << ": " << count << '\n';
    }
    return kOk;
}

int cmd_classify(const RunConfig &c, std::ostream &out) {
    if (c.corpus.empty()) {
        throw ValidationError("classify needs --corpus");
    }
    if (!(c.split > 0.0 && c.split < 1.0)) {
        throw ValidationError("--split must lie in (0, 1)");
    }
    std::ifstream in(c.corpus);
    if (!in) {
        throw std::runtime_error("cannot open corpus '" + c.corpus + "'");
    }
    const Corpus corpus = read_corpus(in);
    const Mode mode = parse_mode(c.mode);
    const Similarity kind = parse_similarity(c.similarity);

    std::vector<std::size_t> order(corpus.items.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(mix_seed(c.seed, 0x5111));
    std::shuffle(order.begin(), order.end(), rng);
    const auto n_train = static_cast<std::size_t>(
        std::llround(c.split * static_cast<double>(order.size())));
    if (n_train == 0 || n_train == order.size()) {
        throw ValidationError("split leaves an empty train or test set");
    }
    TrainSet train;
    for (std::size_t i = 0; i < n_train; ++i) {
        train.states.push_back(corpus.items[order[i]].amplitudes);
        train.labels.push_back(corpus.items[order[i]].label);
    }
    if (c.k > train.size()) {
        throw ValidationError("k=" + std::to_string(c.k) + " exceeds M=" +
                              std::to_string(train.size()));
    }

    QknnConfig qc;
    qc.b = c.b;
    qc.kind = kind;
    qc.search = search_config(c);

    Sink sink(c.out, out);
    auto &os = sink.stream();
    os << kCsvHeader << '\n' << "test_id,true_label,predicted,queries,mode\n";
    std::size_t correct = 0, total = 0;
    for (std::size_t i = n_train; i < order.size(); ++i) {
        const auto &item = corpus.items[order[i]];
        qc.search.seed = mix_seed(c.seed, order[i]);
        const auto r = qknn_classify(StatePrep(item.amplitudes), train, c.k, qc, mode);
        os << order[i] << ',' << item.label << ',' << r.label << ','
           << r.oracle_queries << ',' << mode_name(mode) << '\n';
        correct += r.label == item.label ? 1 : 0;
        ++total;
    }
    const double acc = static_cast<double>(correct) / static_cast<double>(total);
    if (sink.to_file()) {
        sink.close();
        out << "accuracy " << fmt(acc) << " (" << correct << "/" << total << ")\n";
    } else {
        os << "# accuracy=" << fmt(acc) << '\n';
    }
    return kOk;
}

int cmd_verify(const RunConfig &c, std::ostream &out) {
    VerifyOptions o;
    o.seed = c.seed;
    o.samples = std::max<std::size_t>(1, std::min<std::size_t>(c.trials, 1000));
    if (!c.fault.empty()) {
        if (c.fault != "negate-comparator") {
            throw ValidationError("unknown fault '" + c.fault + "'");
        }
        o.negate_comparator = true;
    }
    const VerifyReport rep = run_verification(o);
    Sink sink(c.out, out);
    sink.stream() << rep.to_json() << '\n';
    sink.close();
    if (sink.to_file()) {
        for (const auto &r : rep.results) {
            out << (r.passed ? "PASS " : "FAIL ") << r.name << " deviation="
                << fmt(r.deviation) << '\n';
        }
    }
    return rep.all_passed() ? kOk : kVerificationFailed;
}

struct DiscriminationStats {
    double mean{0}, sd{0}, success{0};
};

DiscriminationStats discrimination_sweep(const RunConfig &c, std::size_t M,
                                         std::ostream *rows) {
    std::vector<double> q;
    std::size_t ok = 0;
    for (std::size_t t = 0; t < c.trials; ++t) {
        const std::uint64_t s = mix_seed(c.seed, M * 7919ULL + t);
        const auto inst = gen_discrimination_instance(M, c.n, s);
        TrainSet train{inst.train, std::vector<int>(M)};
        std::iota(train.labels.begin(), train.labels.end(), 0);
        QknnConfig qc;
        qc.b = c.b;
        qc.search = search_config(c);
        qc.search.seed = mix_seed(s, 3);
        Discrimination d{};
        bool found = true;
        try {
            d = discriminate(StatePrep(inst.psi), train, qc);
        } catch (const std::runtime_error &) {
            found = false;
        }
        const bool good = found && d.index == inst.chosen;
        ok += good ? 1 : 0;
        q.push_back(static_cast<double>(d.oracle_queries));
        if (rows != nullptr) {
            *rows << t << ',' << M << ',' << c.n << ',' << inst.chosen << ','
                  << (found ? std::to_string(d.index) : std::string("none")) << ','
                  << (good ? 1 : 0) << ',' << d.oracle_queries << ','
                  << d.data_prep_queries << '\n';
        }
    }
    DiscriminationStats st;
    st.mean = std::accumulate(q.begin(), q.end(), 0.0) / q.size();
    double v = 0;
    for (double x : q) v += (x - st.mean) * (x - st.mean);
    st.sd = q.size() > 1 ? std::sqrt(v / (q.size() - 1)) : 0.0;
    st.success = static_cast<double>(ok) / c.trials;
    return st;
}

int cmd_discriminate(const RunConfig &c, std::ostream &out) {
    if (c.M < 1 || c.trials < 1) {
        throw ValidationError("--M and --trials must be positive");
    }
    Sink sink(c.out, out);
    auto &os = sink.stream();
    os << kCsvHeader << '\n'
       << "trial,M,n,chosen,found,correct,oracle_queries,data_prep_queries\n";
    const auto st = discrimination_sweep(c, c.M, &os);
    if (sink.to_file()) {
        sink.close();
        out << "success " << fmt(st.success) << " mean_queries " << fmt(st.mean) << '\n';
    } else {
        os << "# success=" << fmt(st.success) << " mean_queries=" << fmt(st.mean) << '\n';
    }
    return kOk;
}

int cmd_bench(const RunConfig &c, std::ostream &out) {
    if (c.Ms.empty() || c.trials < 1) {
        throw ValidationError("bench needs at least one M and one trial");
    }
    if (c.target != "kmax" && c.target != "discriminate") {
        throw ValidationError("--target must be kmax or discriminate");
    }
    std::vector<std::size_t> ks = c.ks.empty() ? std::vector<std::size_t>{c.k} : c.ks;
    for (const auto M : c.Ms) {
        for (const auto k : ks) {
            if (k < 1 || k > M) {
                throw ValidationError("k=" + std::to_string(k) + " not valid for M=" +
                                      std::to_string(M));
            }
        }
    }
    if (c.budget_rounds < 2) {
        throw ValidationError("budget too small: --budget-rounds must be at least 2");
    }
    Sink sink(c.out, out);
    auto &os = sink.stream();
    os << kCsvHeader << '\n'
       << "target,M,k,trials,mean_queries,std_queries,mean_to_solution,"
          "std_to_solution,success_rate\n";
    std::ostringstream summary;
    for (const auto k : ks) {
        std::vector<double> x, total, sol;
        for (const auto M : c.Ms) {
            if (c.target == "kmax") {
                SearchConfig sc = search_config(c);
                const auto row = scaling_experiment({M}, k, c.trials, sc).front();
                os << "kmax," << M << ',' << k << ',' << c.trials << ','
                   << fmt(row.mean_queries) << ',' << fmt(row.std_queries) << ','
                   << fmt(row.mean_to_solution) << ',' << fmt(row.std_to_solution)
                   << ',' << fmt(row.success_rate) << '\n';
                total.push_back(row.mean_queries);
                sol.push_back(row.mean_to_solution);
            } else {
                const auto st = discrimination_sweep(c, M, nullptr);
                os << "discriminate," << M << ",1," << c.trials << ',' << fmt(st.mean)
                   << ',' << fmt(st.sd) << ',' << fmt(st.mean) << ',' << fmt(st.sd)
                   << ',' << fmt(st.success) << '\n';
                total.push_back(st.mean);
                sol.push_back(st.mean);
            }
            x.push_back(static_cast<double>(M));
        }
        if (x.size() >= 2) {
            const double s1 = loglog_slope(x, total);
            const double s2 = loglog_slope(x, sol);
            os << "# k=" << k << " slope_total=" << fmt(s1, 4)
               << " slope_to_solution=" << fmt(s2, 4) << '\n';
            summary << "k=" << k << " slope_total=" << fmt(s1, 4)
                    << " slope_to_solution=" << fmt(s2, 4) << '\n';
        }
    }
    sink.close();
    if (sink.to_file()) {
        out << summary.str();
    }
    return kOk;
}

void add_common(CLI::App &app, RunConfig &c) {
    app.add_option("--scheme", c.scheme, "Corpus scheme")->capture_default_str();
    app.add_option("--M", c.M, "Number of train states")->capture_default_str();
    app.add_option("--n", c.n, "Qubits per state")->capture_default_str();
    app.add_option("--k", c.k, "Number of neighbours")->capture_default_str();
    app.add_option("--b", c.b, "Bits of precision")->capture_default_str();
    app.add_option("--mode", c.mode, "classical, oracle-abstract or circuit-exact")
        ->capture_default_str();
    app.add_option("--similarity", c.similarity, "fidelity or dot")->capture_default_str();
    app.add_option("--seed", c.seed, "Master seed")->capture_default_str();
    app.add_option("--trials", c.trials, "Trials per configuration")->capture_default_str();
    app.add_option("--budget-rounds", c.budget_rounds,
                   "Search attempts before a search is declared failed")
        ->capture_default_str();
    app.add_option("--lambda", c.lambda, "Growth factor of the iteration cap")
        ->capture_default_str();
    app.add_option("--out", c.out, "Output file");
    app.add_option("--corpus", c.corpus, "Corpus file (JSON lines)");
    app.add_option("--per-class", c.per_class, "States per class")->capture_default_str();
    app.add_option("--split", c.split, "Train fraction")->capture_default_str();
    app.add_option("--Ms", c.Ms, "Train-set sizes for bench")->delimiter(',');
    app.add_option("--ks", c.ks, "Neighbour counts for bench")->delimiter(',');
    app.add_option("--target", c.target, "bench target: kmax or discriminate")
        ->capture_default_str();
    app.add_option("--inject-fault", c.fault, "verify: deliberately break a component");
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    RunConfig c;
    CLI::App app{"Quantum k-nearest-neighbour simulator", "qknn_sim"};
    app.set_config("--config", "", "Read options from a key = value file");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    add_common(app, c);
    auto *gen = app.add_subcommand("gen-data", "Generate a labeled corpus")->fallthrough();
    auto *cls = app.add_subcommand("classify", "Classify a corpus split")->fallthrough();
    auto *ver = app.add_subcommand("verify", "Run the invariant suites")->fallthrough();
    auto *ben = app.add_subcommand("bench", "Query-count scaling sweeps")->fallthrough();
    auto *dis = app.add_subcommand("discriminate", "State discrimination trials")
                    ->fallthrough();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }

    try {
        if (gen->parsed()) return cmd_gen_data(c, out);
        if (cls->parsed()) return cmd_classify(c, out);
        if (ver->parsed()) return cmd_verify(c, out);
        if (ben->parsed()) return cmd_bench(c, out);
        if (dis->parsed()) return cmd_discriminate(c, out);
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kValidation;
}

} // namespace qknn::cli
