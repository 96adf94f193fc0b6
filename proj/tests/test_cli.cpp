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

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace qknn;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    const auto d = fs::temp_directory_path() / "qknn_cli_test";
    fs::create_directories(d);
    return d;
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> v;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

} // namespace

TEST_CASE("gen-data writes reproducible corpora") {
    const auto dir = scratch_dir();
    const auto a = dir / "a.jsonl", b = dir / "b.jsonl";
    auto r = run({"gen-data", "--scheme", "2q-sep-vs-ent", "--per-class", "100", "--seed", "3",
                  "--out", a.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("separable: 100") != std::string::npos);
    const auto recs = lines(slurp(a));
    CHECK(recs.size() == 200);
    for (const auto &l : recs) CHECK(nlohmann::json::accept(l));
    REQUIRE(run({"gen-data", "--per-class", "100", "--seed", "3", "--out", b.string()}).code == 0);
    CHECK(slurp(a) == slurp(b));

    r = run({"gen-data", "--scheme", "5q", "--out", a.string()});
    CHECK(r.code == cli::kValidation);
    CHECK_FALSE(r.err.empty());
    CHECK(run({"gen-data"}).code == cli::kValidation);
}

TEST_CASE("classify prints accuracy and agrees across modes") {
    const auto dir = scratch_dir();
    const auto corpus = dir / "maxent.jsonl";
    REQUIRE(run({"gen-data", "--scheme", "2q-sep-vs-maxent", "--per-class", "60", "--seed", "2",
                 "--out", corpus.string()})
                .code == 0);
    const auto c1 = dir / "classical.csv", c2 = dir / "abstract.csv";
    auto r = run({"classify", "--corpus", corpus.string(), "--k", "3", "--mode", "classical",
                  "--out", c1.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("accuracy ", 0) == 0);
    r = run({"classify", "--corpus", corpus.string(), "--k", "3", "--mode", "oracle-abstract",
             "--b", "12", "--out", c2.string()});
    REQUIRE(r.code == 0);
    const auto l1 = lines(slurp(c1)), l2 = lines(slurp(c2));
    REQUIRE(l1.size() == l2.size());
    CHECK(l1[0] == "# qknn-sim v1");
    CHECK(l1[1] == "test_id,true_label,predicted,queries,mode");
    CHECK(l1.size() == 2 + 12);
    for (std::size_t i = 2; i < l1.size(); ++i) {
        // test_id, true_label and predicted must match
        const auto cut = [](const std::string &s) {
            std::size_t p = 0;
            for (int f = 0; f < 3; ++f) p = s.find(',', p) + 1;
            return s.substr(0, p);
        };
        CHECK(cut(l1[i]) == cut(l2[i]));
    }

    r = run({"classify", "--corpus", corpus.string(), "--k", "500"});
    CHECK(r.code == cli::kValidation);
    CHECK(run({"classify", "--corpus", (dir / "missing.jsonl").string()}).code == cli::kRuntime);
    CHECK(run({"classify"}).code == cli::kValidation);
}

TEST_CASE("verify reports every invariant as JSON") {
    const auto dir = scratch_dir();
    auto r = run({"verify", "--trials", "5"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.contains("invariants"));
    CHECK(j["invariants"].size() >= 10);

    r = run({"verify", "--trials", "5", "--inject-fault", "negate-comparator", "--out",
             (dir / "v.json").string()});
    CHECK(r.code == cli::kVerificationFailed);
    CHECK(r.out.find("FAIL oracle.comparator_exhaustive") != std::string::npos);
    CHECK(nlohmann::json::accept(slurp(dir / "v.json")));
    CHECK(run({"verify", "--inject-fault", "bitflip"}).code == cli::kValidation);
}

TEST_CASE("bench is deterministic and reports a slope") {
    const auto args = std::vector<std::string>{"bench", "--Ms", "16,32,64", "--trials", "20",
                                               "--seed", "5"};
    const auto a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("# k=1 slope_total=") != std::string::npos);
    CHECK(lines(a.out)[1].rfind("target,M,k,trials,mean_queries", 0) == 0);
    CHECK(run({"bench", "--Ms", "4", "--ks", "8"}).code == cli::kValidation);
    CHECK(run({"bench", "--budget-rounds", "1"}).code == cli::kValidation);
    CHECK(run({"bench", "--lambda", "2.0", "--Ms", "16"}).code == cli::kValidation);
}

TEST_CASE("discriminate finds the hidden index") {
    const auto r = run({"discriminate", "--M", "16", "--n", "4", "--trials", "10"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# success=1 ") != std::string::npos);
}

TEST_CASE("options can come from a config file") {
    const auto dir = scratch_dir();
    const auto cfg = dir / "run.toml";
    std::ofstream(cfg) << "M = 8\nn = 3\ntrials = 4\nseed = 9\n";
    const auto a = run({"discriminate", "--config", cfg.string()});
    const auto b = run({"discriminate", "--M", "8", "--n", "3", "--trials", "4", "--seed", "9"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    const auto over = run({"discriminate", "--config", cfg.string(), "--seed", "10"});
    const auto direct =
        run({"discriminate", "--M", "8", "--n", "3", "--trials", "4", "--seed", "10"});
    CHECK(over.out == direct.out);

    const auto bad = dir / "bad.toml";
    std::ofstream(bad) << "frobnicate = 1\n";
    CHECK(run({"discriminate", "--config", bad.string()}).code == cli::kValidation);
}

TEST_CASE("unknown subcommands and options fail validation") {
    CHECK(run({}).code == cli::kValidation);
    CHECK(run({"frobnicate"}).code == cli::kValidation);
    CHECK(run({"bench", "--nope"}).code == cli::kValidation);
    CHECK(run({"--help"}).code == 0);
}
