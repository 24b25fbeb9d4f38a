// Copyright 2026 The wmtrade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

#include "wmtrade/cli.hpp"

using namespace wmtrade;
using namespace wmtrade::cli;

namespace {

struct Outcome3 {
    int code;
    std::string out;
    std::string err;
};

Outcome3 invoke(const std::vector<std::string> &args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        lines.push_back(line);
    }
    return lines;
}

std::vector<double> split_numbers(const std::string &line) {
    std::vector<double> v;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) {
        v.push_back(cell == "nan" ? std::nan("") : std::stod(cell));
    }
    return v;
}

class TempFile {
  public:
    explicit TempFile(const std::string &content) {
        path_ = (std::filesystem::temp_directory_path() /
                 ("wmtrade_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".cfg"))
                    .string();
        std::ofstream(path_) << content;
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string &path() const { return path_; }

  private:
    std::string path_;
};

}  // namespace

TEST(Parse, defaults) {
    const Invocation inv = parse_invocation({"sweep-states"});
    EXPECT_EQ(inv.subcommand, "sweep-states");
    EXPECT_EQ(inv.config.epsilon, 0.25);
    EXPECT_EQ(inv.config.eta, 0.75);
    EXPECT_EQ(inv.config.photons_per_setting, 100000);
    EXPECT_EQ(inv.config.counts_per_basis, 10000);
    EXPECT_EQ(inv.config.seed, 42u);
    EXPECT_EQ(inv.config.grid_size, 16);
    EXPECT_FALSE(inv.config.exact_mode);
}

TEST(Parse, flags_before_and_after_subcommand) {
    const Invocation a = parse_invocation({"--epsilon", "0.1", "sweep-grid", "--eta", "0.3", "--exact-mode", "true"});
    EXPECT_EQ(a.subcommand, "sweep-grid");
    EXPECT_EQ(a.config.epsilon, 0.1);
    EXPECT_EQ(a.config.eta, 0.3);
    EXPECT_TRUE(a.config.exact_mode);
}

TEST(Parse, flag_overrides_file) {
    TempFile file("# settings\nepsilon = 0.2\neta=0.9   # trailing\n\nseed = 7\n");
    const Invocation inv = parse_invocation({"--config", file.path(), "--epsilon", "0.3", "sweep-states"});
    EXPECT_EQ(inv.config.epsilon, 0.3);
    EXPECT_EQ(inv.config.eta, 0.9);
    EXPECT_EQ(inv.config.seed, 7u);
}

TEST(Parse, file_unknown_key_is_rejected) {
    TempFile file("epsilonn = 0.2\n");
    try {
        parse_invocation({"--config", file.path(), "verify"});
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("epsilonn"), std::string::npos);
    }
}

TEST(Parse, out_of_range_names_field) {
    try {
        parse_invocation({"verify", "--epsilon", "1.5"});
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_EQ(std::string(e.what()), "epsilon: must be in [0, 1], got 1.5");
    }
    EXPECT_THROW(parse_invocation({"verify", "--pbs-leakage", "0.02"}), ConfigError);
    EXPECT_THROW(parse_invocation({"verify", "--detector-efficiency", "0"}), ConfigError);
    EXPECT_THROW(parse_invocation({"verify", "--counts-per-basis", "99"}), ConfigError);
    EXPECT_THROW(parse_invocation({"verify", "--photons-per-setting", "0"}), ConfigError);
    EXPECT_THROW(parse_invocation({"verify", "--grid-size", "1"}), ConfigError);
    EXPECT_THROW(parse_invocation({"verify", "--epsilon", "abc"}), ConfigError);
    EXPECT_THROW(parse_invocation({"verify", "--output-format", "xml"}), ConfigError);
    EXPECT_THROW(parse_invocation({}), ConfigError);
    EXPECT_THROW(parse_invocation({"frobnicate"}), ConfigError);
}

TEST(Run, bad_epsilon_exits_1) {
    const Outcome3 r = invoke({"verify", "--epsilon", "1.5"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("epsilon"), std::string::npos);
    EXPECT_TRUE(r.out.empty());
}

TEST(Run, verify_exits_0_with_json) {
    const Outcome3 r = invoke({"verify", "--photons-per-setting", "10000"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto doc = io::json::parse(r.out);
    EXPECT_EQ(doc["verdict"], "PASS");
    EXPECT_EQ(doc["metadata"]["seed"], 42);
    EXPECT_EQ(doc["metadata"]["version"], "1.0.0");
    for (const auto &c : doc["checks"]) {
        EXPECT_EQ(c["verdict"], "PASS") << c["name"];
    }
}

TEST(Run, mutated_verify_exits_2) {
    const Outcome3 r = invoke({"verify", "--photons-per-setting", "10000", "--mutate-reversal", "true"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("reversal_exactness"), std::string::npos);
    EXPECT_EQ(io::json::parse(r.out)["verdict"], "FAIL");
}

TEST(Run, verify_csv_when_requested) {
    const Outcome3 r = invoke({"verify", "--photons-per-setting", "10000", "--output-format", "csv"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(lines_of(r.out).front(), "check,verdict,deviation,tolerance");
}

TEST(Run, cross_section_exact) {
    const Outcome3 r = invoke({"cross-section", "--exact-mode", "true"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = lines_of(r.out);
    ASSERT_EQ(lines.size(), 17u);
    EXPECT_EQ(lines[0], "eta,six_gmax,prev,sum");
    EXPECT_EQ(lines[1], "0.000000000,3.000000000,1.000000000,4.000000000");
    for (size_t k = 1; k < lines.size(); ++k) {
        EXPECT_EQ(lines[k].substr(lines[k].rfind(',') + 1), "4.000000000") << lines[k];
    }
}

TEST(Run, sweep_grid_round_trip) {
    const Outcome3 r = invoke({"sweep-grid", "--photons-per-setting", "2000"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = lines_of(r.out);
    ASSERT_EQ(lines.size(), 257u);
    EXPECT_EQ(lines[0], io::kGridHeader);
    for (size_t k = 1; k < lines.size(); ++k) {
        const auto v = split_numbers(lines[k]);
        ASSERT_EQ(v.size(), 9u);
        // Inputs are printed to nine decimals, so recomputation carries ~1e-9 error.
        EXPECT_NEAR(v[2], (3.0 + std::abs(v[1] - v[0])) / 6.0, 5e-9);
        EXPECT_NEAR(v[3], 1.0 - v[0] - v[1] + 2.0 * v[0] * v[1], 5e-9);
        EXPECT_NEAR(v[4], 6.0 * v[2] + v[3], 1e-8);
        EXPECT_EQ(v[8], v[0] == v[1] && v[0] != 0.0 && v[0] != 1.0 ? 1.0 : 0.0);
    }
}

TEST(Run, sweep_states_json) {
    const Outcome3 r = invoke({"sweep-states", "--output-format", "json", "--exact-mode", "true"});
    ASSERT_EQ(r.code, 0);
    const auto doc = io::json::parse(r.out);
    ASSERT_EQ(doc["rows"].size(), 51u);
    EXPECT_EQ(doc["metadata"]["product"], "states");
    EXPECT_NEAR(doc["rows"][25]["gain_analytic"].get<double>(), 0.5, 1e-12);
}

TEST(Run, reversal_fidelity_csv) {
    const Outcome3 r = invoke({"reversal-fidelity", "--exact-mode", "true"});
    ASSERT_EQ(r.code, 0);
    const auto lines = lines_of(r.out);
    ASSERT_EQ(lines.size(), 52u);
    EXPECT_EQ(lines[0], "alpha,fidelity,low_stats_flag");
    EXPECT_EQ(lines[1], "0.000000000,1.000000000,0");
}

TEST(Run, output_path_and_unwritable_path) {
    const std::string path = (std::filesystem::temp_directory_path() / "wmtrade_cli_out.csv").string();
    const Outcome3 ok = invoke({"cross-section", "--output-path", path});
    EXPECT_EQ(ok.code, 0);
    EXPECT_TRUE(ok.out.empty());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, io::kCrossSectionHeader);
    std::remove(path.c_str());

    const Outcome3 bad = invoke({"cross-section", "--output-path", "/nonexistent-dir/x.csv"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("output_path"), std::string::npos);
}

TEST(Run, help_exits_0) {
    const Outcome3 r = invoke({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("verify"), std::string::npos);
}
