// Copyright 2026 The bqaoa Authors
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


#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "bqaoa/circuit.hpp"
#include "bqaoa/cli.hpp"
#include "bqaoa/errors.hpp"
#include "bqaoa/qaoa.hpp"

namespace bqaoa::cli {
namespace {

using json = nlohmann::json;
const std::filesystem::path kData = BQAOA_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string dev(const char* name) { return (kData / "devices" / name).string(); }
std::string prob(const char* name) { return (kData / "problems" / name).string(); }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& s) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

TEST(Cli, SummarizeTableOneFile) {
  const auto r = run_cli({"device", "summarize", "--device", dev("table1_edges.json")});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["edges"]["ecr"]["cx_error_pct"].get<double>(), 0.83, 0.005);
  EXPECT_NEAR(j["edges"]["direct"]["cx_duration_ns"].get<double>(), 256.89, 0.005);
  const auto c = run_cli({"device", "summarize", "--device", dev("table1_edges.json"),
                          "--format", "csv"});
  ASSERT_EQ(c.code, kOk);
  EXPECT_EQ(parse_csv(c.out)[0][0], "flavor");
}

TEST(Cli, EstimateReferenceDirectZz) {
  const auto file = temp_file("bqaoa_zz.txt", "qubits 2 clbits 0\nZZ 0,1 theta=0.7\n");
  const auto r = run_cli({"estimate", "--device", dev("ehningen_fragment.json"), "--circuit",
                          file, "--chain", "1,4"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["gates"][0]["duration_ns"].get<double>(), 490.0);
  EXPECT_DOUBLE_EQ(j["duration_ns"].get<double>(), 490.0);
  EXPECT_EQ(j["cx_count"], 2);
}

TEST(Cli, EstimateEmptyCircuitHasZeroDuration) {
  const auto file = temp_file("bqaoa_empty.txt", "qubits 2 clbits 0\n");
  const auto r = run_cli({"estimate", "--device", dev("ehningen_fragment.json"), "--circuit",
                          file, "--chain", "1,0"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_DOUBLE_EQ(json::parse(r.out)["duration_ns"].get<double>(), 0.0);
}

TEST(Cli, EstimateTotalMatchesIndependentCriticalPath) {
  const auto r = run_cli({"estimate", "--device", dev("synthetic8.json"), "--problem",
                          prob("k5_maxcut.json"), "--strategy", "bipotent", "--opt",
                          "zzswapopt", "--gammas", "0.4", "--betas", "0.3"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = json::parse(r.out);
  std::istringstream text(j["hardware"]["text"].get<std::string>());
  const auto hw = circuit::parse_text(text);
  const auto dur = j["hardware"]["duration_ns"].get<std::vector<double>>();
  ASSERT_EQ(hw.gates.size(), dur.size());
  std::map<int, double> ready;
  double end = 0.0;
  for (std::size_t i = 0; i < hw.gates.size(); ++i) {
    double start = 0.0;
    for (int q : hw.gates[i].qubits) start = std::max(start, ready[q]);
    for (int q : hw.gates[i].qubits) ready[q] = start + dur[i];
    end = std::max(end, start + dur[i]);
  }
  EXPECT_NEAR(j["duration_ns"].get<double>(), end, 1e-9);
}

TEST(Cli, BuildThenLowerRoundTrip) {
  const auto b = run_cli({"circuit", "build", "--problem", prob("k3_maxcut.json"), "--gammas",
                          "0.3", "--betas", "0.2"});
  ASSERT_EQ(b.code, kOk) << b.err;
  const auto file = temp_file("bqaoa_k3.txt", b.out);
  const auto from_file = run_cli({"circuit", "lower", "--device", dev("synthetic5.json"),
                                  "--circuit", file, "--chain", "0,1,2"});
  const auto from_problem = run_cli({"circuit", "lower", "--device", dev("synthetic5.json"),
                                     "--problem", prob("k3_maxcut.json"), "--gammas", "0.3",
                                     "--betas", "0.2", "--chain", "0,1,2"});
  ASSERT_EQ(from_file.code, kOk) << from_file.err;
  EXPECT_EQ(from_file.out, from_problem.out);
  const auto j = run_cli({"circuit", "build", "--problem", prob("k3_maxcut.json"), "--gammas",
                          "0.3", "--betas", "0.2", "--format", "json"});
  EXPECT_EQ(json::parse(j.out)["depth"], 2 + (3 + 2) * 1);
}

TEST(Cli, ChainsSelectJsonShape) {
  const auto r = run_cli({"chains", "select", "--device", dev("synthetic8.json"), "--problem",
                          prob("k5_maxcut.json"), "--strategy", "ecr"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = json::parse(r.out);
  for (const char* k : {"chain", "strategy", "fidelity_score", "duration_ns", "flavors",
                        "constraints_applied"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  for (const auto& f : j["flavors"]) EXPECT_EQ(f, "ecr");
}

TEST(Cli, SimulateFormatsAndSeed) {
  const std::vector<std::string> base = {"simulate", "--device", dev("synthetic5.json"),
                                         "--problem", prob("k3_maxcut.json"), "--chain", "0,1,2",
                                         "--gammas", "0.5", "--betas", "0.4", "--shots", "2000"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return run_cli(a);
  };
  const auto a = with({"--seed", "8"});
  const auto b = with({"--seed", "8"});
  const auto c = with({"--seed", "9"});
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  const auto j = json::parse(a.out);
  std::int64_t total = 0;
  for (const auto& [k, v] : j["counts"].items()) {
    EXPECT_EQ(k.size(), 3U);
    total += v.get<std::int64_t>();
  }
  EXPECT_EQ(total, 2000);
  const auto csv = with({"--seed", "8", "--format", "csv"});
  EXPECT_EQ(parse_csv(csv.out).size(), 1U + 8U);

  ::setenv("BQAOA_SEED", "8", 1);
  const auto env = with({});
  ::unsetenv("BQAOA_SEED");
  EXPECT_EQ(env.out, a.out);
}

TEST(Cli, OptimizeRangeRows) {
  const auto r = run_cli({"optimize", "--problem", prob("k5_maxcut.json"), "--p", "1..2",
                          "--format", "csv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3U);
  EXPECT_GE(std::stod(rows[1][4]), 0.91);
  EXPECT_EQ(rows[1].back(), "nelder-mead (cobyla substitute)");
}

TEST(Cli, BenchmarkDeterministicAndComplete) {
  const std::vector<std::string> args = {"benchmark", "--device", dev("synthetic5.json"),
                                         "--problem", prob("k5_maxcut.json"), "--p", "1..3",
                                         "--strategies", "all", "--seed", "21"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto rows = parse_csv(a.out);
  EXPECT_GE(rows.size(), 1U + 12U);
  EXPECT_EQ(rows[0].size(), 16U);
}

TEST(Cli, BenchmarkZeroNoiseTracksIdealAr) {
  const auto r = run_cli({"benchmark", "--device", dev("synthetic8.json"), "--problem",
                          prob("k3_maxcut.json"), "--p", "1..2", "--strategies", "global",
                          "--opt-levels", "default", "--noise-scale", "0", "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto problem = qaoa::load_problem(prob("k3_maxcut.json"));
  for (const auto& row : json::parse(r.out)) {
    const qaoa::ParamVector params{row["gammas"].get<std::vector<double>>(),
                                   row["betas"].get<std::vector<double>>()};
    const double ideal = qaoa::metrics(problem.ising,
                                       qaoa::ideal_distribution(problem.ising, params)).ar;
    // 50000 shots; AR of a 0..2 cut count has sigma well below 0.005.
    EXPECT_NEAR(row["ar"].get<double>(), ideal, 0.01);
  }
}

TEST(Cli, QptNoiselessAndRepetitionOrdering) {
  const auto clean = run_cli({"qpt", "--device", dev("ehningen_fragment.json"), "--gate",
                              "zz_swap", "--edge", "1,0", "--noise-scale", "0",
                              "--num-angles", "3", "--format", "json"});
  ASSERT_EQ(clean.code, kOk) << clean.err;
  for (const auto& row : json::parse(clean.out)) {
    EXPECT_LT(row["infidelity"].get<double>(), 1e-9);
  }
  const auto noisy = run_cli({"qpt", "--device", dev("ehningen_fragment.json"), "--gate",
                              "zz", "--edge", "1,0", "--repetitions", "1,10",
                              "--num-angles", "5", "--format", "json"});
  ASSERT_EQ(noisy.code, kOk) << noisy.err;
  std::map<std::tuple<std::string, double, int>, double> inf;
  for (const auto& row : json::parse(noisy.out)) {
    inf[{row["variant"], row["theta"], row["repetitions"]}] = row["infidelity"];
  }
  for (const auto& [key, v] : inf) {
    const auto& [variant, theta, reps] = key;
    if (reps == 1) EXPECT_GE(inf.at({variant, theta, 10}), v);
    if (variant == "zzopt-CT") EXPECT_LE(v, inf.at({"default-CT", theta, reps}));
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"--help"}).code, kOk);
  EXPECT_EQ(run_cli({}).code, kConfig);
  EXPECT_EQ(run_cli({"benchmark", "--device", dev("synthetic5.json")}).code, kConfig);
  EXPECT_EQ(run_cli({"device", "summarize", "--device", "/nonexistent.json"}).code, kConfig);
  EXPECT_EQ(run_cli({"benchmark", "--device", dev("synthetic5.json"), "--problem",
                     prob("k5_maxcut.json"), "--p", "3..1"})
                .code,
            kConfig);
  EXPECT_EQ(run_cli({"chains", "select", "--device", dev("synthetic5.json"), "--problem",
                     prob("k5_maxcut.json"), "--strategy", "fastest"})
                .code,
            kConfig);
  EXPECT_EQ(run_cli({"simulate", "--device", dev("synthetic5.json"), "--problem",
                     prob("k3_maxcut.json"), "--seed", "abc"})
                .code,
            kConfig);
  const auto inf = run_cli({"chains", "select", "--device", dev("synthetic5.json"),
                            "--problem", prob("k5_maxcut.json"), "--strategy", "bipotent"});
  EXPECT_EQ(inf.code, kInfeasible);
  EXPECT_NE(inf.err.find("below device mean"), std::string::npos);
  EXPECT_EQ(run_cli({"qpt", "--device", dev("ehningen_fragment.json"), "--edge", "0,4"}).code,
            kConfig);
}

TEST(Cli, ParseRange) {
  EXPECT_EQ(parse_range("1..3"), (std::pair{1, 3}));
  EXPECT_EQ(parse_range("2"), (std::pair{2, 2}));
  EXPECT_THROW(parse_range("0..2"), ConfigError);
  EXPECT_THROW(parse_range("a..b"), ConfigError);
}

}  // namespace
}  // namespace bqaoa::cli
