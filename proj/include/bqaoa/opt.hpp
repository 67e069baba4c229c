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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bqaoa/device.hpp"
#include "bqaoa/lower.hpp"
#include "bqaoa/mapper.hpp"
#include "bqaoa/qaoa.hpp"

namespace bqaoa::opt {

enum class Method { NelderMead, CoordinateGrid };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

struct OptimizerConfig {
  Method method = Method::NelderMead;
  int max_evals = 20000;
  int initial_grid = 32;        // points per angle axis
  int max_grid_points = 2048;   // seeded subsample cap above p = 1
  int restarts = 3;             // refinements from the best distinct seeds
  std::uint64_t seed = 0;
  double tolerance = 1e-9;      // objective spread that ends a refinement

  void validate() const;
};

/// Name recorded in results files.
std::string optimizer_label(const OptimizerConfig& cfg);

/// Objective to maximize, normally the approximation ratio.
using Evaluator = std::function<double(const qaoa::ParamVector&)>;

struct TraceEntry {
  double objective = 0.0;
  double best = 0.0;  // best so far, non-decreasing
};

struct OptimizeResult {
  qaoa::ParamVector params;
  double objective = 0.0;
  std::vector<TraceEntry> trace;
  bool budget_exhausted = false;
};

/// Upper bound of the gamma search interval: pi / (2 max |coefficient|),
/// which is pi for unit-weight MaxCut. Beta ranges over [0, pi/2).
double gamma_bound(const qaoa::IsingProblem& prob);

/// Grid search over the angle box seeds a local refinement. Above p = 1 the
/// grid is a seeded subsample and `warm_start` (a p-1 optimum, extended by a
/// zero layer, a repeated last layer and an interpolated schedule) joins the
/// seeds. Ties keep the earliest point.
OptimizeResult optimize_params(
    const qaoa::IsingProblem& prob, int p, const Evaluator& evaluator,
    const OptimizerConfig& cfg,
    const std::optional<qaoa::ParamVector>& warm_start = std::nullopt);

/// Noiseless training for p = 1..p_max, each layer count warm-started from
/// the previous optimum. Entry i holds p = i + 1. Grid subsample seeds derive
/// from `seed` and the problem id.
std::vector<OptimizeResult> train_layers(const qaoa::Problem& problem, int p_max,
                                         const OptimizerConfig& cfg,
                                         std::uint64_t seed);

/// Noiseless AR of the swap-network circuit.
Evaluator ideal_evaluator(const qaoa::IsingProblem& prob);

struct NoisyResult {
  qaoa::Metrics metrics;
  double duration_ns = 0.0;
  int cx_count = 0;
  double fidelity_score = 0.0;
  std::vector<double> distribution;   // over logical bitstrings
  std::vector<std::int64_t> counts;    // raw counts, same indexing
};

struct NoisySettings {
  double noise_scale = 1.0;
  std::int64_t shots = 50000;
  std::uint64_t seed = 0;
  bool mitigate = true;
};

/// Builds, lowers and simulates the circuit on `chain`, samples `shots`
/// with readout error and, if requested, mitigates readout.
NoisyResult evaluate_noisy(const device::DeviceModel& dev,
                           const std::vector<int>& chain,
                           const qaoa::IsingProblem& prob,
                           const qaoa::ParamVector& params, lower::OptLevel opt,
                           const NoisySettings& settings);

struct BenchmarkConfig {
  std::vector<mapper::Strategy> strategies;
  std::vector<lower::OptLevel> opt_levels;
  int p_min = 1;
  int p_max = 1;
  OptimizerConfig optimizer;
  NoisySettings noisy;
  int jobs = 1;

  void validate() const;
};

struct BenchmarkRun {
  std::string problem;
  mapper::Strategy strategy = mapper::Strategy::Global;
  lower::OptLevel opt_level = lower::OptLevel::Default;
  int p = 1;
  std::vector<int> chain;
  qaoa::ParamVector params;
  bool feasible = true;
  std::string reason;  // set when infeasible
  double ar = 0.0;
  double sp = 0.0;
  double duration_ns = 0.0;
  int cx_count = 0;
  double fidelity_score = 0.0;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
  std::string optimizer;
};

/// Seed of one benchmark cell, mixed from the master seed and the cell key.
std::uint64_t cell_seed(std::uint64_t master, const std::string& key);

/// Sweeps strategy x opt level x p. Parameters are trained noiselessly per
/// p (warm-started from p-1) and shared by every cell of that p. Each
/// strategy picks one chain, scored on the p = 1 circuit, and keeps it
/// across opt levels and p. A strategy without an admissible chain yields
/// infeasible rows. Rows are sorted by (strategy, opt level, p).
std::vector<BenchmarkRun> run_benchmark(const device::DeviceModel& dev,
                                        const qaoa::Problem& problem,
                                        const BenchmarkConfig& cfg);

/// Results CSV with a header row; reals print with 10 significant digits.
void write_csv(std::ostream& out, const std::vector<BenchmarkRun>& runs);

/// One CSV per panel (ar, sp, duration_ns, cx_count): a row per p and a
/// column per strategy/opt-level series.
void write_panels(const std::filesystem::path& dir,
                  const std::vector<BenchmarkRun>& runs);

}  // namespace bqaoa::opt
