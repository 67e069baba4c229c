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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bqaoa/circuit.hpp"

namespace bqaoa::qaoa {

/// Bits of a computational basis state; bit q is logical qubit q.
using Bits = std::uint64_t;

/// Spin of qubit q in `z`: +1 for bit 0, -1 for bit 1.
inline int spin(Bits z, int q) { return ((z >> q) & 1U) ? -1 : 1; }

enum class Sense { Minimize, Maximize };

struct PortfolioInstance {
  std::vector<double> mu;
  std::vector<std::vector<double>> sigma;
  double q = 0.0;
  int B = 1;
  double A = 0.0;
  double lam = 1.0;

  int n() const { return static_cast<int>(mu.size()); }
};

struct MaxCutInstance {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

/// C(z) = sum_{i<j} J_ij s_i s_j + sum_i h_i s_i + constant.
struct IsingProblem {
  int n = 0;
  std::map<std::pair<int, int>, double> J;  // keys i < j
  std::vector<double> h;
  double constant = 0.0;
  /// PortOpt budget: feasible outcomes select exactly this many assets.
  /// An asset is selected when its qubit reads 0 (spin +1).
  std::optional<int> budget;
  Sense sense = Sense::Minimize;

  double coupling(int a, int b) const;
  bool feasible(Bits z) const;
};

struct ParamVector {
  std::vector<double> gammas;
  std::vector<double> betas;

  int p() const { return static_cast<int>(gammas.size()); }
  void validate() const;
};

IsingProblem encode_portopt(const PortfolioInstance& inst);
IsingProblem encode_maxcut(const MaxCutInstance& inst);

struct SwapNetwork {
  circuit::CircuitIR circuit;
  /// wire_of[a] is the wire holding logical qubit a before measurement.
  std::vector<int> wire_of;
};

/// Linear-topology swap-network QAOA circuit (logical wires 0..n-1).
/// Measure on wire w writes the classical bit of the logical qubit resident
/// there, so counts read directly as logical bitstrings.
SwapNetwork build_swap_network(const IsingProblem& prob,
                               const ParamVector& params);

double cost_of_bitstring(const IsingProblem& prob, Bits z);
/// `z` printed qubit 0 rightmost, length n.
double cost_of_bitstring(const IsingProblem& prob, const std::string& z);

struct Optimum {
  double value = 0.0;
  std::vector<Bits> argopt;
};

/// Exhaustive optimum over feasible bitstrings (n <= 20).
Optimum optimum(const IsingProblem& prob, Sense sense);

struct Metrics {
  double ar = 0.0;
  double sp = 0.0;
  double feasible_fraction = 0.0;
  double mean_cost = 0.0;
  double optimal_cost = 0.0;
  /// False when post-selected outcomes carry costs of both signs; AR is then
  /// only meaningful alongside mean_cost and optimal_cost.
  bool sign_consistent = true;
};

/// `dist` is a probability vector over all 2^n bitstrings.
Metrics metrics(const IsingProblem& prob, const std::vector<double>& dist,
                Sense sense);
Metrics metrics(const IsingProblem& prob, const std::vector<double>& dist);

/// Dense distribution from counts keyed by bitstring (qubit 0 rightmost).
std::vector<double> distribution_from_counts(
    const std::map<std::string, double>& counts, int n);

/// Exact output distribution of the noiseless swap-network circuit over
/// logical bitstrings, via statevector simulation.
std::vector<double> ideal_distribution(const IsingProblem& prob,
                                       const ParamVector& params);

struct Problem {
  std::string id;
  std::string type;  // "portopt" | "maxcut"
  IsingProblem ising;
  std::optional<PortfolioInstance> portfolio;
  std::optional<MaxCutInstance> maxcut;
};

Problem problem_from_json(const nlohmann::json& j, std::string id);
Problem load_problem(const std::filesystem::path& path);

}  // namespace bqaoa::qaoa
