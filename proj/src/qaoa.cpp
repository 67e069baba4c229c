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


#include "bqaoa/qaoa.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>

#include "bqaoa/errors.hpp"

namespace bqaoa::qaoa {

using circuit::Gate;
using nlohmann::json;

double IsingProblem::coupling(int a, int b) const {
  if (a > b) std::swap(a, b);
  auto it = J.find({a, b});
  return it == J.end() ? 0.0 : it->second;
}

bool IsingProblem::feasible(Bits z) const {
  if (!budget) return true;
  const int selected = n - std::popcount(z);
  return selected == *budget;
}

void ParamVector::validate() const {
  if (gammas.empty()) throw LengthError("params: p must be >= 1");
  if (gammas.size() != betas.size()) {
    throw LengthError("params: gammas and betas differ in length");
  }
}

IsingProblem encode_portopt(const PortfolioInstance& inst) {
  const int n = inst.n();
  if (n < 1) throw DimensionError("portopt: empty mu");
  if (static_cast<int>(inst.sigma.size()) != n) {
    throw DimensionError("portopt: sigma has " +
                         std::to_string(inst.sigma.size()) + " rows, mu has " +
                         std::to_string(n));
  }
  for (const auto& row : inst.sigma) {
    if (static_cast<int>(row.size()) != n) {
      throw DimensionError("portopt: sigma is not square");
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(inst.sigma[i][j] - inst.sigma[j][i]) > 1e-12) {
        throw ValidationError("portopt: sigma not symmetric at (" +
                              std::to_string(i) + "," + std::to_string(j) +
                              ")");
      }
    }
  }
  if (inst.q < 0.0 || inst.q > 1.0) {
    throw ValidationError("portopt: q outside [0,1]");
  }
  if (inst.B <= 0 || inst.B >= n) {
    throw ValidationError("portopt: budget B must satisfy 0 < B < n");
  }
  if (inst.A < 0.0) throw ValidationError("portopt: A must be >= 0");
  if (inst.lam <= 0.0) throw ValidationError("portopt: lambda must be > 0");

  IsingProblem p;
  p.n = n;
  p.h.assign(n, 0.0);
  p.budget = inst.B;
  p.sense = Sense::Minimize;
  const double half = inst.lam / 2.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      p.J[{i, j}] = half * (inst.q * inst.sigma[i][j] + inst.A);
    }
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += inst.sigma[i][j];
    const double k = half * (inst.A * (2.0 * inst.B - n) +
                             (1.0 - inst.q) * inst.mu[i] - inst.q * row);
    p.h[i] = -k;
  }
  return p;
}

IsingProblem encode_maxcut(const MaxCutInstance& inst) {
  if (inst.n < 1) throw DimensionError("maxcut: n must be >= 1");
  IsingProblem p;
  p.n = inst.n;
  p.h.assign(inst.n, 0.0);
  p.sense = Sense::Maximize;
  for (auto [a, b] : inst.edges) {
    if (a < 0 || b < 0 || a >= inst.n || b >= inst.n) {
      throw IndexError("maxcut: edge endpoint out of range");
    }
    if (a == b) throw ValidationError("maxcut: self-loop on node " +
                                      std::to_string(a));
    if (a > b) std::swap(a, b);
    if (p.J.count({a, b})) {
      throw ValidationError("maxcut: duplicate edge (" + std::to_string(a) +
                            "," + std::to_string(b) + ")");
    }
    p.J[{a, b}] = -0.5;
  }
  p.constant = 0.5 * static_cast<double>(inst.edges.size());
  return p;
}

SwapNetwork build_swap_network(const IsingProblem& prob,
                               const ParamVector& params) {
  params.validate();
  const int n = prob.n;
  if (n < 2) throw DimensionError("swap network needs n >= 2");
  SwapNetwork out;
  out.circuit = circuit::CircuitIR(n, n);
  auto& c = out.circuit;
  std::vector<int> resident(n);
  for (int w = 0; w < n; ++w) resident[w] = w;

  for (int w = 0; w < n; ++w) c.add(Gate::h(w));
  for (int k = 0; k < params.p(); ++k) {
    const double g = params.gammas[k];
    for (int layer = 0; layer < n; ++layer) {
      const bool plain = layer == 0 || layer == n - 1;
      for (int w = layer % 2; w + 1 < n; w += 2) {
        const double theta =
            2.0 * g * prob.coupling(resident[w], resident[w + 1]);
        if (plain) {
          c.add(Gate::zz(w, w + 1, theta));
        } else {
          c.add(Gate::zz_swap(w, w + 1, theta));
          std::swap(resident[w], resident[w + 1]);
        }
      }
    }
    for (int w = 0; w < n; ++w) {
      c.add(Gate::rz(w, 2.0 * g * prob.h[resident[w]]));
    }
    for (int w = 0; w < n; ++w) c.add(Gate::rx(w, 2.0 * params.betas[k]));
  }
  out.wire_of.assign(n, 0);
  for (int w = 0; w < n; ++w) {
    out.wire_of[resident[w]] = w;
    c.add(Gate::measure(w, resident[w]));
  }
  return out;
}

double cost_of_bitstring(const IsingProblem& prob, Bits z) {
  double c = prob.constant;
  for (const auto& [ij, v] : prob.J) {
    c += v * spin(z, ij.first) * spin(z, ij.second);
  }
  for (int i = 0; i < prob.n; ++i) c += prob.h[i] * spin(z, i);
  return c;
}

double cost_of_bitstring(const IsingProblem& prob, const std::string& z) {
  if (static_cast<int>(z.size()) != prob.n) {
    throw LengthError("bitstring length " + std::to_string(z.size()) +
                      " != n = " + std::to_string(prob.n));
  }
  Bits bits = 0;
  for (int q = 0; q < prob.n; ++q) {
    const char ch = z[prob.n - 1 - q];
    if (ch == '1') {
      bits |= Bits{1} << q;
    } else if (ch != '0') {
      throw ValidationError("bitstring must contain only 0 and 1");
    }
  }
  return cost_of_bitstring(prob, bits);
}

namespace {

bool better(double a, double b, Sense s) {
  return s == Sense::Minimize ? a < b : a > b;
}

bool ties(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
}

}  // namespace

Optimum optimum(const IsingProblem& prob, Sense sense) {
  if (prob.n > 20) throw TooLargeError("exhaustive optimum limited to n <= 20");
  Optimum o;
  bool any = false;
  const Bits total = Bits{1} << prob.n;
  for (Bits z = 0; z < total; ++z) {
    if (!prob.feasible(z)) continue;
    const double c = cost_of_bitstring(prob, z);
    if (!any || (better(c, o.value, sense) && !ties(c, o.value))) {
      o.value = c;
      o.argopt.assign(1, z);
      any = true;
    } else if (ties(c, o.value)) {
      o.argopt.push_back(z);
    }
  }
  if (!any) throw NoFeasibleOutcomeError("no feasible bitstring exists");
  return o;
}

Metrics metrics(const IsingProblem& prob, const std::vector<double>& dist,
                Sense sense) {
  const Bits total = Bits{1} << prob.n;
  if (dist.size() != total) {
    throw LengthError("distribution has " + std::to_string(dist.size()) +
                      " entries, expected " + std::to_string(total));
  }
  double norm = 0.0;
  double kept = 0.0;
  for (Bits z = 0; z < total; ++z) {
    norm += dist[z];
    if (prob.feasible(z)) kept += dist[z];
  }
  if (std::abs(norm - 1.0) > 1e-9) {
    throw ValidationError("distribution not normalized (sum " +
                          std::to_string(norm) + ")");
  }
  if (kept <= 0.0) {
    throw NoFeasibleOutcomeError(
        "post-selection on the budget leaves no outcomes");
  }
  const Optimum opt = optimum(prob, sense);
  if (std::abs(opt.value) < 1e-12) {
    throw ZeroOptimumError("optimal cost is 0; AR undefined");
  }
  Metrics m;
  m.feasible_fraction = kept;
  m.optimal_cost = opt.value;
  for (Bits z = 0; z < total; ++z) {
    if (!prob.feasible(z) || dist[z] == 0.0) continue;
    const double c = cost_of_bitstring(prob, z);
    const double w = dist[z] / kept;
    m.mean_cost += w * c;
    if (ties(c, opt.value)) m.sp += w;
    if (c * opt.value < 0.0) m.sign_consistent = false;
  }
  m.ar = m.mean_cost / opt.value;
  return m;
}

Metrics metrics(const IsingProblem& prob, const std::vector<double>& dist) {
  return metrics(prob, dist, prob.sense);
}

std::vector<double> distribution_from_counts(
    const std::map<std::string, double>& counts, int n) {
  std::vector<double> d(std::size_t{1} << n, 0.0);
  double total = 0.0;
  for (const auto& [s, c] : counts) {
    if (static_cast<int>(s.size()) != n) {
      throw LengthError("count key '" + s + "' has wrong length");
    }
    Bits z = 0;
    for (int q = 0; q < n; ++q) {
      if (s[n - 1 - q] == '1') z |= Bits{1} << q;
    }
    d[z] += c;
    total += c;
  }
  if (total <= 0.0) throw ValidationError("counts are empty");
  for (auto& v : d) v /= total;
  return d;
}

std::vector<double> ideal_distribution(const IsingProblem& prob,
                                       const ParamVector& params) {
  const SwapNetwork net = build_swap_network(prob, params);
  const int n = prob.n;
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(Eigen::Index{1} << n, 1);
  psi(0, 0) = 1.0;
  for (const auto& g : net.circuit.gates) {
    if (g.kind == circuit::GateKind::Measure) continue;
    circuit::apply_gate(psi, g);
  }
  std::vector<double> d(std::size_t{1} << n, 0.0);
  for (Bits wires = 0; wires < (Bits{1} << n); ++wires) {
    Bits logical = 0;
    for (int a = 0; a < n; ++a) {
      if ((wires >> net.wire_of[a]) & 1U) logical |= Bits{1} << a;
    }
    d[logical] = std::norm(psi(static_cast<Eigen::Index>(wires), 0));
  }
  return d;
}

Problem problem_from_json(const json& j, std::string id) {
  Problem p;
  p.id = std::move(id);
  try {
    p.type = j.at("type").get<std::string>();
    if (j.contains("id")) p.id = j.at("id").get<std::string>();
    if (p.type == "portopt") {
      PortfolioInstance inst;
      inst.mu = j.at("mu").get<std::vector<double>>();
      inst.sigma = j.at("sigma").get<std::vector<std::vector<double>>>();
      inst.q = j.at("q").get<double>();
      inst.B = j.at("B").get<int>();
      inst.A = j.at("A").get<double>();
      inst.lam = j.at("lambda").get<double>();
      p.ising = encode_portopt(inst);
      p.portfolio = inst;
    } else if (p.type == "maxcut") {
      MaxCutInstance inst;
      inst.n = j.at("n").get<int>();
      for (const auto& e : j.at("edges")) {
        inst.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
      }
      p.ising = encode_maxcut(inst);
      p.maxcut = inst;
    } else {
      throw ValidationError("problem type must be portopt or maxcut, got \"" +
                            p.type + "\"");
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("problem: ") + e.what());
  }
  return p;
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return problem_from_json(j, path.stem().string());
}

}  // namespace bqaoa::qaoa
