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


#include "bqaoa/mapper.hpp"

#include <algorithm>
#include <functional>

#include "bqaoa/errors.hpp"

namespace bqaoa::mapper {

using device::GateFlavor;

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::EcrOnly:
      return "ecr";
    case Strategy::DirectOnly:
      return "direct";
    case Strategy::Global:
      return "global";
    case Strategy::Bipotent:
      return "bipotent";
  }
  return "?";
}

Strategy parse_strategy(std::string_view s) {
  for (Strategy t : all_strategies()) {
    if (to_string(t) == s) return t;
  }
  throw ConfigError("strategy must be ecr|direct|global|bipotent, got \"" +
                    std::string(s) + "\"");
}

const std::vector<Strategy>& all_strategies() {
  static const std::vector<Strategy> all = {
      Strategy::EcrOnly, Strategy::DirectOnly, Strategy::Global,
      Strategy::Bipotent};
  return all;
}

std::vector<Chain> enumerate_chains(const device::DeviceModel& dev, int k,
                                    std::optional<GateFlavor> flavor_filter) {
  const int n = dev.num_qubits();
  std::vector<Chain> out;
  if (k < 1 || k > n) return out;
  if (k == 1) {
    for (int q = 0; q < n; ++q) out.push_back({q});
    return out;
  }
  Chain path;
  std::vector<bool> used(n, false);
  std::function<void(int)> extend = [&](int v) {
    path.push_back(v);
    used[v] = true;
    if (static_cast<int>(path.size()) == k) {
      if (path.front() < path.back()) out.push_back(path);
    } else {
      for (int w : dev.neighbors(v)) {
        if (used[w]) continue;
        if (flavor_filter && dev.find_edge(v, w)->flavor != *flavor_filter) {
          continue;
        }
        extend(w);
      }
    }
    used[v] = false;
    path.pop_back();
  };
  for (int v = 0; v < n; ++v) extend(v);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GateFlavor> link_flavors(const device::DeviceModel& dev,
                                     const Chain& chain) {
  std::vector<GateFlavor> f;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const auto* e = dev.find_edge(chain[i], chain[i + 1]);
    if (e == nullptr) {
      throw MissingEdgeError("chain link " + std::to_string(chain[i]) + "-" +
                             std::to_string(chain[i + 1]) + " is not an edge");
    }
    f.push_back(e->flavor);
  }
  return f;
}

double fidelity_score(const device::DeviceModel& dev, const Chain& chain,
                      const circuit::ScheduledCircuit& lowered) {
  (void)chain;
  double f = 1.0;
  for (double e : lowered.error) f *= 1.0 - e;
  for (const auto& g : lowered.circuit.gates) {
    if (g.kind == circuit::GateKind::Measure) {
      f *= 1.0 - dev.qubit(g.qubits[0]).readout_error;
    }
  }
  return f;
}

Candidate evaluate(const device::DeviceModel& dev, const Chain& chain,
                   const circuit::CircuitIR& benchmark, lower::OptLevel opt) {
  const auto lc = lower::lower_circuit(benchmark, chain, dev, opt);
  return {chain, fidelity_score(dev, chain, lc.scheduled),
          lc.scheduled.total_duration_ns, lc.scheduled.cx_count};
}

namespace {

struct Means {
  double sx_error = 0.0;
  double cx_error = 0.0;
};

Means device_means(const device::DeviceModel& dev) {
  Means m;
  for (const auto& q : dev.qubits()) m.sx_error += q.sx_error;
  m.sx_error /= static_cast<double>(dev.num_qubits());
  for (const auto& e : dev.edges()) m.cx_error += e.cx_error;
  if (!dev.edges().empty()) m.cx_error /= static_cast<double>(dev.edges().size());
  return m;
}

bool qubits_below(const device::DeviceModel& dev, const Chain& c, double mean) {
  return std::all_of(c.begin(), c.end(),
                     [&](int q) { return dev.qubit(q).sx_error < mean; });
}

bool links_below(const device::DeviceModel& dev, const Chain& c, double mean) {
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (!(dev.find_edge(c[i], c[i + 1])->cx_error < mean)) return false;
  }
  return true;
}

bool mixed(const device::DeviceModel& dev, const Chain& c) {
  const auto f = link_flavors(dev, c);
  const bool ecr = std::count(f.begin(), f.end(), GateFlavor::EcrCx) > 0;
  const bool direct = std::count(f.begin(), f.end(), GateFlavor::DirectCx) > 0;
  return ecr && direct;
}

constexpr double kTieTol = 1e-12;

}  // namespace

bool bipotent_admissible(const device::DeviceModel& dev, const Chain& chain) {
  const Means m = device_means(dev);
  return qubits_below(dev, chain, m.sx_error) &&
         links_below(dev, chain, m.cx_error) && mixed(dev, chain);
}

ChainSelection select(const device::DeviceModel& dev, int k, Strategy strategy,
                      const circuit::CircuitIR& benchmark, lower::OptLevel opt) {
  if (benchmark.num_qubits != k) {
    throw LengthError("benchmark circuit has " +
                      std::to_string(benchmark.num_qubits) +
                      " wires, expected " + std::to_string(k));
  }
  ChainSelection sel;
  sel.strategy = strategy;
  std::optional<GateFlavor> filter;
  if (strategy == Strategy::EcrOnly) {
    filter = GateFlavor::EcrCx;
    sel.constraints_applied.push_back("links: ecr only");
  } else if (strategy == Strategy::DirectOnly) {
    filter = GateFlavor::DirectCx;
    sel.constraints_applied.push_back("links: direct only");
  }
  std::vector<Chain> chains = enumerate_chains(dev, k, filter);
  const std::string what = "no " + std::to_string(k) + "-qubit chain";
  if (chains.empty()) {
    throw NoChainError(what + (filter ? " with " +
                                            std::string(device::to_string(*filter)) +
                                            "-only links"
                                      : std::string(" in the coupling graph")));
  }
  if (strategy == Strategy::Bipotent) {
    const Means m = device_means(dev);
    auto keep = [&](const std::string& name, auto pred) {
      sel.constraints_applied.push_back(name);
      std::erase_if(chains, [&](const Chain& c) { return !pred(c); });
      if (chains.empty()) throw NoChainError(what + " satisfies " + name);
    };
    keep("qubits: sx_error below device mean",
         [&](const Chain& c) { return qubits_below(dev, c, m.sx_error); });
    keep("links: cx_error below device mean",
         [&](const Chain& c) { return links_below(dev, c, m.cx_error); });
    keep("links: at least one ecr and one direct",
         [&](const Chain& c) { return mixed(dev, c); });
    sel.constraints_applied.push_back("objective: min duration");
  } else {
    sel.constraints_applied.push_back("objective: max fidelity");
  }

  std::optional<Candidate> best;
  for (const Chain& c : chains) {
    Candidate cand = evaluate(dev, c, benchmark, opt);
    if (!best) {
      best = std::move(cand);
      continue;
    }
    bool wins;
    if (strategy == Strategy::Bipotent) {
      const double dd = cand.duration_ns - best->duration_ns;
      wins = dd < -kTieTol * std::max(1.0, best->duration_ns) ||
             (std::abs(dd) <= kTieTol * std::max(1.0, best->duration_ns) &&
              cand.fidelity_score > best->fidelity_score + kTieTol);
    } else {
      wins = cand.fidelity_score > best->fidelity_score + kTieTol;
    }
    if (wins) best = std::move(cand);
  }
  sel.chain = best->chain;
  sel.fidelity_score = best->fidelity_score;
  sel.duration_ns = best->duration_ns;
  sel.cx_count = best->cx_count;
  sel.flavors = link_flavors(dev, sel.chain);
  return sel;
}

nlohmann::json selection_to_json(const ChainSelection& s) {
  nlohmann::json flavors = nlohmann::json::array();
  for (auto f : s.flavors) flavors.push_back(device::to_string(f));
  return {{"chain", s.chain},
          {"strategy", to_string(s.strategy)},
          {"fidelity_score", s.fidelity_score},
          {"duration_ns", s.duration_ns},
          {"cx_count", s.cx_count},
          {"flavors", flavors},
          {"constraints_applied", s.constraints_applied}};
}

}  // namespace bqaoa::mapper
