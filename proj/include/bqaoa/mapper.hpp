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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bqaoa/circuit.hpp"
#include "bqaoa/device.hpp"
#include "bqaoa/lower.hpp"

namespace bqaoa::mapper {

enum class Strategy { EcrOnly, DirectOnly, Global, Bipotent };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view s);
const std::vector<Strategy>& all_strategies();

using Chain = std::vector<int>;

struct ChainSelection {
  Chain chain;
  Strategy strategy = Strategy::Global;
  double fidelity_score = 0.0;
  double duration_ns = 0.0;
  int cx_count = 0;
  std::vector<device::GateFlavor> flavors;  // one per link
  std::vector<std::string> constraints_applied;
};

/// Simple paths of k qubits, each once in canonical orientation (smaller
/// endpoint first), sorted lexicographically. With a filter every link has
/// that flavor.
std::vector<Chain> enumerate_chains(
    const device::DeviceModel& dev, int k,
    std::optional<device::GateFlavor> flavor_filter = std::nullopt);

std::vector<device::GateFlavor> link_flavors(const device::DeviceModel& dev,
                                             const Chain& chain);

/// prod(1 - gate error) * prod(1 - readout error) over measured qubits.
double fidelity_score(const device::DeviceModel& dev, const Chain& chain,
                      const circuit::ScheduledCircuit& lowered);

struct Candidate {
  Chain chain;
  double fidelity_score = 0.0;
  double duration_ns = 0.0;
  int cx_count = 0;
};

/// Lowers `benchmark` (k logical wires) onto `chain` and scores it.
Candidate evaluate(const device::DeviceModel& dev, const Chain& chain,
                   const circuit::CircuitIR& benchmark, lower::OptLevel opt);

/// Bipotent admissibility: every chain qubit has sx_error below the
/// device-wide mean, every link has cx_error below the device-wide mean,
/// and both flavors occur among the links.
bool bipotent_admissible(const device::DeviceModel& dev, const Chain& chain);

/// Chooses a chain for `benchmark`. EcrOnly, DirectOnly and Global maximize
/// the fidelity score; Bipotent minimizes lowered duration among admissible
/// chains, then maximizes fidelity. Remaining ties go to the
/// lexicographically smallest chain. Throws NoChainError naming the
/// constraint that emptied the candidate set.
ChainSelection select(const device::DeviceModel& dev, int k, Strategy strategy,
                      const circuit::CircuitIR& benchmark, lower::OptLevel opt);

nlohmann::json selection_to_json(const ChainSelection& s);

}  // namespace bqaoa::mapper
