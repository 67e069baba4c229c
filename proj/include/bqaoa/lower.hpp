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

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bqaoa/circuit.hpp"
#include "bqaoa/device.hpp"

namespace bqaoa::lower {

enum class OptLevel { Default, ZzOpt, ZzSwapOpt };

/// CT: the CX control (or CR drive) sits on the edge's hardware-native
/// control. TC: roles reversed.
enum class Polarity { CT, TC };

std::string_view to_string(OptLevel o);
OptLevel parse_opt_level(std::string_view s);
std::string_view to_string(Polarity p);

/// Decomposition families.
enum class Form {
  NativeCx,       // one CX instruction
  CxSandwich,     // CX, RZ(theta), CX
  ThreeCx,        // CX, RZ(theta), CX reversed, CX
  SwapThreeCx,    // CX, CX reversed, CX
  HConjugatedCx,  // H, CX, H
  PulseScaledZz,  // H, RZX(theta), H with a stretched cross-resonance
  CzPulse,        // one calibrated CZ pulse
  CzBasedZzSwap,  // three CZ pulses with absorbed Hadamards
};

std::string_view to_string(Form f);

struct LoweringRule {
  circuit::GateKind target;
  device::GateFlavor flavor;
  OptLevel opt;
  Polarity polarity;
  Form form;
  int cx_cost;
};

/// Rule chosen for a two-qubit target on an edge of `flavor`.
LoweringRule rule_for(circuit::GateKind target, device::GateFlavor flavor,
                      OptLevel opt, Polarity polarity);

/// Every (target, flavor, opt, polarity) combination for the undirected
/// targets ZZ, ZzSwap, CZ, Swap.
std::vector<LoweringRule> rule_table();

/// Hardware gates implementing one logical gate. Qubits are physical.
struct Expansion {
  LoweringRule rule;
  int a = 0;  // logical gate qubits[0]
  int b = 0;  // logical gate qubits[1]
  std::vector<circuit::Gate> gates;
  std::vector<double> duration_ns;
  std::vector<double> error;
  double span_ns = 0.0;  // ASAP span of the gates in isolation
  int cx_count = 0;

  /// The gates on local qubits {a -> 0, b -> 1}.
  circuit::CircuitIR local_circuit() const;
};

/// Lowers the two-qubit gate `target(theta)` on physical (a, b). `a` and
/// `b` must share a device edge. For CX, (a, b) is (control, target) and the
/// polarity argument is ignored.
Expansion expand(circuit::GateKind target, double theta, int a, int b,
                 const device::DeviceModel& dev, OptLevel opt,
                 Polarity polarity = Polarity::CT);

/// Total duration of the pulse-scaled ZZ on an ECR edge: overhead plus the
/// cross-resonance stretch for |theta| wrapped into (-pi, pi], capped at the
/// default CX-RZ-CX duration.
double zz_opt_duration(double theta, const device::EdgeCalibration& edge,
                       const device::DeviceModel& dev);

struct PolarityVariants {
  Expansion ct;
  Expansion tc;
  double duration_ct = 0.0;
  double duration_tc = 0.0;
};

PolarityVariants polarity_variants(circuit::GateKind target, double theta,
                                   const device::EdgeCalibration& edge,
                                   const device::DeviceModel& dev,
                                   OptLevel opt = OptLevel::Default);

/// 1 - prod(1 - e) over the expansion's hardware gates.
double effective_error(const Expansion& e);

struct GateReport {
  circuit::GateKind kind;
  std::vector<int> qubits;  // physical
  std::string flavor;       // "ecr" | "direct" | "" for single-qubit gates
  std::string polarity;     // "CT" | "TC" | ""
  std::string form;
  double duration_ns = 0.0;
  int cx_cost = 0;
  double error = 0.0;
};

struct LoweredCircuit {
  circuit::ScheduledCircuit scheduled;  // physical qubit indices
  std::vector<GateReport> report;       // one row per logical gate
  std::vector<int> chain;
};

/// Places logical wire i on chain[i] and lowers every gate with CT polarity.
LoweredCircuit lower_circuit(const circuit::CircuitIR& logical,
                             const std::vector<int>& chain,
                             const device::DeviceModel& dev, OptLevel opt);

/// Renumbers a lowered circuit onto qubits 0..k-1 (chain[i] -> i).
circuit::ScheduledCircuit localize(const circuit::ScheduledCircuit& sc,
                                   const std::vector<int>& chain);

nlohmann::json report_to_json(const LoweredCircuit& lc);

}  // namespace bqaoa::lower
