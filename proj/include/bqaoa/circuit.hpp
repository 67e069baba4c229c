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

#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bqaoa/device.hpp"

namespace bqaoa::circuit {

/// Gate kinds. Rzx is the hardware cross-resonance rotation
/// exp(-i theta/2 Z_c X_t) produced by pulse-scaled lowering; it never appears
/// in logical circuits.
enum class GateKind {
  H,
  RX,
  RY,
  RZ,
  SX,
  X,
  CX,
  CZ,
  ZZ,
  ZzSwap,
  Swap,
  Rzx,
  Measure,
  Barrier
};

std::string_view to_string(GateKind k);
GateKind parse_kind(std::string_view s);
int arity(GateKind k);  // 0 for Barrier (any number of qubits)
bool is_parametric(GateKind k);

struct Gate {
  GateKind kind = GateKind::H;
  std::vector<int> qubits;  // CX/Rzx: qubits[0] is the control
  double theta = 0.0;
  int clbit = -1;  // Measure only

  static Gate h(int q) { return {GateKind::H, {q}}; }
  static Gate sx(int q) { return {GateKind::SX, {q}}; }
  static Gate x(int q) { return {GateKind::X, {q}}; }
  static Gate rx(int q, double t) { return {GateKind::RX, {q}, t}; }
  static Gate ry(int q, double t) { return {GateKind::RY, {q}, t}; }
  static Gate rz(int q, double t) { return {GateKind::RZ, {q}, t}; }
  static Gate cx(int c, int t) { return {GateKind::CX, {c, t}}; }
  static Gate cz(int a, int b) { return {GateKind::CZ, {a, b}}; }
  static Gate swap(int a, int b) { return {GateKind::Swap, {a, b}}; }
  static Gate zz(int a, int b, double t) { return {GateKind::ZZ, {a, b}, t}; }
  static Gate zz_swap(int a, int b, double t) {
    return {GateKind::ZzSwap, {a, b}, t};
  }
  static Gate rzx(int c, int t, double th) {
    return {GateKind::Rzx, {c, t}, th};
  }
  static Gate measure(int q, int c) { return {GateKind::Measure, {q}, 0.0, c}; }
  static Gate barrier(std::vector<int> qs = {}) {
    return {GateKind::Barrier, std::move(qs)};
  }

  bool operator==(const Gate&) const = default;
};

struct CircuitIR {
  int num_qubits = 0;
  int num_clbits = 0;
  std::vector<Gate> gates;

  CircuitIR() = default;
  CircuitIR(int nq, int nc) : num_qubits(nq), num_clbits(nc) {}

  /// Appends after checking the gate against the circuit; throws
  /// ValidationError or IndexError.
  void add(Gate g);
  /// Re-checks every gate and the distinct-clbit rule.
  void validate() const;

  bool operator==(const CircuitIR&) const = default;
};

struct ScheduledCircuit {
  CircuitIR circuit;
  std::vector<double> start_ns;
  std::vector<double> duration_ns;
  std::vector<double> error;  // per gate; 0 when unknown
  double total_duration_ns = 0.0;
  int cx_count = 0;
};

/// Layered depth counting only `counted` kinds. Uncounted gates still order
/// the qubits they touch; a Barrier aligns its qubits and counts 0.
int depth(const CircuitIR& c, const std::set<GateKind>& counted);
int depth(const CircuitIR& c);  // every kind except Barrier

/// ASAP schedule with explicit per-gate durations and errors.
ScheduledCircuit schedule_with(CircuitIR c, std::vector<double> durations,
                               std::vector<double> errors);

/// Hardware duration of one gate on `dev`: RZ/SX/X/RX/RY from the device's
/// single-qubit table (H as one SX), CX per direction, CZ as H-conjugated
/// native CX, Measure as the qubit's readout length, Barrier 0.
double hardware_duration(const Gate& g, const device::DeviceModel& dev);

/// ASAP schedule of a hardware-level circuit on `dev`. Gate errors are left
/// at 0; `lower` attaches them.
ScheduledCircuit schedule_asap(const CircuitIR& c,
                               const device::DeviceModel& dev);

/// Local gate matrices. For two-qubit gates the local basis index is
/// bit(qubits[0]) + 2*bit(qubits[1]).
Eigen::Matrix2cd matrix_1q(const Gate& g);
Eigen::Matrix4cd matrix_2q(const Gate& g);

/// Left-multiplies the rows of `m` (2^n rows) by the gate. Barrier is a no-op;
/// Measure throws MeasureInUnitaryError.
void apply_gate(Eigen::MatrixXcd& m, const Gate& g);
void apply_1q(Eigen::MatrixXcd& m, int q, const Eigen::Matrix2cd& u);
void apply_2q(Eigen::MatrixXcd& m, int q0, int q1, const Eigen::Matrix4cd& u);

/// Product of gate matrices in order, little-endian (qubit 0 is the least
/// significant bit of the basis index). n <= 10.
Eigen::MatrixXcd unitary_of(const CircuitIR& c);

/// |tr(U^dagger V)| == dim within tol.
bool equal_up_to_phase(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v,
                       double tol = 1e-9);

/// Text form, one gate per line: `KIND q0[,q1] [theta=<rad>] [clbit=<c>]`
/// after a `qubits <n> clbits <m>` header.
std::string to_text(const CircuitIR& c);
CircuitIR parse_text(std::istream& in);

/// Bitstring of `bits` over `n` positions, qubit 0 rightmost.
std::string bitstring(unsigned long long bits, int n);

}  // namespace bqaoa::circuit
