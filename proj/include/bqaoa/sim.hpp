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
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bqaoa/circuit.hpp"
#include "bqaoa/device.hpp"

namespace bqaoa::sim {

/// Density matrix over n qubits, little-endian basis index.
struct DensityMatrix {
  int n = 0;
  Eigen::MatrixXcd data;

  static DensityMatrix zero_state(int n);
  static DensityMatrix from_state(const Eigen::VectorXcd& psi);

  double trace() const;
  /// Hermitian and unit trace within tol, eigenvalues >= -psd_tol.
  bool is_valid(double tol = 1e-10, double psd_tol = 1e-9) const;
  /// diag(rho), negatives clipped to 0.
  std::vector<double> probabilities() const;
};

/// Per-qubit readout confusion, M(measured, prepared).
using Confusion = Eigen::Matrix2d;

Confusion confusion_matrix(double prob_meas0_prep1, double prob_meas1_prep0);

struct QubitNoise {
  double t1_ns = 0.0;  // 0 disables relaxation
  double t2_ns = 0.0;
  Confusion confusion = Confusion::Identity();
};

/// Calibration-derived noise on the local qubits of a circuit. Each gate
/// applies its unitary, then depolarizing noise whose average gate
/// infidelity equals the gate's error, then thermal relaxation for its
/// duration. Idle qubits relax across schedule gaps. The scale multiplies
/// gate errors, relaxation times and readout flip probabilities.
struct NoiseModel {
  std::vector<QubitNoise> qubits;
  double scale = 1.0;
  std::vector<std::string> warnings;

  /// Local qubit i takes the calibration of physical qubit chain[i].
  /// T2 above 2*T1 is clamped to 2*T1 with a warning.
  static NoiseModel from_device(const device::DeviceModel& dev,
                                const std::vector<int>& chain,
                                double scale = 1.0);
  static NoiseModel ideal(int n);

  std::vector<Confusion> confusions() const;
};

/// Depolarizing strength whose average gate infidelity on `arity` qubits is
/// `error`, clamped to [0, 1].
double depolarizing_lambda(double error, int arity);

/// Channel helpers acting in place on a density matrix.
void apply_unitary(DensityMatrix& rho, const circuit::Gate& g);
void depolarize(DensityMatrix& rho, const std::vector<int>& qubits,
                double lambda);
void relax(DensityMatrix& rho, int q, double t_ns, double t1_ns, double t2_ns);

/// Runs `sc` (local qubit indices, < rho0.n) under `noise`. Measure gates
/// only end a qubit's evolution; readout error is applied at sampling.
DensityMatrix evolve(const circuit::ScheduledCircuit& sc,
                     const NoiseModel& noise, const DensityMatrix& rho0);
DensityMatrix evolve(const circuit::ScheduledCircuit& sc,
                     const NoiseModel& noise);

/// Pushes a distribution over qubit outcomes through the tensor product of
/// per-qubit confusion matrices.
std::vector<double> apply_confusion(const std::vector<double>& p,
                                    const std::vector<Confusion>& m);

/// Counts indexed by outcome (bit q = qubit q).
using Counts = std::vector<std::int64_t>;

/// Multinomial draw of `shots` from `probs` after readout confusion, using
/// sequential binomials on a mt19937_64 seeded with `seed`.
Counts sample(const std::vector<double>& probs, std::int64_t shots,
              const std::vector<Confusion>& confusion, std::uint64_t seed);

struct Mitigated {
  std::vector<double> quasi;    // inverse-confusion result, may be negative
  std::vector<double> clipped;  // negatives set to 0, renormalized
};

/// Applies the inverse tensor-product confusion to the count frequencies.
/// Throws SingularConfusionError when some |det M| < 1e-6.
Mitigated mitigate_readout(const Counts& counts,
                           const std::vector<Confusion>& confusion);

/// Classical bit written by each qubit's Measure, -1 when unmeasured.
std::vector<int> clbit_of_qubit(const circuit::CircuitIR& c);

/// Reindexes a qubit-outcome distribution onto the classical register.
/// Unmeasured qubits are traced out.
std::vector<double> to_clbits(const std::vector<double>& p,
                              const circuit::CircuitIR& c);

std::map<std::string, std::int64_t> counts_to_map(const Counts& counts, int n);

/// Normalized Choi matrix of a channel on d = 2^m dimensions.
struct ChoiMatrix {
  int dim = 0;
  Eigen::MatrixXcd data;  // d^2 x d^2, trace 1
};

/// Sends half of |Phi> = sum_i |i>|i> / sqrt(d) through `sc` (m <= 2 local
/// qubits) under `noise`.
ChoiMatrix choi_of(const circuit::ScheduledCircuit& sc, const NoiseModel& noise);

/// `sc` repeated back to back `times` times.
circuit::ScheduledCircuit repeat(const circuit::ScheduledCircuit& sc, int times);

/// Output-side partial trace; I/d for trace-preserving channels.
Eigen::MatrixXcd input_marginal(const ChoiMatrix& c);

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2, clamped to [0, 1].
/// Throws DimensionError on mismatched dimensions.
double process_fidelity(const ChoiMatrix& a, const ChoiMatrix& b);

}  // namespace bqaoa::sim
