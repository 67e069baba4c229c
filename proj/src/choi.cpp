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


#include <algorithm>
#include <cmath>
#include <optional>

#include "bqaoa/errors.hpp"
#include "bqaoa/sim.hpp"

namespace bqaoa::sim {

ChoiMatrix choi_of(const circuit::ScheduledCircuit& sc, const NoiseModel& noise) {
  const int m = sc.circuit.num_qubits;
  if (m < 1 || m > 2) {
    throw DimensionError("Choi construction supports 1 or 2 qubits, got " +
                         std::to_string(m));
  }
  const Eigen::Index d = Eigen::Index{1} << m;
  // System qubits 0..m-1 carry the channel output, m..2m-1 the reference.
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) phi(i + i * d) = 1.0;
  phi /= std::sqrt(static_cast<double>(d));
  DensityMatrix rho = evolve(sc, noise, DensityMatrix::from_state(phi));
  ChoiMatrix c;
  c.dim = static_cast<int>(d);
  c.data = rho.data / rho.data.trace();
  return c;
}

circuit::ScheduledCircuit repeat(const circuit::ScheduledCircuit& sc, int times) {
  if (times < 1) throw ConfigError("repetitions must be >= 1");
  circuit::CircuitIR c(sc.circuit.num_qubits, sc.circuit.num_clbits);
  std::vector<double> dur, err;
  for (int r = 0; r < times; ++r) {
    for (std::size_t i = 0; i < sc.circuit.gates.size(); ++i) {
      c.gates.push_back(sc.circuit.gates[i]);
      dur.push_back(sc.duration_ns[i]);
      err.push_back(sc.error[i]);
    }
  }
  return circuit::schedule_with(std::move(c), std::move(dur), std::move(err));
}

Eigen::MatrixXcd input_marginal(const ChoiMatrix& c) {
  const Eigen::Index d = c.dim;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      for (Eigen::Index s = 0; s < d; ++s) out(a, b) += c.data(s + a * d, s + b * d);
  return out;
}

namespace {

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

namespace {

// Dominant eigenvector when `m` is pure within 1e-12, else empty.
std::optional<Eigen::VectorXcd> pure_vector(const Eigen::MatrixXcd& m) {
  if (std::abs((m * m).trace().real() - 1.0) > 1e-12) return std::nullopt;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((m + m.adjoint()) / 2.0);
  return es.eigenvectors().col(es.eigenvalues().size() - 1);
}

}  // namespace

double process_fidelity(const ChoiMatrix& a, const ChoiMatrix& b) {
  if (a.dim != b.dim || a.data.rows() != b.data.rows()) {
    throw DimensionError("Choi dimensions differ: " + std::to_string(a.dim) +
                         " vs " + std::to_string(b.dim));
  }
  // A pure argument reduces the Uhlmann fidelity to <psi|rho|psi>, which
  // avoids square roots of near-zero eigenvalues.
  if (auto psi = pure_vector(a.data)) {
    return std::clamp((psi->adjoint() * b.data * *psi)(0, 0).real(), 0.0, 1.0);
  }
  if (auto psi = pure_vector(b.data)) {
    return std::clamp((psi->adjoint() * a.data * *psi)(0, 0).real(), 0.0, 1.0);
  }
  const Eigen::MatrixXcd sa = psd_sqrt(a.data);
  const Eigen::MatrixXcd inner = sa * b.data * sa;
  const Eigen::MatrixXcd h = (inner + inner.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  const double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

}  // namespace bqaoa::sim
