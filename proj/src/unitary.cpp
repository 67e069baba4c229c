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


#include <cmath>
#include <complex>

#include "bqaoa/circuit.hpp"
#include "bqaoa/errors.hpp"

namespace bqaoa::circuit {

using cd = std::complex<double>;

Eigen::Matrix2cd matrix_1q(const Gate& g) {
  const cd i(0.0, 1.0);
  const double c = std::cos(g.theta / 2.0);
  const double s = std::sin(g.theta / 2.0);
  Eigen::Matrix2cd m;
  switch (g.kind) {
    case GateKind::H:
      m << 1.0, 1.0, 1.0, -1.0;
      return m / std::sqrt(2.0);
    case GateKind::X:
      m << 0.0, 1.0, 1.0, 0.0;
      return m;
    case GateKind::SX:
      m << cd(1, 1), cd(1, -1), cd(1, -1), cd(1, 1);
      return m / 2.0;
    case GateKind::RX:
      m << c, -i * s, -i * s, c;
      return m;
    case GateKind::RY:
      m << c, -s, s, c;
      return m;
    case GateKind::RZ:
      m << std::exp(-i * (g.theta / 2.0)), 0.0, 0.0,
          std::exp(i * (g.theta / 2.0));
      return m;
    default:
      throw ValidationError(std::string(to_string(g.kind)) +
                            " is not a single-qubit unitary");
  }
}

Eigen::Matrix4cd matrix_2q(const Gate& g) {
  const cd i(0.0, 1.0);
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  switch (g.kind) {
    case GateKind::CX:
      m(0, 0) = m(2, 2) = 1.0;
      m(3, 1) = m(1, 3) = 1.0;
      return m;
    case GateKind::CZ:
      m.diagonal() << 1.0, 1.0, 1.0, -1.0;
      return m;
    case GateKind::Swap:
      m(0, 0) = m(3, 3) = 1.0;
      m(1, 2) = m(2, 1) = 1.0;
      return m;
    case GateKind::ZZ:
    case GateKind::ZzSwap: {
      const cd same = std::exp(-i * (g.theta / 2.0));
      const cd diff = std::exp(i * (g.theta / 2.0));
      if (g.kind == GateKind::ZZ) {
        m.diagonal() << same, diff, diff, same;
      } else {
        m(0, 0) = m(3, 3) = same;
        m(1, 2) = m(2, 1) = diff;
      }
      return m;
    }
    case GateKind::Rzx: {
      const double c = std::cos(g.theta / 2.0);
      const double s = std::sin(g.theta / 2.0);
      for (int b0 = 0; b0 < 2; ++b0) {
        for (int b1 = 0; b1 < 2; ++b1) {
          const int col = b0 + 2 * b1;
          const int row = b0 + 2 * (1 - b1);
          m(col, col) = c;
          m(row, col) = -i * s * (b0 == 0 ? 1.0 : -1.0);
        }
      }
      return m;
    }
    default:
      throw ValidationError(std::string(to_string(g.kind)) +
                            " is not a two-qubit unitary");
  }
}

void apply_1q(Eigen::MatrixXcd& m, int q, const Eigen::Matrix2cd& u) {
  const Eigen::Index dim = m.rows();
  const Eigen::Index bit = Eigen::Index{1} << q;
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (r & bit) continue;
      const cd a = m(r, col);
      const cd b = m(r | bit, col);
      m(r, col) = u(0, 0) * a + u(0, 1) * b;
      m(r | bit, col) = u(1, 0) * a + u(1, 1) * b;
    }
  }
}

void apply_2q(Eigen::MatrixXcd& m, int q0, int q1, const Eigen::Matrix4cd& u) {
  const Eigen::Index dim = m.rows();
  const Eigen::Index b0 = Eigen::Index{1} << q0;
  const Eigen::Index b1 = Eigen::Index{1} << q1;
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      if ((r & b0) || (r & b1)) continue;
      const Eigen::Index idx[4] = {r, r | b0, r | b1, r | b0 | b1};
      cd v[4];
      for (int k = 0; k < 4; ++k) v[k] = m(idx[k], col);
      for (int k = 0; k < 4; ++k) {
        m(idx[k], col) =
            u(k, 0) * v[0] + u(k, 1) * v[1] + u(k, 2) * v[2] + u(k, 3) * v[3];
      }
    }
  }
}

void apply_gate(Eigen::MatrixXcd& m, const Gate& g) {
  switch (g.kind) {
    case GateKind::Barrier:
      return;
    case GateKind::Measure:
      throw MeasureInUnitaryError("MEASURE has no unitary");
    default:
      break;
  }
  if (arity(g.kind) == 1) {
    apply_1q(m, g.qubits[0], matrix_1q(g));
  } else {
    apply_2q(m, g.qubits[0], g.qubits[1], matrix_2q(g));
  }
}

Eigen::MatrixXcd unitary_of(const CircuitIR& c) {
  if (c.num_qubits > 10) {
    throw TooLargeError("unitary_of: " + std::to_string(c.num_qubits) +
                        " qubits exceeds the limit of 10");
  }
  const Eigen::Index dim = Eigen::Index{1} << c.num_qubits;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& g : c.gates) apply_gate(u, g);
  return u;
}

bool equal_up_to_phase(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v,
                       double tol) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) return false;
  const double overlap = std::abs((u.adjoint() * v).trace());
  return std::abs(overlap - static_cast<double>(u.rows())) <= tol;
}

}  // namespace bqaoa::circuit
