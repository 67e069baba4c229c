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


#include "bqaoa/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bqaoa/errors.hpp"

namespace bqaoa::sim {

using circuit::Gate;
using circuit::GateKind;
using cd = std::complex<double>;

namespace {

constexpr int kMaxQubits = 10;

std::size_t dim_of(int n) { return std::size_t{1} << n; }

// rho -> K rho K^dagger for a local operator K.
void conjugate_1q(Eigen::MatrixXcd& m, int q, const Eigen::Matrix2cd& k) {
  circuit::apply_1q(m, q, k);
  m.adjointInPlace();
  circuit::apply_1q(m, q, k);
  m.adjointInPlace();
}

void apply_kraus(DensityMatrix& rho, int q,
                 std::initializer_list<Eigen::Matrix2cd> ks) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.data.rows(), rho.data.cols());
  for (const auto& k : ks) {
    Eigen::MatrixXcd m = rho.data;
    conjugate_1q(m, q, k);
    out += m;
  }
  rho.data = std::move(out);
}

const std::array<Eigen::Matrix2cd, 4>& paulis() {
  static const std::array<Eigen::Matrix2cd, 4> p = [] {
    std::array<Eigen::Matrix2cd, 4> a;
    a[0] << 1, 0, 0, 1;
    a[1] << 0, 1, 1, 0;
    a[2] << 0, cd(0, -1), cd(0, 1), 0;
    a[3] << 1, 0, 0, -1;
    return a;
  }();
  return p;
}

}  // namespace

DensityMatrix DensityMatrix::zero_state(int n) {
  if (n < 0 || n > kMaxQubits) {
    throw TooLargeError("density matrix limited to " +
                        std::to_string(kMaxQubits) + " qubits, got " +
                        std::to_string(n));
  }
  DensityMatrix r;
  r.n = n;
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  r.data = Eigen::MatrixXcd::Zero(d, d);
  r.data(0, 0) = 1.0;
  return r;
}

DensityMatrix DensityMatrix::from_state(const Eigen::VectorXcd& psi) {
  int n = 0;
  while (static_cast<Eigen::Index>(dim_of(n)) < psi.size()) ++n;
  if (static_cast<Eigen::Index>(dim_of(n)) != psi.size()) {
    throw DimensionError("state length is not a power of two");
  }
  if (n > kMaxQubits) throw TooLargeError("state exceeds density matrix limit");
  return {n, psi * psi.adjoint()};
}

double DensityMatrix::trace() const { return data.trace().real(); }

bool DensityMatrix::is_valid(double tol, double psd_tol) const {
  if ((data - data.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(data.trace() - cd(1.0, 0.0)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(data, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -psd_tol;
}

std::vector<double> DensityMatrix::probabilities() const {
  std::vector<double> p(static_cast<std::size_t>(data.rows()));
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    p[static_cast<std::size_t>(i)] = std::max(0.0, data(i, i).real());
  }
  return p;
}

Confusion confusion_matrix(double prob_meas0_prep1, double prob_meas1_prep0) {
  Confusion m;
  m << 1.0 - prob_meas1_prep0, prob_meas0_prep1,
      prob_meas1_prep0, 1.0 - prob_meas0_prep1;
  return m;
}

NoiseModel NoiseModel::from_device(const device::DeviceModel& dev,
                                   const std::vector<int>& chain,
                                   double scale) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw ConfigError("noise scale must be a finite value >= 0");
  }
  NoiseModel m;
  m.scale = scale;
  for (int p : chain) {
    const auto& cal = dev.qubit(p);
    QubitNoise qn;
    qn.t1_ns = cal.t1_us * 1e3;
    qn.t2_ns = cal.t2_us * 1e3;
    if (qn.t2_ns > 2.0 * qn.t1_ns) {
      m.warnings.push_back("qubit " + std::to_string(p) + ": T2 " +
                           std::to_string(cal.t2_us) + " us exceeds 2*T1, clamped");
      qn.t2_ns = 2.0 * qn.t1_ns;
    }
    const double p01 = std::min(1.0, scale * cal.prob_meas0_prep1);
    const double p10 = std::min(1.0, scale * cal.prob_meas1_prep0);
    qn.confusion = confusion_matrix(p01, p10);
    m.qubits.push_back(qn);
  }
  return m;
}

NoiseModel NoiseModel::ideal(int n) {
  NoiseModel m;
  m.scale = 0.0;
  m.qubits.assign(static_cast<std::size_t>(n), QubitNoise{});
  return m;
}

std::vector<Confusion> NoiseModel::confusions() const {
  std::vector<Confusion> out;
  for (const auto& q : qubits) out.push_back(q.confusion);
  return out;
}

double depolarizing_lambda(double error, int arity) {
  const double d = static_cast<double>(dim_of(arity));
  return std::clamp(error * d / (d - 1.0), 0.0, 1.0);
}

void apply_unitary(DensityMatrix& rho, const Gate& g) {
  circuit::apply_gate(rho.data, g);
  rho.data.adjointInPlace();
  circuit::apply_gate(rho.data, g);
  rho.data.adjointInPlace();
}

void depolarize(DensityMatrix& rho, const std::vector<int>& qubits,
                double lambda) {
  if (lambda <= 0.0) return;
  const std::size_t terms = dim_of(2 * static_cast<int>(qubits.size()));
  Eigen::MatrixXcd twirl = Eigen::MatrixXcd::Zero(rho.data.rows(), rho.data.cols());
  for (std::size_t t = 0; t < terms; ++t) {
    Eigen::MatrixXcd m = rho.data;
    std::size_t code = t;
    for (int q : qubits) {
      const auto& p = paulis()[code & 3U];
      code >>= 2;
      conjugate_1q(m, q, p);
    }
    twirl += m;
  }
  rho.data = (1.0 - lambda) * rho.data +
             (lambda / static_cast<double>(terms)) * twirl;
}

void relax(DensityMatrix& rho, int q, double t_ns, double t1_ns, double t2_ns) {
  if (t_ns <= 0.0) return;
  if (t1_ns > 0.0) {
    const double gamma = 1.0 - std::exp(-t_ns / t1_ns);
    Eigen::Matrix2cd k0, k1;
    k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
    k1 << 0, std::sqrt(gamma), 0, 0;
    apply_kraus(rho, q, {k0, k1});
  }
  if (t2_ns > 0.0) {
    // Pure dephasing on top of the sqrt(1 - gamma) coherence decay.
    const double rate = 1.0 / t2_ns - (t1_ns > 0.0 ? 0.5 / t1_ns : 0.0);
    const double f = std::exp(-t_ns * std::max(0.0, rate));
    Eigen::Matrix2cd k0 = std::sqrt((1.0 + f) / 2.0) * paulis()[0];
    Eigen::Matrix2cd k1 = std::sqrt((1.0 - f) / 2.0) * paulis()[3];
    apply_kraus(rho, q, {k0, k1});
  }
}

DensityMatrix evolve(const circuit::ScheduledCircuit& sc,
                     const NoiseModel& noise, const DensityMatrix& rho0) {
  const int nq = sc.circuit.num_qubits;
  if (rho0.n > kMaxQubits || nq > kMaxQubits) {
    throw TooLargeError("simulation limited to " + std::to_string(kMaxQubits) +
                        " qubits");
  }
  if (nq > rho0.n) {
    throw DimensionError("circuit has " + std::to_string(nq) +
                         " qubits, state has " + std::to_string(rho0.n));
  }
  if (static_cast<int>(noise.qubits.size()) < nq) {
    throw DimensionError("noise model covers " +
                         std::to_string(noise.qubits.size()) + " of " +
                         std::to_string(nq) + " qubits");
  }
  const double s = noise.scale;
  DensityMatrix rho = rho0;
  std::vector<double> busy(static_cast<std::size_t>(nq), 0.0);
  std::vector<bool> measured(static_cast<std::size_t>(nq), false);
  auto idle = [&](int q, double until) {
    const auto& qn = noise.qubits[static_cast<std::size_t>(q)];
    relax(rho, q, s * (until - busy[static_cast<std::size_t>(q)]), qn.t1_ns,
          qn.t2_ns);
    busy[static_cast<std::size_t>(q)] = until;
  };
  for (std::size_t i = 0; i < sc.circuit.gates.size(); ++i) {
    const Gate& g = sc.circuit.gates[i];
    if (g.kind == GateKind::Barrier) continue;
    const double start = sc.start_ns[i];
    const double dur = sc.duration_ns[i];
    for (int q : g.qubits) {
      if (measured[static_cast<std::size_t>(q)]) {
        throw ValidationError("gate after measurement on qubit " +
                              std::to_string(q));
      }
      idle(q, start);
    }
    if (g.kind == GateKind::Measure) {
      measured[static_cast<std::size_t>(g.qubits[0])] = true;
      continue;
    }
    apply_unitary(rho, g);
    depolarize(rho, g.qubits,
               depolarizing_lambda(s * sc.error[i],
                                   static_cast<int>(g.qubits.size())));
    for (int q : g.qubits) idle(q, start + dur);
  }
  return rho;
}

DensityMatrix evolve(const circuit::ScheduledCircuit& sc,
                     const NoiseModel& noise) {
  return evolve(sc, noise, DensityMatrix::zero_state(sc.circuit.num_qubits));
}

std::vector<double> apply_confusion(const std::vector<double>& p,
                                    const std::vector<Confusion>& m) {
  std::vector<double> out = p;
  for (std::size_t q = 0; q < m.size(); ++q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (i & bit) continue;
      const double p0 = out[i];
      const double p1 = out[i | bit];
      out[i] = m[q](0, 0) * p0 + m[q](0, 1) * p1;
      out[i | bit] = m[q](1, 0) * p0 + m[q](1, 1) * p1;
    }
  }
  return out;
}

Counts sample(const std::vector<double>& probs, std::int64_t shots,
              const std::vector<Confusion>& confusion, std::uint64_t seed) {
  if (shots < 1) throw ConfigError("shots must be >= 1");
  std::vector<double> q = apply_confusion(probs, confusion);
  double total = 0.0;
  for (double& v : q) {
    v = std::max(0.0, v);
    total += v;
  }
  if (!(total > 0.0)) throw ValidationError("distribution has no mass");
  std::mt19937_64 rng(seed);
  Counts counts(q.size(), 0);
  std::int64_t left = shots;
  double mass = total;
  for (std::size_t i = 0; i < q.size() && left > 0; ++i) {
    if (q[i] <= 0.0) continue;
    const double pr = std::min(1.0, q[i] / mass);
    std::int64_t k = left;
    if (pr < 1.0) k = std::binomial_distribution<std::int64_t>(left, pr)(rng);
    counts[i] = k;
    left -= k;
    mass -= q[i];
  }
  return counts;
}

Mitigated mitigate_readout(const Counts& counts,
                           const std::vector<Confusion>& confusion) {
  std::vector<Confusion> inv;
  for (std::size_t q = 0; q < confusion.size(); ++q) {
    const double det = confusion[q].determinant();
    if (std::abs(det) < 1e-6) {
      throw SingularConfusionError("confusion matrix of qubit " +
                                   std::to_string(q) + " is singular (det " +
                                   std::to_string(det) + ")");
    }
    inv.push_back(confusion[q].inverse());
  }
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  if (!(total > 0.0)) throw ValidationError("no counts to mitigate");
  std::vector<double> f(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    f[i] = static_cast<double>(counts[i]) / total;
  }
  Mitigated m;
  m.quasi = apply_confusion(f, inv);
  m.clipped = m.quasi;
  double kept = 0.0;
  for (double& v : m.clipped) {
    v = std::max(0.0, v);
    kept += v;
  }
  for (double& v : m.clipped) v /= kept;
  return m;
}

std::vector<int> clbit_of_qubit(const circuit::CircuitIR& c) {
  std::vector<int> out(static_cast<std::size_t>(c.num_qubits), -1);
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::Measure) {
      out[static_cast<std::size_t>(g.qubits[0])] = g.clbit;
    }
  }
  return out;
}

std::vector<double> to_clbits(const std::vector<double>& p,
                              const circuit::CircuitIR& c) {
  const auto map = clbit_of_qubit(c);
  std::vector<double> out(dim_of(c.num_clbits), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::size_t j = 0;
    for (std::size_t q = 0; q < map.size(); ++q) {
      if (map[q] >= 0 && ((i >> q) & 1U)) j |= std::size_t{1} << map[q];
    }
    out[j] += p[i];
  }
  return out;
}

std::map<std::string, std::int64_t> counts_to_map(const Counts& counts, int n) {
  std::map<std::string, std::int64_t> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0) out[circuit::bitstring(i, n)] = counts[i];
  }
  return out;
}

}  // namespace bqaoa::sim
