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

// Independent reference implementations used only by tests. None of these
// call into the library's simulation or compilation code paths.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using cd = std::complex<double>;

// Dense single-qubit Pauli embedded at qubit q of n (little-endian).
inline Eigen::MatrixXcd embed(const Eigen::Matrix2cd& op, int q, int n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Ones(1, 1);
  for (int k = n - 1; k >= 0; --k) {
    const Eigen::Matrix2cd m = k == q ? op : Eigen::Matrix2cd::Identity();
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (int r = 0; r < out.rows(); ++r)
      for (int c = 0; c < out.cols(); ++c)
        next.block(2 * r, 2 * c, 2, 2) = out(r, c) * m;
    out = next;
  }
  return out;
}

inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
inline Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}
inline Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd m;
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

// Cost operator sum J_ij Z_i Z_j + sum h_i Z_i + c built from Kronecker
// products.
inline Eigen::MatrixXcd cost_operator(
    int n, const std::map<std::pair<int, int>, double>& J,
    const std::vector<double>& h, double constant) {
  const int dim = 1 << n;
  Eigen::MatrixXcd C = constant * Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& [ij, v] : J) {
    C += v * embed(pauli_z(), ij.first, n) * embed(pauli_z(), ij.second, n);
  }
  for (int i = 0; i < n; ++i) C += h[i] * embed(pauli_z(), i, n);
  return C;
}

// prod_k [exp(-i beta_k sum X) exp(-i gamma_k C)] H^n via matrix
// exponentials.
inline Eigen::MatrixXcd qaoa_unitary(int n, const Eigen::MatrixXcd& C,
                                     const std::vector<double>& gammas,
                                     const std::vector<double>& betas) {
  const int dim = 1 << n;
  const cd i(0, 1);
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd Hn = Eigen::MatrixXcd::Identity(dim, dim);
  for (int q = 0; q < n; ++q) {
    X += embed(pauli_x(), q, n);
    Hn = embed(hadamard(), q, n) * Hn;
  }
  Eigen::MatrixXcd U = Hn;
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    const Eigen::MatrixXcd cost = (-i * gammas[k] * C).exp();
    const Eigen::MatrixXcd mix = (-i * betas[k] * X).exp();
    U = mix * cost * U;
  }
  return U;
}

// Permutation taking logical basis states to wire basis states, where
// logical qubit a sits on wire wire_of[a].
inline Eigen::MatrixXcd permutation(const std::vector<int>& wire_of) {
  const int n = static_cast<int>(wire_of.size());
  const int dim = 1 << n;
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(dim, dim);
  for (int x = 0; x < dim; ++x) {
    int w = 0;
    for (int a = 0; a < n; ++a)
      if ((x >> a) & 1) w |= 1 << wire_of[a];
    P(w, x) = 1.0;
  }
  return P;
}

// Global-phase aligned max-norm distance.
inline double phase_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const cd tr = (a.adjoint() * b).trace();
  const cd phase = std::abs(tr) > 0 ? tr / std::abs(tr) : cd(1, 0);
  return (a * phase - b).cwiseAbs().maxCoeff();
}

// All simple paths with k vertices, each reported once with the smaller
// endpoint first, by plain DFS from every start vertex.
inline std::set<std::vector<int>> all_paths(
    int n, const std::vector<std::pair<int, int>>& edges, int k) {
  std::vector<std::set<int>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  std::set<std::vector<int>> out;
  std::vector<int> path;
  std::vector<bool> used(n, false);
  std::function<void(int)> dfs = [&](int v) {
    path.push_back(v);
    used[v] = true;
    if (static_cast<int>(path.size()) == k) {
      std::vector<int> p = path;
      if (p.front() > p.back()) std::reverse(p.begin(), p.end());
      out.insert(p);
    } else {
      for (int w : adj[v])
        if (!used[w]) dfs(w);
    }
    used[v] = false;
    path.pop_back();
  };
  for (int v = 0; v < n; ++v) dfs(v);
  return out;
}

}  // namespace oracle
