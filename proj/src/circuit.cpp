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


#include "bqaoa/circuit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>

#include "bqaoa/errors.hpp"

namespace bqaoa::circuit {

namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 14> kNames = {{
    {GateKind::H, "H"},
    {GateKind::RX, "RX"},
    {GateKind::RY, "RY"},
    {GateKind::RZ, "RZ"},
    {GateKind::SX, "SX"},
    {GateKind::X, "X"},
    {GateKind::CX, "CX"},
    {GateKind::CZ, "CZ"},
    {GateKind::ZZ, "ZZ"},
    {GateKind::ZzSwap, "ZZSWAP"},
    {GateKind::Swap, "SWAP"},
    {GateKind::Rzx, "RZX"},
    {GateKind::Measure, "MEASURE"},
    {GateKind::Barrier, "BARRIER"},
}};

}  // namespace

std::string_view to_string(GateKind k) {
  for (const auto& [kind, name] : kNames) {
    if (kind == k) return name;
  }
  return "?";
}

GateKind parse_kind(std::string_view s) {
  for (const auto& [kind, name] : kNames) {
    if (name == s) return kind;
  }
  throw ParseError("unknown gate kind \"" + std::string(s) + "\"");
}

int arity(GateKind k) {
  switch (k) {
    case GateKind::CX:
    case GateKind::CZ:
    case GateKind::ZZ:
    case GateKind::ZzSwap:
    case GateKind::Swap:
    case GateKind::Rzx:
      return 2;
    case GateKind::Barrier:
      return 0;
    default:
      return 1;
  }
}

bool is_parametric(GateKind k) {
  switch (k) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::ZZ:
    case GateKind::ZzSwap:
    case GateKind::Rzx:
      return true;
    default:
      return false;
  }
}

namespace {

void check_gate(const Gate& g, int nq, int nc) {
  const int a = arity(g.kind);
  const std::string name(to_string(g.kind));
  if (a != 0 && static_cast<int>(g.qubits.size()) != a) {
    throw ValidationError(name + ": expected " + std::to_string(a) +
                          " qubit(s), got " + std::to_string(g.qubits.size()));
  }
  for (int q : g.qubits) {
    if (q < 0 || q >= nq) {
      throw IndexError(name + ": qubit " + std::to_string(q) +
                       " out of range for " + std::to_string(nq) + " qubits");
    }
  }
  if (a == 2 && g.qubits[0] == g.qubits[1]) {
    throw ValidationError(name + ": qubits must be distinct");
  }
  if (!std::isfinite(g.theta)) {
    throw ValidationError(name + ": angle must be finite");
  }
  if (g.kind == GateKind::Measure && (g.clbit < 0 || g.clbit >= nc)) {
    throw IndexError("MEASURE: clbit " + std::to_string(g.clbit) +
                     " out of range");
  }
}

}  // namespace

void CircuitIR::add(Gate g) {
  check_gate(g, num_qubits, num_clbits);
  if (g.kind == GateKind::Measure) {
    for (const auto& h : gates) {
      if (h.kind == GateKind::Measure && h.clbit == g.clbit) {
        throw ValidationError("MEASURE: clbit " + std::to_string(g.clbit) +
                              " already written");
      }
    }
  }
  gates.push_back(std::move(g));
}

void CircuitIR::validate() const {
  std::vector<bool> seen(std::max(num_clbits, 0), false);
  for (const auto& g : gates) {
    check_gate(g, num_qubits, num_clbits);
    if (g.kind == GateKind::Measure) {
      if (seen[g.clbit]) {
        throw ValidationError("MEASURE: clbit " + std::to_string(g.clbit) +
                              " already written");
      }
      seen[g.clbit] = true;
    }
  }
}

int depth(const CircuitIR& c, const std::set<GateKind>& counted) {
  std::vector<int> level(c.num_qubits, 0);
  int best = 0;
  for (const auto& g : c.gates) {
    std::vector<int> qs = g.qubits;
    if (g.kind == GateKind::Barrier && qs.empty()) {
      qs.resize(c.num_qubits);
      for (int q = 0; q < c.num_qubits; ++q) qs[q] = q;
    }
    int m = 0;
    for (int q : qs) m = std::max(m, level[q]);
    if (g.kind != GateKind::Barrier && counted.count(g.kind)) ++m;
    for (int q : qs) level[q] = m;
    best = std::max(best, m);
  }
  return best;
}

int depth(const CircuitIR& c) {
  std::set<GateKind> all;
  for (const auto& [k, name] : kNames) all.insert(k);
  return depth(c, all);
}

ScheduledCircuit schedule_with(CircuitIR c, std::vector<double> durations,
                               std::vector<double> errors) {
  const std::size_t n = c.gates.size();
  if (durations.size() != n || errors.size() != n) {
    throw LengthError("schedule: durations/errors must match the gate count");
  }
  ScheduledCircuit s;
  s.start_ns.resize(n);
  std::vector<double> free_at(c.num_qubits, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Gate& g = c.gates[i];
    std::vector<int> qs = g.qubits;
    if (g.kind == GateKind::Barrier && qs.empty()) {
      qs.resize(c.num_qubits);
      for (int q = 0; q < c.num_qubits; ++q) qs[q] = q;
    }
    double t = 0.0;
    for (int q : qs) t = std::max(t, free_at[q]);
    s.start_ns[i] = t;
    for (int q : qs) free_at[q] = t + durations[i];
    s.total_duration_ns = std::max(s.total_duration_ns, t + durations[i]);
    if (g.kind == GateKind::CX) ++s.cx_count;
  }
  s.circuit = std::move(c);
  s.duration_ns = std::move(durations);
  s.error = std::move(errors);
  return s;
}

double hardware_duration(const Gate& g, const device::DeviceModel& dev) {
  const auto& d = dev.durations();
  switch (g.kind) {
    case GateKind::RZ:
      return d.rz;
    case GateKind::SX:
      return d.sx;
    case GateKind::H:
      return d.sx + 2.0 * d.rz;
    case GateKind::X:
      return d.x;
    case GateKind::RX:
      return d.rx;
    case GateKind::RY:
      return d.ry;
    case GateKind::CX:
      return dev.cx_duration(g.qubits[0], g.qubits[1]);
    case GateKind::CZ: {
      const auto* e = dev.find_edge(g.qubits[0], g.qubits[1]);
      if (e == nullptr) {
        throw UnmappedEdgeError("CZ on non-edge (" +
                                std::to_string(g.qubits[0]) + "," +
                                std::to_string(g.qubits[1]) + ")");
      }
      return e->cx_duration_ns + 2.0 * (d.sx + 2.0 * d.rz);
    }
    case GateKind::Measure:
      return dev.qubit(g.qubits[0]).readout_length_ns;
    case GateKind::Barrier:
      return 0.0;
    default:
      throw ValidationError(std::string(to_string(g.kind)) +
                            " is not a hardware gate; lower it first");
  }
}

ScheduledCircuit schedule_asap(const CircuitIR& c,
                               const device::DeviceModel& dev) {
  if (c.num_qubits > dev.num_qubits()) {
    throw IndexError("circuit has more qubits than the device");
  }
  std::vector<double> dur;
  dur.reserve(c.gates.size());
  for (const auto& g : c.gates) {
    if (arity(g.kind) == 2 && dev.find_edge(g.qubits[0], g.qubits[1]) == nullptr) {
      throw UnmappedEdgeError(std::string(to_string(g.kind)) + " on non-edge (" +
                              std::to_string(g.qubits[0]) + "," +
                              std::to_string(g.qubits[1]) + ")");
    }
    dur.push_back(hardware_duration(g, dev));
  }
  std::vector<double> err(c.gates.size(), 0.0);
  return schedule_with(c, std::move(dur), std::move(err));
}

std::string to_text(const CircuitIR& c) {
  std::ostringstream os;
  os.precision(17);
  os << "qubits " << c.num_qubits << " clbits " << c.num_clbits << "\n";
  for (const auto& g : c.gates) {
    os << to_string(g.kind);
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      os << (i == 0 ? " " : ",") << g.qubits[i];
    }
    if (is_parametric(g.kind)) os << " theta=" << g.theta;
    if (g.kind == GateKind::Measure) os << " clbit=" << g.clbit;
    os << "\n";
  }
  return os.str();
}

CircuitIR parse_text(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError("circuit text line " + std::to_string(lineno) + ": " +
                     msg);
  };
  CircuitIR c;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (!header) {
      std::string cl;
      if (word != "qubits" || !(ls >> c.num_qubits >> cl >> c.num_clbits) ||
          cl != "clbits") {
        fail("expected header 'qubits <n> clbits <m>'");
      }
      header = true;
      continue;
    }
    Gate g;
    try {
      g.kind = parse_kind(word);
    } catch (const ParseError& e) {
      fail(e.what());
    }
    std::string tok;
    while (ls >> tok) {
      try {
        if (tok.rfind("theta=", 0) == 0) {
          g.theta = std::stod(tok.substr(6));
        } else if (tok.rfind("clbit=", 0) == 0) {
          g.clbit = std::stoi(tok.substr(6));
        } else {
          std::istringstream qs(tok);
          std::string part;
          while (std::getline(qs, part, ',')) g.qubits.push_back(std::stoi(part));
        }
      } catch (const std::logic_error&) {
        fail("bad token '" + tok + "'");
      }
    }
    try {
      c.add(std::move(g));
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  if (!header) fail("missing header");
  return c;
}

std::string bitstring(unsigned long long bits, int n) {
  std::string s(n, '0');
  for (int q = 0; q < n; ++q) {
    if ((bits >> q) & 1ULL) s[n - 1 - q] = '1';
  }
  return s;
}

}  // namespace bqaoa::circuit
