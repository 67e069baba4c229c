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


#include "bqaoa/lower.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "bqaoa/errors.hpp"

namespace bqaoa::lower {

using circuit::Gate;
using circuit::GateKind;
using device::DeviceModel;
using device::EdgeCalibration;
using device::GateFlavor;

std::string_view to_string(OptLevel o) {
  switch (o) {
    case OptLevel::Default:
      return "default";
    case OptLevel::ZzOpt:
      return "zzopt";
    case OptLevel::ZzSwapOpt:
      return "zzswapopt";
  }
  return "?";
}

OptLevel parse_opt_level(std::string_view s) {
  if (s == "default") return OptLevel::Default;
  if (s == "zzopt") return OptLevel::ZzOpt;
  if (s == "zzswapopt") return OptLevel::ZzSwapOpt;
  throw ConfigError("opt level must be default|zzopt|zzswapopt, got \"" +
                    std::string(s) + "\"");
}

std::string_view to_string(Polarity p) { return p == Polarity::CT ? "CT" : "TC"; }

std::string_view to_string(Form f) {
  switch (f) {
    case Form::NativeCx:
      return "cx";
    case Form::CxSandwich:
      return "cx_rz_cx";
    case Form::ThreeCx:
      return "three_cx";
    case Form::SwapThreeCx:
      return "swap_three_cx";
    case Form::HConjugatedCx:
      return "h_cx_h";
    case Form::PulseScaledZz:
      return "zz_opt";
    case Form::CzPulse:
      return "cz_opt";
    case Form::CzBasedZzSwap:
      return "zz_swap_opt";
  }
  return "?";
}

LoweringRule rule_for(GateKind target, GateFlavor flavor, OptLevel opt,
                      Polarity polarity) {
  const bool ecr = flavor == GateFlavor::EcrCx;
  LoweringRule r{target, flavor, opt, polarity, Form::NativeCx, 1};
  switch (target) {
    case GateKind::CX:
      break;
    case GateKind::ZZ:
      if (ecr && opt != OptLevel::Default) {
        r.form = Form::PulseScaledZz;
        r.cx_cost = 0;
      } else {
        r.form = Form::CxSandwich;
        r.cx_cost = 2;
      }
      break;
    case GateKind::ZzSwap:
      if (ecr && opt == OptLevel::ZzSwapOpt) {
        r.form = Form::CzBasedZzSwap;
        r.cx_cost = 0;
      } else {
        r.form = Form::ThreeCx;
        r.cx_cost = 3;
      }
      break;
    case GateKind::CZ:
      if (ecr && opt != OptLevel::Default) {
        r.form = Form::CzPulse;
        r.cx_cost = 0;
      } else {
        r.form = Form::HConjugatedCx;
        r.cx_cost = 1;
      }
      break;
    case GateKind::Swap:
      r.form = Form::SwapThreeCx;
      r.cx_cost = 3;
      break;
    default:
      throw ValidationError(std::string(circuit::to_string(target)) +
                            " has no two-qubit lowering rule");
  }
  return r;
}

std::vector<LoweringRule> rule_table() {
  std::vector<LoweringRule> out;
  for (auto t : {GateKind::ZZ, GateKind::ZzSwap, GateKind::CZ, GateKind::Swap}) {
    for (auto f : {GateFlavor::EcrCx, GateFlavor::DirectCx}) {
      for (auto o : {OptLevel::Default, OptLevel::ZzOpt, OptLevel::ZzSwapOpt}) {
        for (auto p : {Polarity::CT, Polarity::TC}) {
          out.push_back(rule_for(t, f, o, p));
        }
      }
    }
  }
  return out;
}

circuit::CircuitIR Expansion::local_circuit() const {
  circuit::CircuitIR c(2, 0);
  for (Gate g : gates) {
    for (int& q : g.qubits) q = q == a ? 0 : 1;
    c.add(std::move(g));
  }
  return c;
}

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double theta) {
  double w = std::remainder(theta, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

// Accumulates hardware gates for one edge.
class Builder {
 public:
  Builder(const DeviceModel& dev, const EdgeCalibration* edge)
      : dev_(dev), edge_(edge) {}

  void rz(int q, double theta) { push(Gate::rz(q, theta), dev_.durations().rz, 0.0); }

  void h(int q) {
    rz(q, kPi / 2.0);
    push(Gate::sx(q), dev_.durations().sx, sx_error(q));
    rz(q, kPi / 2.0);
  }

  // Hadamard folded into an adjacent calibrated pulse.
  void h_absorbed(int q) { push(Gate::h(q), 0.0, 0.0); }

  void cx(int c, int t) {
    if (c == edge_->control) {
      push(Gate::cx(c, t), edge_->cx_duration_ns, edge_->cx_error);
    } else if (edge_->flavor == GateFlavor::EcrCx) {
      const double e =
          1.0 - (1.0 - edge_->cx_error) * (1.0 - sx_error(c)) * (1.0 - sx_error(t));
      push(Gate::cx(c, t), dev_.cx_duration(c, t), e);
    } else {
      h(c);
      h(t);
      cx(t, c);
      h(c);
      h(t);
    }
  }

  void rzx(int c, int t, double theta, double duration) {
    const auto& cr = dev_.cr_scale_model();
    const double fixed = std::max(0.0, cr.overhead_ns - 2.0 * dev_.durations().sx);
    const double reversal = c == edge_->control ? 0.0 : dev_.durations().sx;
    const double cr_seg = std::max(0.0, duration - fixed - reversal);
    const double seg_error =
        std::clamp(edge_->cx_error * cr_seg / edge_->cx_duration_ns, 0.0, 1.0);
    double keep = (1.0 - seg_error) * (1.0 - sx_error(c));
    if (reversal > 0.0) keep *= 1.0 - sx_error(t);
    push(Gate::rzx(c, t, theta), duration, 1.0 - keep);
  }

  void cz_pulse(int a, int b, int target, double duration) {
    const double sx = dev_.durations().sx;
    const double extra = sx > 0.0 ? std::round((duration - edge_->cx_duration_ns) / sx) : 0.0;
    const int m = static_cast<int>(std::max(0.0, extra));
    const double keep =
        (1.0 - edge_->cx_error) * std::pow(1.0 - sx_error(target), m);
    push(Gate::cz(a, b), duration, 1.0 - keep);
  }

  void one_qubit(const Gate& g) {
    const auto& d = dev_.durations();
    const int q = g.qubits[0];
    switch (g.kind) {
      case GateKind::H:
        h(q);
        break;
      case GateKind::RZ:
        rz(q, g.theta);
        break;
      case GateKind::SX:
        push(g, d.sx, sx_error(q));
        break;
      case GateKind::X:
        push(g, d.x, sx_error(q));
        break;
      case GateKind::RX:
        push(g, d.rx, sx_error(q));
        break;
      case GateKind::RY:
        push(g, d.ry, sx_error(q));
        break;
      default:
        throw ValidationError("not a single-qubit gate");
    }
  }

  // Stretches the CX instructions uniformly so the span hits `target_ns`.
  void retime_cx(double target_ns) {
    int n_cx = 0;
    for (const auto& g : x_.gates) n_cx += g.kind == GateKind::CX;
    if (n_cx == 0) return;
    const double delta = (target_ns - span()) / n_cx;
    for (std::size_t i = 0; i < x_.gates.size(); ++i) {
      if (x_.gates[i].kind != GateKind::CX) continue;
      x_.duration_ns[i] += delta;
      if (x_.duration_ns[i] <= 0.0) {
        throw ValidationError("schedule_ns override leaves a CX with "
                              "non-positive duration");
      }
    }
  }

  double span() const {
    std::map<int, double> free_at;
    double end = 0.0;
    for (std::size_t i = 0; i < x_.gates.size(); ++i) {
      double t = 0.0;
      for (int q : x_.gates[i].qubits) t = std::max(t, free_at[q]);
      for (int q : x_.gates[i].qubits) free_at[q] = t + x_.duration_ns[i];
      end = std::max(end, t + x_.duration_ns[i]);
    }
    return end;
  }

  Expansion finish(LoweringRule rule, int a, int b) {
    x_.rule = rule;
    x_.a = a;
    x_.b = b;
    x_.span_ns = span();
    x_.cx_count = 0;
    for (const auto& g : x_.gates) x_.cx_count += g.kind == GateKind::CX;
    return std::move(x_);
  }

 private:
  double sx_error(int q) const { return dev_.qubit(q).sx_error; }

  void push(Gate g, double duration, double error) {
    x_.gates.push_back(std::move(g));
    x_.duration_ns.push_back(duration);
    x_.error.push_back(error);
  }

  const DeviceModel& dev_;
  const EdgeCalibration* edge_;  // null for single-qubit gates
  Expansion x_;
};

const EdgeCalibration& edge_between(const DeviceModel& dev, int a, int b) {
  const EdgeCalibration* e = dev.find_edge(a, b);
  if (e == nullptr) {
    throw MissingEdgeError("no device edge between qubits " +
                           std::to_string(a) + " and " + std::to_string(b));
  }
  return *e;
}

double default_span(GateKind target, const DeviceModel& dev,
                    const EdgeCalibration& edge) {
  return expand(target, 0.0, edge.control, edge.target, dev, OptLevel::Default,
                Polarity::CT)
      .span_ns;
}

}  // namespace

double zz_opt_duration(double theta, const EdgeCalibration& edge,
                       const DeviceModel& dev) {
  const auto& cr = dev.cr_scale_model();
  const double stretch = std::abs(wrap_angle(theta)) / kPi *
                         std::max(0.0, edge.cx_duration_ns - cr.cx_non_cr_ns);
  return std::min(cr.overhead_ns + stretch, default_span(GateKind::ZZ, dev, edge));
}

Expansion expand(GateKind target, double theta, int a, int b,
                 const DeviceModel& dev, OptLevel opt, Polarity polarity) {
  const EdgeCalibration& edge = edge_between(dev, a, b);
  Builder x(dev, &edge);
  if (target == GateKind::CX) {
    const Polarity p = a == edge.control ? Polarity::CT : Polarity::TC;
    x.cx(a, b);
    return x.finish(rule_for(target, edge.flavor, opt, p), a, b);
  }
  const LoweringRule rule = rule_for(target, edge.flavor, opt, polarity);
  // c drives, t is driven; CT puts c on the native control.
  const int c = polarity == Polarity::CT ? edge.control : edge.target;
  const int t = polarity == Polarity::CT ? edge.target : edge.control;
  const bool ct = polarity == Polarity::CT;
  const double sx = dev.durations().sx;
  const auto& over = edge.schedule_ns;

  switch (rule.form) {
    case Form::CxSandwich:
      x.cx(c, t);
      x.rz(t, theta);
      x.cx(c, t);
      if (ct && over.zz) x.retime_cx(*over.zz);
      break;
    case Form::ThreeCx:
      x.cx(c, t);
      x.rz(t, theta);
      x.cx(t, c);
      x.cx(c, t);
      if (ct && over.zz_swap) x.retime_cx(*over.zz_swap);
      break;
    case Form::SwapThreeCx:
      x.cx(c, t);
      x.cx(t, c);
      x.cx(c, t);
      break;
    case Form::HConjugatedCx:
      x.h(t);
      x.cx(c, t);
      x.h(t);
      if (ct && over.cz) x.retime_cx(*over.cz);
      break;
    case Form::PulseScaledZz: {
      const double total = zz_opt_duration(theta, edge, dev);
      const double h_ns = sx + 2.0 * dev.durations().rz;
      const double rzx_ns = total - 2.0 * h_ns + (ct ? 0.0 : sx);
      x.h(t);
      x.rzx(c, t, wrap_angle(theta), rzx_ns);
      x.h(t);
      break;
    }
    case Form::CzPulse: {
      const double pulse = edge.cx_duration_ns + sx + (ct ? 0.0 : sx);
      x.cz_pulse(a, b, t, pulse);
      break;
    }
    case Form::CzBasedZzSwap: {
      const double pulse =
          (default_span(GateKind::ZzSwap, dev, edge) - sx) / 3.0 + (ct ? 0.0 : sx);
      x.h_absorbed(t);
      x.cz_pulse(c, t, t, pulse);
      x.h_absorbed(t);
      x.rz(t, theta);
      x.h(c);
      x.cz_pulse(c, t, c, pulse);
      x.h_absorbed(c);
      x.h_absorbed(t);
      x.cz_pulse(c, t, t, pulse);
      x.h_absorbed(t);
      break;
    }
    case Form::NativeCx:
      break;
  }
  return x.finish(rule, a, b);
}

PolarityVariants polarity_variants(GateKind target, double theta,
                                   const EdgeCalibration& edge,
                                   const DeviceModel& dev, OptLevel opt) {
  if (target != GateKind::ZZ && target != GateKind::ZzSwap &&
      target != GateKind::CZ && target != GateKind::Swap) {
    throw ValidationError("polarity variants need an undirected target");
  }
  PolarityVariants v{
      expand(target, theta, edge.control, edge.target, dev, opt, Polarity::CT),
      expand(target, theta, edge.control, edge.target, dev, opt, Polarity::TC)};
  v.duration_ct = v.ct.span_ns;
  v.duration_tc = v.tc.span_ns;
  return v;
}

double effective_error(const Expansion& e) {
  double keep = 1.0;
  for (double err : e.error) keep *= 1.0 - err;
  return std::max(0.0, 1.0 - keep);
}

LoweredCircuit lower_circuit(const circuit::CircuitIR& logical,
                             const std::vector<int>& chain,
                             const DeviceModel& dev, OptLevel opt) {
  logical.validate();
  const int k = static_cast<int>(chain.size());
  if (k != logical.num_qubits) {
    throw LengthError("chain has " + std::to_string(k) +
                      " qubits, circuit has " +
                      std::to_string(logical.num_qubits));
  }
  std::set<int> seen;
  for (int q : chain) {
    if (q < 0 || q >= dev.num_qubits()) {
      throw IndexError("chain qubit " + std::to_string(q) + " not on device");
    }
    if (!seen.insert(q).second) {
      throw ValidationError("chain repeats qubit " + std::to_string(q));
    }
  }
  for (int i = 0; i + 1 < k; ++i) edge_between(dev, chain[i], chain[i + 1]);

  LoweredCircuit out;
  out.chain = chain;
  circuit::CircuitIR hw(dev.num_qubits(), logical.num_clbits);
  std::vector<double> dur;
  std::vector<double> err;
  auto append = [&](const Expansion& x) {
    for (std::size_t i = 0; i < x.gates.size(); ++i) {
      hw.add(x.gates[i]);
      dur.push_back(x.duration_ns[i]);
      err.push_back(x.error[i]);
    }
  };

  for (const auto& g : logical.gates) {
    if (g.kind == GateKind::Barrier) continue;
    GateReport row;
    row.kind = g.kind;
    for (int w : g.qubits) row.qubits.push_back(chain[w]);
    if (g.kind == GateKind::Measure) {
      const int q = chain[g.qubits[0]];
      hw.add(Gate::measure(q, g.clbit));
      dur.push_back(dev.qubit(q).readout_length_ns);
      err.push_back(0.0);
      row.form = "measure";
      row.duration_ns = dur.back();
      out.report.push_back(row);
      continue;
    }
    if (circuit::arity(g.kind) == 1) {
      Builder b(dev, nullptr);
      Gate pg = g;
      pg.qubits[0] = chain[g.qubits[0]];
      b.one_qubit(pg);
      const Expansion x = b.finish({}, pg.qubits[0], pg.qubits[0]);
      append(x);
      row.form = "single_qubit";
      row.duration_ns = x.span_ns;
      row.error = effective_error(x);
      out.report.push_back(row);
      continue;
    }
    if (std::abs(g.qubits[0] - g.qubits[1]) != 1) {
      throw NonAdjacentGateError(
          std::string(circuit::to_string(g.kind)) + " on wires " +
          std::to_string(g.qubits[0]) + "," + std::to_string(g.qubits[1]) +
          " which are not adjacent on the chain");
    }
    const int a = chain[g.qubits[0]];
    const int b = chain[g.qubits[1]];
    const Expansion x = expand(g.kind, g.theta, a, b, dev, opt, Polarity::CT);
    append(x);
    row.flavor = std::string(device::to_string(x.rule.flavor));
    row.polarity = std::string(to_string(x.rule.polarity));
    row.form = std::string(to_string(x.rule.form));
    row.duration_ns = x.span_ns;
    row.cx_cost = x.cx_count;
    row.error = effective_error(x);
    out.report.push_back(row);
  }
  out.scheduled = circuit::schedule_with(std::move(hw), std::move(dur), std::move(err));
  return out;
}

circuit::ScheduledCircuit localize(const circuit::ScheduledCircuit& sc,
                                   const std::vector<int>& chain) {
  std::map<int, int> local;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    local[chain[i]] = static_cast<int>(i);
  }
  circuit::ScheduledCircuit out = sc;
  out.circuit.num_qubits = static_cast<int>(chain.size());
  for (auto& g : out.circuit.gates) {
    for (int& q : g.qubits) {
      auto it = local.find(q);
      if (it == local.end()) {
        throw IndexError("gate on qubit " + std::to_string(q) +
                         " outside the chain");
      }
      q = it->second;
    }
  }
  return out;
}

nlohmann::json report_to_json(const LoweredCircuit& lc) {
  nlohmann::json j;
  j["chain"] = lc.chain;
  j["total_duration_ns"] = lc.scheduled.total_duration_ns;
  j["cx_count"] = lc.scheduled.cx_count;
  j["gates"] = nlohmann::json::array();
  for (const auto& r : lc.report) {
    nlohmann::json row = {{"kind", circuit::to_string(r.kind)},
                          {"qubits", r.qubits},
                          {"form", r.form},
                          {"duration_ns", r.duration_ns},
                          {"cx_cost", r.cx_cost},
                          {"error", r.error}};
    if (r.qubits.size() == 2) {
      row["edge"] = r.qubits;
      row["flavor"] = r.flavor;
      row["polarity"] = r.polarity;
    }
    j["gates"].push_back(row);
  }
  j["hardware"] = {{"text", circuit::to_text(lc.scheduled.circuit)},
                   {"start_ns", lc.scheduled.start_ns},
                   {"duration_ns", lc.scheduled.duration_ns},
                   {"error", lc.scheduled.error}};
  return j;
}

}  // namespace bqaoa::lower
