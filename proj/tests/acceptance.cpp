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


// Acceptance driver: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bqaoa/circuit.hpp"
#include "bqaoa/device.hpp"
#include "bqaoa/errors.hpp"
#include "bqaoa/lower.hpp"
#include "bqaoa/mapper.hpp"
#include "bqaoa/opt.hpp"
#include "bqaoa/qaoa.hpp"
#include "bqaoa/sim.hpp"
#include "mapper_oracle.hpp"
#include "oracles.hpp"

namespace {

using namespace bqaoa;
using circuit::CircuitIR;
using circuit::Gate;
using circuit::GateKind;
using lower::OptLevel;

const std::filesystem::path kData = BQAOA_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

device::DeviceModel load(const char* name) {
  return device::load_device(kData / "devices" / name);
}

qaoa::Problem problem(const char* name) { return qaoa::load_problem(kData / "problems" / name); }

qaoa::IsingProblem random_problem(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  qaoa::IsingProblem p;
  p.n = n;
  p.h.resize(n);
  for (int i = 0; i < n; ++i) {
    p.h[i] = u(rng);
    for (int j = i + 1; j < n; ++j) p.J[{i, j}] = u(rng);
  }
  p.constant = u(rng);
  return p;
}

CircuitIR without_measure(CircuitIR c) {
  std::erase_if(c.gates, [](const Gate& g) { return g.kind == GateKind::Measure; });
  return c;
}

Outcome depth_formula() {
  Outcome o;
  const std::set<GateKind> counted = {GateKind::H,  GateKind::RX,     GateKind::RZ,
                                      GateKind::ZZ, GateKind::ZzSwap, GateKind::Measure};
  std::mt19937_64 rng(1);
  for (int n = 2; n <= 8; ++n) {
    for (int p = 1; p <= 5; ++p) {
      qaoa::ParamVector params{std::vector<double>(p, 0.3), std::vector<double>(p, 0.2)};
      const auto net = qaoa::build_swap_network(random_problem(rng, n), params);
      const int got = circuit::depth(net.circuit, counted);
      const int want = 2 + (n + 2) * p;
      o.check(got == want, "n=" + std::to_string(n) + " p=" + std::to_string(p) + " depth " +
                               std::to_string(got) + " != " + std::to_string(want));
    }
  }
  return o;
}

Outcome swap_network_unitary() {
  Outcome o;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ang(-1.5, 1.5);
  double worst = 0.0;
  for (int n = 2; n <= 5; ++n) {
    for (int p = 1; p <= 2; ++p) {
      for (int trial = 0; trial < 3; ++trial) {
        const auto prob = random_problem(rng, n);
        qaoa::ParamVector params;
        for (int k = 0; k < p; ++k) {
          params.gammas.push_back(ang(rng));
          params.betas.push_back(ang(rng));
        }
        const auto net = qaoa::build_swap_network(prob, params);
        const auto C = oracle::cost_operator(n, prob.J, prob.h, prob.constant);
        const Eigen::MatrixXcd want =
            oracle::permutation(net.wire_of) * oracle::qaoa_unitary(n, C, params.gammas, params.betas);
        const auto got = circuit::unitary_of(without_measure(net.circuit));
        worst = std::max(worst, oracle::phase_distance(want, got));
        o.check(circuit::equal_up_to_phase(want, got, 1e-8),
                "library phase comparison rejects n=" + std::to_string(n));
      }
    }
  }
  o.check(worst <= 1e-8, "max distance " + fmt("%.3g", worst));
  if (o.pass) o.detail = "max distance " + fmt("%.3g", worst);
  return o;
}

Outcome duration_table() {
  Outcome o;
  const auto dev = load("ehningen_fragment.json");
  struct Row {
    GateKind kind;
    int a, b;
    OptLevel opt;
    double want;
  };
  const std::vector<Row> rows = {
      {GateKind::CX, 1, 4, OptLevel::Default, 245.3},
      {GateKind::CX, 1, 0, OptLevel::Default, 320.0},
      {GateKind::ZZ, 1, 4, OptLevel::Default, 490.0},
      {GateKind::ZZ, 1, 0, OptLevel::Default, 640.0},
      {GateKind::CZ, 1, 4, OptLevel::Default, 309.3},
      {GateKind::CZ, 1, 0, OptLevel::Default, 384.0},
      {GateKind::CZ, 1, 0, OptLevel::ZzOpt, 352.0},
      {GateKind::ZzSwap, 1, 4, OptLevel::Default, 800.0},
      {GateKind::ZzSwap, 1, 0, OptLevel::Default, 992.0},
      {GateKind::ZzSwap, 1, 0, OptLevel::ZzSwapOpt, 992.0},
  };
  for (const auto& r : rows) {
    const auto x = lower::expand(r.kind, 0.7, r.a, r.b, dev, r.opt);
    o.check(std::abs(x.span_ns - r.want) < 1e-9,
            std::string(circuit::to_string(r.kind)) + " " + fmt("%.10g", x.span_ns) +
                " != " + fmt("%.10g", r.want));
  }
  const auto zs = lower::expand(GateKind::ZzSwap, 0.7, 1, 0, dev, OptLevel::ZzSwapOpt);
  o.check(zs.cx_count == 0, "ZzSwapOpt ZZ-SWAP cx_count " + std::to_string(zs.cx_count));
  return o;
}

Outcome table_one() {
  Outcome o;
  const auto s = device::summarize(load("table1_edges.json"));
  auto near = [&](double got, double want, const char* what) {
    o.check(std::abs(got - want) <= 0.01 + 1e-12, std::string(what) + " " + fmt("%.4f", got));
  };
  near(s.ecr.cx_error * 100, 0.83, "ecr error");
  near(s.ecr.cx_duration_ns, 382.22, "ecr time");
  near(s.direct.cx_error * 100, 0.79, "direct error");
  near(s.direct.cx_duration_ns, 256.89, "direct time");
  near(s.error_reduction_pct, 4.82, "error reduction");
  near(s.duration_reduction_pct, 32.79, "time reduction");
  return o;
}

Outcome k5_noiseless() {
  Outcome o;
  const auto k5 = problem("k5_maxcut.json");
  const auto layers = opt::train_layers(k5, 3, {}, 0);
  std::vector<qaoa::Metrics> m;
  for (const auto& l : layers) {
    m.push_back(qaoa::metrics(k5.ising, qaoa::ideal_distribution(k5.ising, l.params)));
  }
  o.check(std::abs(m[0].ar - 0.914) <= 0.02, "p=1 AR " + fmt("%.4f", m[0].ar) + " outside 0.914+-0.02");
  o.check(std::abs(m[0].sp - 0.8779) <= 0.03, "p=1 SP " + fmt("%.4f", m[0].sp) + " outside 0.8779+-0.03");
  o.check(m[1].ar >= 0.95, "p=2 AR " + fmt("%.4f", m[1].ar));
  o.check(m[2].ar >= 0.985, "p=3 AR " + fmt("%.4f", m[2].ar));
  if (o.pass) {
    o.detail = "AR " + fmt("%.4f", m[0].ar) + "/" + fmt("%.4f", m[1].ar) + "/" + fmt("%.4f", m[2].ar);
  } else {
    o.detail += " (AR p=1..3: " + fmt("%.4f", m[0].ar) + "/" + fmt("%.4f", m[1].ar) + "/" +
                fmt("%.4f", m[2].ar) + ")";
  }
  return o;
}

// Brute-force PortOpt metrics from the spin sum and a matrix-exponential
// statevector, independent of the library's cost and simulation paths.
Outcome portopt_substitute() {
  Outcome o;
  const auto prob = problem("portopt5_synthetic.json");
  const auto& inst = *prob.portfolio;
  const auto& is = prob.ising;
  o.check(inst.q == 0.33 && inst.B == 3 && inst.A == 0.07 && inst.lam == 17.51,
          "instance parameters differ from (0.33, 3, 0.07, 17.51)");
  const int n = is.n;
  const int dim = 1 << n;

  auto spin_cost = [&](int z) {
    double c = is.constant;
    auto s = [&](int q) { return ((z >> q) & 1) ? -1.0 : 1.0; };
    for (const auto& [ij, v] : is.J) c += v * s(ij.first) * s(ij.second);
    for (int i = 0; i < n; ++i) c += is.h[i] * s(i);
    return c;
  };
  auto qubo = [&](int z) {
    double risk = 0, ret = 0, sum = 0;
    for (int i = 0; i < n; ++i) {
      const double xi = ((z >> i) & 1) ? 0.0 : 1.0;
      ret += inst.mu[i] * xi;
      sum += xi;
      for (int j = 0; j < n; ++j) risk += inst.sigma[i][j] * xi * (((z >> j) & 1) ? 0.0 : 1.0);
    }
    return inst.lam * (inst.q * risk - (1 - inst.q) * ret + inst.A * (sum - inst.B) * (sum - inst.B));
  };
  auto selected = [&](int z) { return n - std::popcount(static_cast<unsigned>(z)); };

  const double offset = spin_cost(0) - qubo(0);
  for (int z = 0; z < dim; ++z) {
    o.check(std::abs(spin_cost(z) - qubo(z) - offset) < 1e-9, "Ising form is not the QUBO");
    o.check(is.feasible(static_cast<qaoa::Bits>(z)) == (selected(z) == 3),
            "feasibility differs from Hamming weight 3");
  }
  double best = 1e300;
  for (int z = 0; z < dim; ++z)
    if (selected(z) == 3) best = std::min(best, spin_cost(z));

  const auto C = oracle::cost_operator(n, is.J, is.h, is.constant);
  const auto layers = opt::train_layers(prob, 3, {}, 0);
  std::vector<double> ars;
  for (const auto& l : layers) {
    const Eigen::MatrixXcd psi =
        oracle::qaoa_unitary(n, C, l.params.gammas, l.params.betas).col(0);
    double kept = 0, mean = 0, sp = 0;
    for (int z = 0; z < dim; ++z) {
      if (selected(z) != 3) continue;
      const double pz = std::norm(psi(z));
      kept += pz;
      mean += pz * spin_cost(z);
      if (std::abs(spin_cost(z) - best) < 1e-9) sp += pz;
    }
    const double ar = mean / kept / best;
    const auto dist = qaoa::ideal_distribution(is, l.params);
    const auto m = qaoa::metrics(is, dist);
    const std::string tag = "p=" + std::to_string(l.params.p());
    o.check(std::abs(m.ar - ar) < 1e-9, tag + " AR " + fmt("%.12f", m.ar) + " vs " + fmt("%.12f", ar));
    o.check(std::abs(m.sp - sp / kept) < 1e-9, tag + " SP mismatch");
    o.check(std::abs(m.feasible_fraction - kept) < 1e-9, tag + " kept fraction mismatch");
    ars.push_back(m.ar);
  }
  for (std::size_t i = 1; i < ars.size(); ++i) {
    o.check(ars[i] >= ars[i - 1] - 0.01, "AR decreases at p=" + std::to_string(i + 1));
  }
  if (o.pass) {
    o.detail = "AR " + fmt("%.4f", ars[0]) + "/" + fmt("%.4f", ars[1]) + "/" + fmt("%.4f", ars[2]);
  }
  return o;
}

Outcome decomposition_equivalence() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(-2 * std::numbers::pi, 2 * std::numbers::pi);
  const auto dev = load("ehningen_fragment.json");
  int cases = 0;
  double worst = 0.0;
  for (const auto& rule : lower::rule_table()) {
    const auto edge = std::find_if(dev.edges().begin(), dev.edges().end(),
                                   [&](const auto& e) { return e.flavor == rule.flavor; });
    if (edge == dev.edges().end()) {
      o.check(false, "no edge of flavor " + std::string(device::to_string(rule.flavor)));
      continue;
    }
    for (int i = 0; i < 50; ++i) {
      const double t = ang(rng);
      const auto x = lower::expand(rule.target, t, edge->control, edge->target, dev, rule.opt,
                                   rule.polarity);
      CircuitIR ref(2, 0);
      ref.add(Gate{rule.target, {0, 1}, t});
      const double d = oracle::phase_distance(circuit::unitary_of(ref),
                                              circuit::unitary_of(x.local_circuit()));
      worst = std::max(worst, d);
      ++cases;
    }
  }
  o.check(worst <= 1e-9, "max distance " + fmt("%.3g", worst));
  if (o.pass) o.detail = std::to_string(cases) + " cases, max distance " + fmt("%.3g", worst);
  return o;
}

double ar_sigma(const qaoa::IsingProblem& prob, const std::vector<double>& dist,
                std::int64_t shots) {
  const auto m = qaoa::metrics(prob, dist);
  double second = 0.0;
  for (std::size_t z = 0; z < dist.size(); ++z) {
    const double c = qaoa::cost_of_bitstring(prob, static_cast<qaoa::Bits>(z));
    second += dist[z] * c * c;
  }
  const double var = second - m.mean_cost * m.mean_cost;
  return std::sqrt(std::max(var, 0.0) / static_cast<double>(shots)) / std::abs(m.optimal_cost);
}

Outcome hardware_substitutes() {
  Outcome o;
  // (a) ZzSwapOpt on an all-ECR chain.
  const auto dev = load("synthetic8.json");
  const auto k5 = problem("k5_maxcut.json");
  const auto ecr = mapper::enumerate_chains(dev, 5, device::GateFlavor::EcrCx);
  o.check(!ecr.empty(), "no ECR 5-chain on synthetic8");
  if (!ecr.empty()) {
    const auto net = qaoa::build_swap_network(k5.ising, {{0.4}, {0.3}});
    const auto lc = lower::lower_circuit(net.circuit, ecr.front(), dev, OptLevel::ZzSwapOpt);
    o.check(lc.scheduled.cx_count == 0, "cx_count " + std::to_string(lc.scheduled.cx_count));
  }

  // (b) AR and SP against noise scale.
  const auto params = opt::train_layers(k5, 1, {}, 0).front().params;
  const std::int64_t shots = 50000;
  std::vector<opt::NoisyResult> res;
  for (double s : {0.0, 1.0, 2.0}) {
    res.push_back(opt::evaluate_noisy(dev, {0, 1, 2, 3, 4}, k5.ising, params,
                                      OptLevel::Default, {s, shots, 3, true}));
  }
  for (int i = 0; i + 1 < 3; ++i) {
    const double tol = 3 * std::hypot(ar_sigma(k5.ising, res[i].distribution, shots),
                                      ar_sigma(k5.ising, res[i + 1].distribution, shots));
    o.check(res[i + 1].metrics.ar <= res[i].metrics.ar + tol, "AR rises with noise");
    const double a = res[i].metrics.sp, b = res[i + 1].metrics.sp;
    o.check(b <= a + 3 * std::sqrt((a * (1 - a) + b * (1 - b)) / shots), "SP rises with noise");
  }

  // (c) QPT infidelity against repetitions.
  const auto frag = load("ehningen_fragment.json");
  for (auto level : {OptLevel::Default, OptLevel::ZzOpt}) {
    const auto x = lower::expand(GateKind::ZZ, 1.1, 1, 0, frag, level);
    const auto sc = circuit::schedule_with(x.local_circuit(), x.duration_ns, x.error);
    CircuitIR target(2, 0);
    target.add(Gate::zz(0, 1, 1.1));
    const auto ideal_sc = circuit::schedule_with(target, {0.0}, {0.0});
    const auto noise = sim::NoiseModel::from_device(frag, {1, 0});
    double prev = -1.0;
    for (int r : {1, 5, 10}) {
      const double inf = 1.0 - sim::process_fidelity(
                                   sim::choi_of(sim::repeat(ideal_sc, r), sim::NoiseModel::ideal(2)),
                                   sim::choi_of(sim::repeat(sc, r), noise));
      o.check(inf >= prev - 1e-12, "infidelity falls at " + std::to_string(r) + " repetitions");
      prev = inf;
    }
  }
  if (o.pass) {
    o.detail = "AR by scale " + fmt("%.4f", res[0].metrics.ar) + "/" +
               fmt("%.4f", res[1].metrics.ar) + "/" + fmt("%.4f", res[2].metrics.ar);
  }
  return o;
}

Outcome process_fidelity() {
  Outcome o;
  const auto frag = load("ehningen_fragment.json");
  const auto x = lower::expand(GateKind::ZZ, 0.9, 1, 0, frag, OptLevel::Default);
  const auto mixed = sim::choi_of(circuit::schedule_with(x.local_circuit(), x.duration_ns, x.error),
                                  sim::NoiseModel::from_device(frag, {1, 0}));
  o.check(std::abs(sim::process_fidelity(mixed, mixed) - 1.0) <= 1e-9, "F(C,C) != 1 for a noisy channel");

  CircuitIR c(2, 0);
  c.add(Gate::zz(0, 1, 0.8));
  const auto ideal = sim::choi_of(circuit::schedule_with(c, {0.0}, {0.0}), sim::NoiseModel::ideal(2));
  o.check(std::abs(sim::process_fidelity(ideal, ideal) - 1.0) <= 1e-9, "F(C,C) != 1 for a unitary");
  auto gate_noise = sim::NoiseModel::ideal(2);
  gate_noise.scale = 1.0;
  for (double e : {0.01, 0.1, 0.3, 0.6}) {
    const double lambda = e * 4.0 / 3.0;
    const auto noisy = sim::choi_of(circuit::schedule_with(c, {0.0}, {e}), gate_noise);
    const double f = sim::process_fidelity(ideal, noisy);
    o.check(std::abs(f - (1.0 - 15.0 * lambda / 16.0)) <= 1e-9, "depolarizing F " + fmt("%.12f", f));
  }
  return o;
}

Outcome chain_selection() {
  Outcome o;
  std::mt19937_64 rng(2027);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5 + trial % 6;
    const auto dev = mapper_oracle::random_device(rng, n);
    for (int k : {3, 4}) {
      const auto tmpl = mapper_oracle::complete_graph_template(k);
      for (auto s : mapper::all_strategies()) {
        const auto lvl = s == mapper::Strategy::Bipotent ? OptLevel::ZzSwapOpt : OptLevel::Default;
        const auto want = mapper_oracle::brute_force(dev, k, s, tmpl, lvl);
        std::optional<mapper::Chain> got;
        try {
          got = mapper::select(dev, k, s, tmpl, lvl).chain;
        } catch (const NoChainError&) {
        }
        o.check(got == want, "trial " + std::to_string(trial) + " k=" + std::to_string(k) + " " +
                                 std::string(mapper::to_string(s)));
        ++checked;
      }
    }
  }
  auto spec = load("ehningen.json").spec();
  std::erase_if(spec.edges, [](const device::EdgeCalibration& e) {
    return e.flavor != device::GateFlavor::EcrCx || e.flavor_source != device::FlavorSource::Paper;
  });
  const device::DeviceModel paper_ecr(spec);
  int longest = 0;
  for (int k = 2; k <= paper_ecr.num_qubits(); ++k) {
    if (mapper::enumerate_chains(paper_ecr, k, device::GateFlavor::EcrCx).empty()) break;
    longest = k;
  }
  o.check(longest == 5, "longest paper-only ECR chain " + std::to_string(longest));
  if (o.pass) o.detail = std::to_string(checked) + " selections, longest ECR chain 5";
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto dev = load("synthetic5.json");
  const auto k5 = problem("k5_maxcut.json");
  opt::BenchmarkConfig cfg;
  cfg.strategies = mapper::all_strategies();
  cfg.opt_levels = {OptLevel::Default, OptLevel::ZzOpt, OptLevel::ZzSwapOpt};
  cfg.p_min = 1;
  cfg.p_max = 2;
  cfg.noisy.shots = 20000;
  cfg.noisy.seed = 99;
  auto csv = [&](int jobs) {
    cfg.jobs = jobs;
    std::ostringstream os;
    opt::write_csv(os, opt::run_benchmark(dev, k5, cfg));
    return os.str();
  };
  const std::string a = csv(1), b = csv(1), c = csv(4);
  o.check(a == b, "rerun differs");
  o.check(a == c, "jobs=4 differs from jobs=1");
  if (o.pass) o.detail = std::to_string(std::count(a.begin(), a.end(), '\n')) + " lines identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "depth formula", depth_formula},
      {2, "swap-network unitary", swap_network_unitary},
      {3, "duration table", duration_table},
      {4, "flavor summary", table_one},
      {5, "K5 noiseless AR/SP", k5_noiseless},
      {6, "PortOpt substitute", portopt_substitute},
      {7, "decomposition equivalence", decomposition_equivalence},
      {8, "noise-model ordering", hardware_substitutes},
      {9, "process fidelity", process_fidelity},
      {10, "chain selection", chain_selection},
      {11, "benchmark determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s %2d %s (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
