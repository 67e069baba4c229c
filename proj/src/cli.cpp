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


#include "bqaoa/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bqaoa/circuit.hpp"
#include "bqaoa/device.hpp"
#include "bqaoa/errors.hpp"
#include "bqaoa/lower.hpp"
#include "bqaoa/mapper.hpp"
#include "bqaoa/opt.hpp"
#include "bqaoa/qaoa.hpp"
#include "bqaoa/sim.hpp"

namespace bqaoa::cli {

using json = nlohmann::json;

std::pair<int, int> parse_range(const std::string& s) {
  auto parse_int = [&](std::string_view t) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw ConfigError("bad range \"" + s + "\", expected N or A..B");
    }
    return v;
  };
  const auto dots = s.find("..");
  std::pair<int, int> r;
  if (dots == std::string::npos) {
    r = {parse_int(s), parse_int(s)};
  } else {
    r = {parse_int(std::string_view(s).substr(0, dots)),
         parse_int(std::string_view(s).substr(dots + 2))};
  }
  if (r.first < 1 || r.second < r.first) {
    throw ConfigError("range \"" + s + "\" must satisfy 1 <= A <= B");
  }
  return r;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    if constexpr (std::is_floating_point_v<T>) {
      s += num(v[i]);
    } else {
      s += std::to_string(v[i]);
    }
  }
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

struct Output {
  std::string format;
  std::string path;
};

void add_output(CLI::App* sub, Output& o, std::string def,
                std::vector<std::string> allowed) {
  o.format = std::move(def);
  sub->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember(allowed))
      ->capture_default_str();
  sub->add_option("--out,-o", o.path, "Write to this file instead of stdout");
}

void emit(const Output& o, std::ostream& out, const std::string& text) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.path);
  if (!f) throw ConfigError("cannot write " + o.path);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::uint64_t resolve_seed(const std::string& flag) {
  std::string text = flag;
  if (text.empty()) {
    const char* env = std::getenv("BQAOA_SEED");
    if (env == nullptr || *env == '\0') return 0;
    text = env;
  }
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("seed must be a non-negative integer, got \"" + text + "\"");
  }
  return v;
}

// Parameters given explicitly, or trained noiselessly for p layers.
struct ParamArgs {
  std::vector<double> gammas;
  std::vector<double> betas;
  int p = 1;
};

void add_params(CLI::App* sub, ParamArgs& a) {
  sub->add_option("--gammas", a.gammas, "Cost angles, comma separated")->delimiter(',');
  sub->add_option("--betas", a.betas, "Mixer angles, comma separated")->delimiter(',');
  sub->add_option("--p", a.p, "Layers to train when angles are not given")
      ->capture_default_str();
}

qaoa::ParamVector resolve_params(const qaoa::Problem& prob, const ParamArgs& a,
                                 std::uint64_t seed) {
  if (!a.gammas.empty() || !a.betas.empty()) {
    qaoa::ParamVector v{a.gammas, a.betas};
    v.validate();
    return v;
  }
  return opt::train_layers(prob, a.p, {}, seed).back().params;
}

mapper::Strategy strategy_of(const std::string& s) { return mapper::parse_strategy(s); }

lower::OptLevel family_opt(mapper::Strategy s) {
  return s == mapper::Strategy::Bipotent ? lower::OptLevel::ZzSwapOpt
                                         : lower::OptLevel::Default;
}

std::vector<int> resolve_chain(const device::DeviceModel& dev,
                               const std::vector<int>& chain,
                               const std::string& strategy,
                               const circuit::CircuitIR& logical) {
  if (!chain.empty()) {
    if (static_cast<int>(chain.size()) != logical.num_qubits) {
      throw LengthError("chain has " + std::to_string(chain.size()) +
                        " qubits, circuit has " +
                        std::to_string(logical.num_qubits));
    }
    return chain;
  }
  const auto s = strategy_of(strategy);
  return mapper::select(dev, logical.num_qubits, s, logical, family_opt(s)).chain;
}

void warn(std::ostream& err, const sim::NoiseModel& m) {
  for (const auto& w : m.warnings) err << "warning: " << w << "\n";
}

std::string report_csv(const lower::LoweredCircuit& lc) {
  std::ostringstream os;
  os << "kind,qubits,flavor,polarity,form,duration_ns,cx_cost,error\n";
  for (const auto& r : lc.report) {
    os << circuit::to_string(r.kind) << ',' << join(r.qubits, '-') << ','
       << r.flavor << ',' << r.polarity << ',' << r.form << ','
       << num(r.duration_ns) << ',' << r.cx_cost << ',' << num(r.error) << '\n';
  }
  return os.str();
}

json gates_json(const circuit::CircuitIR& c) {
  json gates = json::array();
  for (const auto& g : c.gates) {
    json row = {{"kind", circuit::to_string(g.kind)}, {"qubits", g.qubits}};
    if (circuit::is_parametric(g.kind)) row["theta"] = g.theta;
    if (g.kind == circuit::GateKind::Measure) row["clbit"] = g.clbit;
    gates.push_back(row);
  }
  return gates;
}

circuit::GateKind parse_two_qubit_gate(const std::string& s) {
  std::string u;
  for (char c : s) {
    if (c != '_' && c != '-') u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  const auto k = circuit::parse_kind(u);
  if (k != circuit::GateKind::ZZ && k != circuit::GateKind::ZzSwap &&
      k != circuit::GateKind::CZ && k != circuit::GateKind::Swap) {
    throw ConfigError("qpt gate must be zz|zz_swap|cz|swap, got \"" + s + "\"");
  }
  return k;
}

circuit::CircuitIR read_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open circuit file " + path);
  return circuit::parse_text(in);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Swap-network QAOA compiler and evaluator for bipotent devices",
               "bqaoa"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // device summarize
  auto* device_cmd = app.add_subcommand("device", "Device calibration tools");
  device_cmd->require_subcommand(1);
  auto* summarize_cmd = device_cmd->add_subcommand("summarize", "Per-flavor and per-class means");
  std::string sum_device, sum_seed;
  Output sum_out;
  summarize_cmd->add_option("--device", sum_device, "Device JSON")->required();
  summarize_cmd->add_option("--seed", sum_seed, "Seed (unused, accepted for uniformity)");
  add_output(summarize_cmd, sum_out, "json", {"json", "csv"});

  // chains select
  auto* chains_cmd = app.add_subcommand("chains", "Chain enumeration and selection");
  chains_cmd->require_subcommand(1);
  auto* select_cmd = chains_cmd->add_subcommand("select", "Select a chain for a problem");
  std::string sel_device, sel_problem, sel_strategy = "global", sel_opt, sel_seed;
  ParamArgs sel_params;
  Output sel_out;
  select_cmd->add_option("--device", sel_device, "Device JSON")->required();
  select_cmd->add_option("--problem", sel_problem, "Problem JSON")->required();
  select_cmd->add_option("--strategy", sel_strategy, "ecr|direct|global|bipotent")
      ->capture_default_str();
  select_cmd->add_option("--opt", sel_opt, "Opt level used for scoring (default by strategy)");
  select_cmd->add_option("--seed", sel_seed, "Seed (falls back to BQAOA_SEED)");
  add_params(select_cmd, sel_params);
  add_output(select_cmd, sel_out, "json", {"json", "csv"});

  // circuit build / lower
  auto* circuit_cmd = app.add_subcommand("circuit", "Logical and lowered circuits");
  circuit_cmd->require_subcommand(1);
  auto* build_cmd = circuit_cmd->add_subcommand("build", "Build the swap-network circuit");
  std::string build_problem, build_seed;
  ParamArgs build_params;
  Output build_out;
  build_cmd->add_option("--problem", build_problem, "Problem JSON")->required();
  build_cmd->add_option("--seed", build_seed, "Seed (falls back to BQAOA_SEED)");
  add_params(build_cmd, build_params);
  add_output(build_cmd, build_out, "text", {"text", "json", "csv"});

  auto* lower_cmd = circuit_cmd->add_subcommand("lower", "Lower a logical circuit onto a chain");
  std::string low_device, low_circuit, low_problem, low_opt = "default", low_seed;
  std::vector<int> low_chain;
  ParamArgs low_params;
  Output low_out;
  lower_cmd->add_option("--device", low_device, "Device JSON")->required();
  auto* low_c = lower_cmd->add_option("--circuit", low_circuit, "Logical circuit text file");
  auto* low_p = lower_cmd->add_option("--problem", low_problem, "Problem JSON");
  low_c->excludes(low_p);
  lower_cmd->add_option("--chain", low_chain, "Physical qubits, comma separated")
      ->delimiter(',')
      ->required();
  lower_cmd->add_option("--opt", low_opt, "default|zzopt|zzswapopt")->capture_default_str();
  lower_cmd->add_option("--seed", low_seed, "Seed (falls back to BQAOA_SEED)");
  add_params(lower_cmd, low_params);
  add_output(lower_cmd, low_out, "json", {"json", "csv"});

  // estimate
  auto* estimate_cmd = app.add_subcommand("estimate", "Duration, CX count and fidelity score");
  std::string est_device, est_circuit, est_problem, est_strategy = "global",
                                                    est_opt = "default", est_seed;
  std::vector<int> est_chain;
  ParamArgs est_params;
  Output est_out;
  estimate_cmd->add_option("--device", est_device, "Device JSON")->required();
  auto* est_c = estimate_cmd->add_option("--circuit", est_circuit, "Logical circuit text file");
  auto* est_p = estimate_cmd->add_option("--problem", est_problem, "Problem JSON");
  est_c->excludes(est_p);
  estimate_cmd->add_option("--chain", est_chain, "Physical qubits, comma separated")
      ->delimiter(',');
  estimate_cmd->add_option("--strategy", est_strategy, "Chain strategy when --chain is absent")
      ->capture_default_str();
  estimate_cmd->add_option("--opt", est_opt, "default|zzopt|zzswapopt")->capture_default_str();
  estimate_cmd->add_option("--seed", est_seed, "Seed (falls back to BQAOA_SEED)");
  add_params(estimate_cmd, est_params);
  add_output(estimate_cmd, est_out, "json", {"json", "csv"});

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Noisy simulation with sampling");
  std::string sim_device, sim_problem, sim_strategy = "global", sim_opt = "default", sim_seed;
  std::vector<int> sim_chain;
  ParamArgs sim_params;
  std::int64_t sim_shots = 50000;
  double sim_scale = 1.0;
  bool sim_raw = false;
  Output sim_out;
  simulate_cmd->add_option("--device", sim_device, "Device JSON")->required();
  simulate_cmd->add_option("--problem", sim_problem, "Problem JSON")->required();
  simulate_cmd->add_option("--chain", sim_chain, "Physical qubits, comma separated")
      ->delimiter(',');
  simulate_cmd->add_option("--strategy", sim_strategy, "Chain strategy when --chain is absent")
      ->capture_default_str();
  simulate_cmd->add_option("--opt", sim_opt, "default|zzopt|zzswapopt")->capture_default_str();
  simulate_cmd->add_option("--shots", sim_shots, "Shots")->capture_default_str();
  simulate_cmd->add_option("--noise-scale", sim_scale, "Noise scale s >= 0")->capture_default_str();
  simulate_cmd->add_flag("--no-mitigation", sim_raw, "Skip readout mitigation");
  simulate_cmd->add_option("--seed", sim_seed, "Seed (falls back to BQAOA_SEED)");
  add_params(simulate_cmd, sim_params);
  add_output(simulate_cmd, sim_out, "json", {"json", "csv"});

  // optimize
  auto* optimize_cmd = app.add_subcommand("optimize", "Noiseless parameter training");
  std::string opt_problem, opt_range = "1", opt_seed, opt_method = "nelder-mead";
  int opt_evals = opt::OptimizerConfig{}.max_evals;
  int opt_grid = opt::OptimizerConfig{}.initial_grid;
  Output opt_out;
  optimize_cmd->add_option("--problem", opt_problem, "Problem JSON")->required();
  optimize_cmd->add_option("--p", opt_range, "Layer count or range A..B")->capture_default_str();
  optimize_cmd->add_option("--method", opt_method, "nelder-mead|coordinate-grid")
      ->capture_default_str();
  optimize_cmd->add_option("--max-evals", opt_evals, "Evaluation budget per p")
      ->capture_default_str();
  optimize_cmd->add_option("--grid", opt_grid, "Grid points per angle axis")
      ->capture_default_str();
  optimize_cmd->add_option("--seed", opt_seed, "Seed (falls back to BQAOA_SEED)");
  add_output(optimize_cmd, opt_out, "json", {"json", "csv"});

  // benchmark
  auto* bench_cmd = app.add_subcommand("benchmark", "Strategy x opt level x p sweep");
  std::string b_device, b_problem, b_range = "1..3", b_strategies = "all",
                                   b_opts = "all", b_seed, b_method = "nelder-mead",
                                   b_panels;
  std::int64_t b_shots = 50000;
  double b_scale = 1.0;
  int b_jobs = 1;
  int b_evals = opt::OptimizerConfig{}.max_evals;
  bool b_raw = false;
  Output b_out;
  bench_cmd->add_option("--device", b_device, "Device JSON")->required();
  bench_cmd->add_option("--problem", b_problem, "Problem JSON")->required();
  bench_cmd->add_option("--p", b_range, "Layer range A..B")->capture_default_str();
  bench_cmd->add_option("--strategies", b_strategies, "all or a comma list")
      ->capture_default_str();
  bench_cmd->add_option("--opt-levels", b_opts, "all or a comma list")->capture_default_str();
  bench_cmd->add_option("--shots", b_shots, "Shots per cell")->capture_default_str();
  bench_cmd->add_option("--noise-scale", b_scale, "Noise scale s >= 0")->capture_default_str();
  bench_cmd->add_option("--jobs", b_jobs, "Concurrent cells")->capture_default_str();
  bench_cmd->add_option("--method", b_method, "nelder-mead|coordinate-grid")
      ->capture_default_str();
  bench_cmd->add_option("--max-evals", b_evals, "Training budget per p")->capture_default_str();
  bench_cmd->add_option("--panels", b_panels, "Directory for per-panel CSV files");
  bench_cmd->add_flag("--no-mitigation", b_raw, "Skip readout mitigation");
  bench_cmd->add_option("--seed", b_seed, "Seed (falls back to BQAOA_SEED)");
  add_output(bench_cmd, b_out, "csv", {"csv", "json"});

  // qpt
  auto* qpt_cmd = app.add_subcommand("qpt", "Gate infidelity from exact Choi matrices");
  std::string q_device, q_gate = "zz", q_opt = "zzopt", q_seed;
  std::vector<int> q_edge, q_reps = {1};
  std::vector<double> q_angles;
  int q_num_angles = 16;
  double q_scale = 1.0;
  Output q_out;
  qpt_cmd->add_option("--device", q_device, "Device JSON")->required();
  qpt_cmd->add_option("--gate", q_gate, "zz|zz_swap|cz|swap")->capture_default_str();
  qpt_cmd->add_option("--edge", q_edge, "Qubit pair a,b")->delimiter(',')->required()->expected(2);
  qpt_cmd->add_option("--opt", q_opt, "Optimized level compared with default")
      ->capture_default_str();
  qpt_cmd->add_option("--repetitions", q_reps, "Repetition counts, comma separated")
      ->delimiter(',');
  qpt_cmd->add_option("--angles", q_angles, "Angles in radians, comma separated")
      ->delimiter(',');
  qpt_cmd->add_option("--num-angles", q_num_angles, "Evenly spaced angles in (0, pi]")
      ->capture_default_str();
  qpt_cmd->add_option("--noise-scale", q_scale, "Noise scale s >= 0")->capture_default_str();
  qpt_cmd->add_option("--seed", q_seed, "Seed (unused, accepted for uniformity)");
  add_output(qpt_cmd, q_out, "csv", {"csv", "json"});

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kConfig;
  }

  try {
    if (summarize_cmd->parsed()) {
      resolve_seed(sum_seed);
      const auto s = device::summarize(device::load_device(sum_device));
      if (sum_out.format == "json") {
        emit(sum_out, out, dump(device::summary_to_json(s)));
      } else {
        std::ostringstream os;
        os << "flavor,edges,mean_cx_error_pct,mean_cx_duration_ns\n";
        os << "ecr," << s.ecr.count << ',' << num(100 * s.ecr.cx_error) << ','
           << num(s.ecr.cx_duration_ns) << '\n';
        os << "direct," << s.direct.count << ',' << num(100 * s.direct.cx_error) << ','
           << num(s.direct.cx_duration_ns) << '\n';
        os << "reduction_pct,," << num(s.error_reduction_pct) << ','
           << num(s.duration_reduction_pct) << '\n';
        emit(sum_out, out, os.str());
      }
    } else if (select_cmd->parsed()) {
      const auto seed = resolve_seed(sel_seed);
      const auto dev = device::load_device(sel_device);
      const auto prob = qaoa::load_problem(sel_problem);
      const auto params = resolve_params(prob, sel_params, seed);
      const auto s = strategy_of(sel_strategy);
      const auto level = sel_opt.empty() ? family_opt(s) : lower::parse_opt_level(sel_opt);
      const auto tmpl = qaoa::build_swap_network(prob.ising, params).circuit;
      const auto sel = mapper::select(dev, prob.ising.n, s, tmpl, level);
      if (sel_out.format == "json") {
        emit(sel_out, out, dump(mapper::selection_to_json(sel)));
      } else {
        std::vector<std::string> fl;
        for (auto f : sel.flavors) fl.emplace_back(device::to_string(f));
        std::string flavors;
        for (std::size_t i = 0; i < fl.size(); ++i) flavors += (i ? ";" : "") + fl[i];
        emit(sel_out, out,
             "strategy,chain,fidelity_score,duration_ns,cx_count,flavors\n" +
                 std::string(mapper::to_string(s)) + ',' + join(sel.chain, '-') + ',' +
                 num(sel.fidelity_score) + ',' + num(sel.duration_ns) + ',' +
                 std::to_string(sel.cx_count) + ',' + flavors + '\n');
      }
    } else if (build_cmd->parsed()) {
      const auto seed = resolve_seed(build_seed);
      const auto prob = qaoa::load_problem(build_problem);
      const auto net = qaoa::build_swap_network(prob.ising, resolve_params(prob, build_params, seed));
      if (build_out.format == "text") {
        emit(build_out, out, circuit::to_text(net.circuit));
      } else if (build_out.format == "json") {
        emit(build_out, out,
             dump({{"qubits", net.circuit.num_qubits},
                   {"clbits", net.circuit.num_clbits},
                   {"wire_of", net.wire_of},
                   {"depth", circuit::depth(net.circuit)},
                   {"gates", gates_json(net.circuit)}}));
      } else {
        std::ostringstream os;
        os << "index,kind,qubits,theta,clbit\n";
        for (std::size_t i = 0; i < net.circuit.gates.size(); ++i) {
          const auto& g = net.circuit.gates[i];
          os << i << ',' << circuit::to_string(g.kind) << ',' << join(g.qubits, '-') << ','
             << (circuit::is_parametric(g.kind) ? num(g.theta) : "") << ','
             << (g.kind == circuit::GateKind::Measure ? std::to_string(g.clbit) : "") << '\n';
        }
        emit(build_out, out, os.str());
      }
    } else if (lower_cmd->parsed()) {
      const auto seed = resolve_seed(low_seed);
      const auto dev = device::load_device(low_device);
      circuit::CircuitIR logical;
      if (!low_circuit.empty()) {
        logical = read_circuit(low_circuit);
      } else if (!low_problem.empty()) {
        const auto prob = qaoa::load_problem(low_problem);
        logical = qaoa::build_swap_network(prob.ising, resolve_params(prob, low_params, seed)).circuit;
      } else {
        throw ConfigError("circuit lower needs --circuit or --problem");
      }
      const auto lc = lower::lower_circuit(logical, low_chain, dev,
                                           lower::parse_opt_level(low_opt));
      emit(low_out, out, low_out.format == "json" ? dump(lower::report_to_json(lc))
                                                  : report_csv(lc));
    } else if (estimate_cmd->parsed()) {
      const auto seed = resolve_seed(est_seed);
      const auto dev = device::load_device(est_device);
      circuit::CircuitIR logical;
      if (!est_circuit.empty()) {
        logical = read_circuit(est_circuit);
      } else if (!est_problem.empty()) {
        const auto prob = qaoa::load_problem(est_problem);
        logical = qaoa::build_swap_network(prob.ising, resolve_params(prob, est_params, seed)).circuit;
      } else {
        throw ConfigError("estimate needs --circuit or --problem");
      }
      const auto chain = resolve_chain(dev, est_chain, est_strategy, logical);
      const auto lc = lower::lower_circuit(logical, chain, dev, lower::parse_opt_level(est_opt));
      const double score = mapper::fidelity_score(dev, chain, lc.scheduled);
      if (est_out.format == "json") {
        json j = lower::report_to_json(lc);
        j["duration_ns"] = lc.scheduled.total_duration_ns;
        j["fidelity_score"] = score;
        j["opt_level"] = est_opt;
        emit(est_out, out, dump(j));
      } else {
        emit(est_out, out,
             "chain,duration_ns,cx_count,fidelity_score\n" + join(chain, '-') + ',' +
                 num(lc.scheduled.total_duration_ns) + ',' +
                 std::to_string(lc.scheduled.cx_count) + ',' + num(score) + "\n\n" +
                 report_csv(lc));
      }
    } else if (simulate_cmd->parsed()) {
      const auto seed = resolve_seed(sim_seed);
      const auto dev = device::load_device(sim_device);
      const auto prob = qaoa::load_problem(sim_problem);
      const auto params = resolve_params(prob, sim_params, seed);
      const auto logical = qaoa::build_swap_network(prob.ising, params).circuit;
      const auto chain = resolve_chain(dev, sim_chain, sim_strategy, logical);
      warn(err, sim::NoiseModel::from_device(dev, chain, sim_scale));
      const auto r = opt::evaluate_noisy(dev, chain, prob.ising, params,
                                         lower::parse_opt_level(sim_opt),
                                         {sim_scale, sim_shots, seed, !sim_raw});
      const int n = prob.ising.n;
      if (sim_out.format == "json") {
        json counts = json::object(), dist = json::object();
        for (std::size_t z = 0; z < r.counts.size(); ++z) {
          if (r.counts[z] != 0) counts[circuit::bitstring(z, n)] = r.counts[z];
          if (r.distribution[z] != 0.0) dist[circuit::bitstring(z, n)] = r.distribution[z];
        }
        emit(sim_out, out,
             dump({{"chain", chain},
                   {"gammas", params.gammas},
                   {"betas", params.betas},
                   {"bit_order", "qubit 0 rightmost"},
                   {"counts", counts},
                   {sim_raw ? "distribution" : "mitigated", dist},
                   {"ar", r.metrics.ar},
                   {"sp", r.metrics.sp},
                   {"mean_cost", r.metrics.mean_cost},
                   {"optimal_cost", r.metrics.optimal_cost},
                   {"sign_consistent", r.metrics.sign_consistent},
                   {"duration_ns", r.duration_ns},
                   {"cx_count", r.cx_count},
                   {"fidelity_score", r.fidelity_score},
                   {"shots", sim_shots},
                   {"seed", seed},
                   {"noise_scale", sim_scale}}));
      } else {
        std::ostringstream os;
        os << "bitstring,count,probability\n";
        for (std::size_t z = 0; z < r.counts.size(); ++z) {
          os << circuit::bitstring(z, n) << ',' << r.counts[z] << ','
             << num(r.distribution[z]) << '\n';
        }
        emit(sim_out, out, os.str());
      }
    } else if (optimize_cmd->parsed()) {
      const auto seed = resolve_seed(opt_seed);
      const auto prob = qaoa::load_problem(opt_problem);
      const auto [lo, hi] = parse_range(opt_range);
      opt::OptimizerConfig cfg;
      cfg.method = opt::parse_method(opt_method);
      cfg.max_evals = opt_evals;
      cfg.initial_grid = opt_grid;
      const auto results = opt::train_layers(prob, hi, cfg, seed);
      json rows = json::array();
      std::ostringstream os;
      os << "problem,p,gammas,betas,ar,sp,evaluations,budget_exhausted,optimizer\n";
      for (const auto& r : results) {
        if (r.params.p() < lo) continue;
        const auto m = qaoa::metrics(prob.ising, qaoa::ideal_distribution(prob.ising, r.params));
        rows.push_back({{"p", r.params.p()},
                        {"gammas", r.params.gammas},
                        {"betas", r.params.betas},
                        {"ar", m.ar},
                        {"sp", m.sp},
                        {"evaluations", r.trace.size()},
                        {"budget_exhausted", r.budget_exhausted}});
        os << prob.id << ',' << r.params.p() << ',' << join(r.params.gammas, ';') << ','
           << join(r.params.betas, ';') << ',' << num(m.ar) << ',' << num(m.sp) << ','
           << r.trace.size() << ',' << (r.budget_exhausted ? "true" : "false") << ','
           << opt::optimizer_label(cfg) << '\n';
      }
      emit(opt_out, out,
           opt_out.format == "json"
               ? dump({{"problem", prob.id}, {"optimizer", opt::optimizer_label(cfg)},
                       {"seed", seed}, {"results", rows}})
               : os.str());
    } else if (bench_cmd->parsed()) {
      const auto seed = resolve_seed(b_seed);
      const auto dev = device::load_device(b_device);
      const auto prob = qaoa::load_problem(b_problem);
      opt::BenchmarkConfig cfg;
      std::tie(cfg.p_min, cfg.p_max) = parse_range(b_range);
      if (b_strategies == "all") {
        cfg.strategies = mapper::all_strategies();
      } else {
        for (const auto& s : split(b_strategies, ',')) cfg.strategies.push_back(strategy_of(s));
      }
      if (b_opts == "all") {
        cfg.opt_levels = {lower::OptLevel::Default, lower::OptLevel::ZzOpt,
                          lower::OptLevel::ZzSwapOpt};
      } else {
        for (const auto& s : split(b_opts, ',')) cfg.opt_levels.push_back(lower::parse_opt_level(s));
      }
      cfg.optimizer.method = opt::parse_method(b_method);
      cfg.optimizer.max_evals = b_evals;
      cfg.noisy = {b_scale, b_shots, seed, !b_raw};
      cfg.jobs = b_jobs;
      const auto runs = opt::run_benchmark(dev, prob, cfg);
      if (b_out.format == "csv") {
        std::ostringstream os;
        opt::write_csv(os, runs);
        emit(b_out, out, os.str());
      } else {
        json rows = json::array();
        for (const auto& r : runs) {
          json row = {{"problem", r.problem},
                      {"strategy", mapper::to_string(r.strategy)},
                      {"opt_level", lower::to_string(r.opt_level)},
                      {"p", r.p},
                      {"chain", r.chain},
                      {"gammas", r.params.gammas},
                      {"betas", r.params.betas},
                      {"shots", r.shots},
                      {"seed", r.seed},
                      {"optimizer", r.optimizer}};
          if (r.feasible) {
            row.update({{"ar", r.ar},
                        {"sp", r.sp},
                        {"duration_ns", r.duration_ns},
                        {"cx_count", r.cx_count},
                        {"fidelity_score", r.fidelity_score}});
          } else {
            row.update({{"ar", "NA"}, {"reason", r.reason}});
          }
          rows.push_back(row);
        }
        emit(b_out, out, dump(rows));
      }
      if (!b_panels.empty()) opt::write_panels(b_panels, runs);
    } else if (qpt_cmd->parsed()) {
      resolve_seed(q_seed);
      const auto dev = device::load_device(q_device);
      const auto kind = parse_two_qubit_gate(q_gate);
      const int a = q_edge[0], b = q_edge[1];
      if (dev.find_edge(a, b) == nullptr) {
        throw MissingEdgeError("no device edge between " + std::to_string(a) + " and " +
                               std::to_string(b));
      }
      std::vector<double> angles = q_angles;
      if (angles.empty()) {
        if (q_num_angles < 1) throw ConfigError("--num-angles must be >= 1");
        for (int i = 1; i <= q_num_angles; ++i) {
          angles.push_back(std::numbers::pi * i / q_num_angles);
        }
      }
      for (int r : q_reps) {
        if (r < 1) throw ConfigError("repetitions must be >= 1");
      }
      std::vector<lower::OptLevel> levels = {lower::OptLevel::Default};
      if (lower::parse_opt_level(q_opt) != lower::OptLevel::Default) {
        levels.push_back(lower::parse_opt_level(q_opt));
      }
      const auto noise = sim::NoiseModel::from_device(dev, {a, b}, q_scale);
      warn(err, noise);
      std::ostringstream os;
      json rows = json::array();
      os << "gate,edge,variant,opt_level,polarity,theta,repetitions,infidelity,"
            "duration_ns,cx_count\n";
      for (auto level : levels) {
        for (auto pol : {lower::Polarity::CT, lower::Polarity::TC}) {
          const std::string variant = std::string(lower::to_string(level)) + "-" +
                                      std::string(lower::to_string(pol));
          for (double th : angles) {
            const auto e = lower::expand(kind, th, a, b, dev, level, pol);
            const auto sc = circuit::schedule_with(e.local_circuit(), e.duration_ns, e.error);
            circuit::CircuitIR target(2, 0);
            target.add(circuit::Gate{kind, {0, 1}, th});
            const auto ideal_sc = circuit::schedule_with(target, {0.0}, {0.0});
            for (int r : q_reps) {
              const double inf =
                  1.0 - sim::process_fidelity(
                            sim::choi_of(sim::repeat(ideal_sc, r), sim::NoiseModel::ideal(2)),
                            sim::choi_of(sim::repeat(sc, r), noise));
              os << circuit::to_string(kind) << ',' << a << '-' << b << ',' << variant << ','
                 << lower::to_string(level) << ',' << lower::to_string(pol) << ',' << num(th)
                 << ',' << r << ',' << num(inf) << ',' << num(e.span_ns) << ','
                 << e.cx_count << '\n';
              rows.push_back({{"gate", circuit::to_string(kind)},
                              {"edge", {a, b}},
                              {"variant", variant},
                              {"opt_level", lower::to_string(level)},
                              {"polarity", lower::to_string(pol)},
                              {"theta", th},
                              {"repetitions", r},
                              {"infidelity", inf},
                              {"duration_ns", e.span_ns},
                              {"cx_count", e.cx_count}});
            }
          }
        }
      }
      emit(q_out, out, q_out.format == "csv" ? os.str() : dump(rows));
    }
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}

}  // namespace bqaoa::cli
