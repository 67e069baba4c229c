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
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <thread>

#include "bqaoa/errors.hpp"
#include "bqaoa/opt.hpp"
#include "bqaoa/sim.hpp"

namespace bqaoa::opt {

NoisyResult evaluate_noisy(const device::DeviceModel& dev,
                           const std::vector<int>& chain,
                           const qaoa::IsingProblem& prob,
                           const qaoa::ParamVector& params, lower::OptLevel opt,
                           const NoisySettings& settings) {
  const auto net = qaoa::build_swap_network(prob, params);
  const auto lc = lower::lower_circuit(net.circuit, chain, dev, opt);
  const auto local = lower::localize(lc.scheduled, chain);
  const auto noise = sim::NoiseModel::from_device(dev, chain, settings.noise_scale);
  const auto rho = sim::evolve(local, noise);
  const auto confusion = noise.confusions();
  const auto counts =
      sim::sample(rho.probabilities(), settings.shots, confusion, settings.seed);
  std::vector<double> per_qubit;
  if (settings.mitigate) {
    per_qubit = sim::mitigate_readout(counts, confusion).clipped;
  } else {
    per_qubit.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      per_qubit[i] = static_cast<double>(counts[i]) /
                     static_cast<double>(settings.shots);
    }
  }
  NoisyResult r;
  r.distribution = sim::to_clbits(per_qubit, local.circuit);
  std::vector<double> raw(counts.begin(), counts.end());
  for (double c : sim::to_clbits(raw, local.circuit)) {
    r.counts.push_back(static_cast<std::int64_t>(std::llround(c)));
  }
  r.metrics = qaoa::metrics(prob, r.distribution);
  r.duration_ns = lc.scheduled.total_duration_ns;
  r.cx_count = lc.scheduled.cx_count;
  r.fidelity_score = mapper::fidelity_score(dev, chain, lc.scheduled);
  return r;
}

std::vector<OptimizeResult> train_layers(const qaoa::Problem& problem, int p_max,
                                         const OptimizerConfig& cfg,
                                         std::uint64_t seed) {
  if (p_max < 1) throw ConfigError("p must be >= 1");
  std::vector<OptimizeResult> out;
  std::optional<qaoa::ParamVector> warm;
  const Evaluator ideal = ideal_evaluator(problem.ising);
  for (int p = 1; p <= p_max; ++p) {
    OptimizerConfig oc = cfg;
    oc.seed = cell_seed(seed, problem.id + "|train|" + std::to_string(p));
    out.push_back(optimize_params(problem.ising, p, ideal, oc, warm));
    warm = out.back().params;
  }
  return out;
}

void BenchmarkConfig::validate() const {
  if (strategies.empty()) throw ConfigError("no strategies requested");
  if (opt_levels.empty()) throw ConfigError("no opt levels requested");
  if (p_min < 1 || p_max < p_min) {
    throw ConfigError("p range must satisfy 1 <= min <= max, got " +
                      std::to_string(p_min) + ".." + std::to_string(p_max));
  }
  if (noisy.shots < 1) throw ConfigError("shots must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  optimizer.validate();
}

std::uint64_t cell_seed(std::uint64_t master, const std::string& key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = master ^ h;  // splitmix64 finalizer
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

int rank(mapper::Strategy s) { return static_cast<int>(s); }
int rank(lower::OptLevel o) { return static_cast<int>(o); }

std::string cell_key(const BenchmarkRun& r) {
  return r.problem + "|" + std::string(mapper::to_string(r.strategy)) + "|" +
         std::string(lower::to_string(r.opt_level)) + "|" + std::to_string(r.p);
}

}  // namespace

std::vector<BenchmarkRun> run_benchmark(const device::DeviceModel& dev,
                                        const qaoa::Problem& problem,
                                        const BenchmarkConfig& cfg) {
  cfg.validate();
  const auto& prob = problem.ising;
  const std::string label = optimizer_label(cfg.optimizer);

  // Noiseless training does not depend on the chain.
  std::map<int, qaoa::ParamVector> trained;
  for (const auto& res : train_layers(problem, cfg.p_max, cfg.optimizer, cfg.noisy.seed)) {
    trained[res.params.p()] = res.params;
  }
  const auto tmpl = qaoa::build_swap_network(prob, trained.at(1)).circuit;

  struct Family {
    std::optional<mapper::ChainSelection> sel;
    std::string reason;
  };
  std::map<mapper::Strategy, Family> families;
  for (auto s : cfg.strategies) {
    if (families.count(s)) continue;
    const auto opt = s == mapper::Strategy::Bipotent ? lower::OptLevel::ZzSwapOpt
                                                     : lower::OptLevel::Default;
    Family fam;
    try {
      fam.sel = mapper::select(dev, prob.n, s, tmpl, opt);
    } catch (const InfeasibleError& e) {
      fam.reason = e.what();
    }
    families[s] = std::move(fam);
  }

  std::vector<BenchmarkRun> runs;
  for (const auto& [s, fam] : families) {
    std::vector<lower::OptLevel> opts = cfg.opt_levels;
    std::sort(opts.begin(), opts.end(),
              [](auto a, auto b) { return rank(a) < rank(b); });
    opts.erase(std::unique(opts.begin(), opts.end()), opts.end());
    for (auto o : opts) {
      for (int p = cfg.p_min; p <= cfg.p_max; ++p) {
        BenchmarkRun r;
        r.problem = problem.id;
        r.strategy = s;
        r.opt_level = o;
        r.p = p;
        r.params = trained.at(p);
        r.shots = cfg.noisy.shots;
        r.seed = cell_seed(cfg.noisy.seed, cell_key(r));
        r.optimizer = label;
        if (fam.sel) {
          r.chain = fam.sel->chain;
        } else {
          r.feasible = false;
          r.reason = fam.reason;
        }
        runs.push_back(std::move(r));
      }
    }
  }
  std::sort(runs.begin(), runs.end(), [](const BenchmarkRun& a, const BenchmarkRun& b) {
    return std::tuple(rank(a.strategy), rank(a.opt_level), a.p) <
           std::tuple(rank(b.strategy), rank(b.opt_level), b.p);
  });

  std::vector<std::exception_ptr> errors(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      BenchmarkRun& r = runs[i];
      if (!r.feasible) continue;
      try {
        NoisySettings ns = cfg.noisy;
        ns.seed = r.seed;
        const auto res = evaluate_noisy(dev, r.chain, prob, r.params, r.opt_level, ns);
        r.ar = res.metrics.ar;
        r.sp = res.metrics.sp;
        r.duration_ns = res.duration_ns;
        r.cx_count = res.cx_count;
        r.fidelity_score = res.fidelity_score;
      } catch (const InfeasibleError& e) {
        r.feasible = false;
        r.reason = e.what();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_threads = std::min<int>(cfg.jobs, static_cast<int>(runs.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return runs;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string join(const std::vector<double>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += num(v[i]);
  }
  return s;
}

std::string join(const std::vector<int>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string series(const BenchmarkRun& r) {
  return std::string(mapper::to_string(r.strategy)) + "-" +
         std::string(lower::to_string(r.opt_level));
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<BenchmarkRun>& runs) {
  out << "problem,strategy,opt_level,p,chain,gammas,betas,ar,sp,duration_ns,"
         "cx_count,fidelity_score,shots,seed,optimizer,reason\n";
  for (const auto& r : runs) {
    out << csv_field(r.problem) << ',' << mapper::to_string(r.strategy) << ','
        << lower::to_string(r.opt_level) << ',' << r.p << ','
        << join(r.chain, '-') << ',' << join(r.params.gammas, ';') << ','
        << join(r.params.betas, ';') << ',';
    if (r.feasible) {
      out << num(r.ar) << ',' << num(r.sp) << ',' << num(r.duration_ns) << ','
          << r.cx_count << ',' << num(r.fidelity_score);
    } else {
      out << "NA,NA,NA,NA,NA";
    }
    out << ',' << r.shots << ',' << r.seed << ',' << csv_field(r.optimizer) << ','
        << csv_field(r.reason) << '\n';
  }
}

void write_panels(const std::filesystem::path& dir,
                  const std::vector<BenchmarkRun>& runs) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> names;
  std::vector<int> ps;
  for (const auto& r : runs) {
    if (std::find(names.begin(), names.end(), series(r)) == names.end()) {
      names.push_back(series(r));
    }
    if (std::find(ps.begin(), ps.end(), r.p) == ps.end()) ps.push_back(r.p);
  }
  std::sort(ps.begin(), ps.end());
  const std::pair<const char*, std::string (*)(const BenchmarkRun&)> panels[] = {
      {"ar", [](const BenchmarkRun& r) { return num(r.ar); }},
      {"sp", [](const BenchmarkRun& r) { return num(r.sp); }},
      {"duration_ns", [](const BenchmarkRun& r) { return num(r.duration_ns); }},
      {"cx_count", [](const BenchmarkRun& r) { return std::to_string(r.cx_count); }},
  };
  for (const auto& [name, value] : panels) {
    std::ofstream out(dir / (std::string(name) + ".csv"));
    if (!out) throw ConfigError("cannot write panel " + (dir / name).string());
    out << "p";
    for (const auto& s : names) out << ',' << s;
    out << '\n';
    for (int p : ps) {
      out << p;
      for (const auto& s : names) {
        const auto it = std::find_if(runs.begin(), runs.end(), [&](const auto& r) {
          return r.p == p && series(r) == s;
        });
        out << ',' << (it == runs.end() || !it->feasible ? "NA" : value(*it));
      }
      out << '\n';
    }
  }
}

}  // namespace bqaoa::opt
