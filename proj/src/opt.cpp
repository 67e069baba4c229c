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


#include "bqaoa/opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "bqaoa/errors.hpp"

namespace bqaoa::opt {

using qaoa::ParamVector;
constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string_view to_string(Method m) {
  return m == Method::NelderMead ? "nelder-mead" : "coordinate-grid";
}

Method parse_method(std::string_view s) {
  if (s == "nelder-mead") return Method::NelderMead;
  if (s == "coordinate-grid") return Method::CoordinateGrid;
  throw ConfigError("optimizer must be nelder-mead|coordinate-grid, got \"" +
                    std::string(s) + "\"");
}

void OptimizerConfig::validate() const {
  if (max_evals < 1) throw ConfigError("max_evals must be >= 1");
  if (initial_grid < 1) throw ConfigError("initial_grid must be >= 1");
  if (max_grid_points < 1) throw ConfigError("max_grid_points must be >= 1");
  if (restarts < 1) throw ConfigError("restarts must be >= 1");
  if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be >= 0");
}

std::string optimizer_label(const OptimizerConfig& cfg) {
  return std::string(to_string(cfg.method)) + " (cobyla substitute)";
}

double gamma_bound(const qaoa::IsingProblem& prob) {
  double m = 0.0;
  for (const auto& [k, v] : prob.J) m = std::max(m, std::abs(v));
  for (double v : prob.h) m = std::max(m, std::abs(v));
  return m > 0.0 ? kPi / (2.0 * m) : kPi;
}

Evaluator ideal_evaluator(const qaoa::IsingProblem& prob) {
  return [prob](const ParamVector& params) {
    try {
      return qaoa::metrics(prob, qaoa::ideal_distribution(prob, params)).ar;
    } catch (const NoFeasibleOutcomeError&) {
      return kNegInf;
    }
  };
}

namespace {

using Point = std::vector<double>;  // gammas then betas

ParamVector to_params(const Point& x) {
  const std::size_t p = x.size() / 2;
  return {Point(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p)),
          Point(x.begin() + static_cast<std::ptrdiff_t>(p), x.end())};
}

Point to_point(const ParamVector& v) {
  Point x = v.gammas;
  x.insert(x.end(), v.betas.begin(), v.betas.end());
  return x;
}

// Counts evaluations against the budget and records the trace.
class Objective {
 public:
  Objective(const Evaluator& f, int budget) : f_(f), budget_(budget) {}

  bool exhausted() const { return evals_ >= budget_; }
  int remaining() const { return budget_ - evals_; }

  double operator()(const Point& x) {
    double v = f_(to_params(x));
    if (std::isnan(v)) v = kNegInf;
    ++evals_;
    if (v > best_) {
      best_ = v;
      best_x_ = x;
    }
    trace_.push_back({v, best_});
    return v;
  }

  double best() const { return best_; }
  const Point& best_x() const { return best_x_; }
  std::vector<TraceEntry> take_trace() { return std::move(trace_); }

 private:
  const Evaluator& f_;
  int budget_;
  int evals_ = 0;
  double best_ = kNegInf;
  Point best_x_;
  std::vector<TraceEntry> trace_;
};

struct Seed {
  Point x;
  double value;
};

// Maximizes from x0; returns false if the budget ran out first.
bool nelder_mead(Objective& f, const Point& x0, double f0,
                 const std::vector<double>& step, int budget, double tol) {
  const std::size_t d = x0.size();
  std::vector<Point> s = {x0};
  std::vector<double> v = {-f0};  // minimize the negation
  int used = 0;
  auto eval = [&](const Point& x) {
    ++used;
    return -f(x);
  };
  for (std::size_t i = 0; i < d; ++i) {
    if (used >= budget || f.exhausted()) return false;
    Point x = x0;
    x[i] += step[i];
    s.push_back(x);
    v.push_back(eval(x));
  }
  std::vector<std::size_t> order(d + 1);
  while (true) {
    for (std::size_t i = 0; i <= d; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    const std::size_t lo = order.front(), hi = order.back(), nh = order[d - 1];
    double diam = 0.0;
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t k = 0; k < d; ++k)
        diam = std::max(diam, std::abs(s[i][k] - s[lo][k]));
    if (v[hi] - v[lo] <= tol && diam <= 1e-7) return true;
    if (used >= budget || f.exhausted()) return false;

    Point c(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == hi) continue;
      for (std::size_t k = 0; k < d; ++k) c[k] += s[i][k] / static_cast<double>(d);
    }
    auto along = [&](double t) {
      Point x(d);
      for (std::size_t k = 0; k < d; ++k) x[k] = c[k] + t * (s[hi][k] - c[k]);
      return x;
    };
    const Point xr = along(-1.0);
    const double vr = eval(xr);
    if (vr < v[lo]) {
      if (used >= budget || f.exhausted()) {
        s[hi] = xr;
        v[hi] = vr;
        return false;
      }
      const Point xe = along(-2.0);
      const double ve = eval(xe);
      if (ve < vr) {
        s[hi] = xe;
        v[hi] = ve;
      } else {
        s[hi] = xr;
        v[hi] = vr;
      }
      continue;
    }
    if (vr < v[nh]) {
      s[hi] = xr;
      v[hi] = vr;
      continue;
    }
    if (used >= budget || f.exhausted()) return false;
    const bool outside = vr < v[hi];
    const Point xc = along(outside ? -0.5 : 0.5);
    const double vc = eval(xc);
    if (vc < (outside ? vr : v[hi])) {
      s[hi] = xc;
      v[hi] = vc;
      continue;
    }
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == lo) continue;
      if (used >= budget || f.exhausted()) return false;
      for (std::size_t k = 0; k < d; ++k) s[i][k] = s[lo][k] + 0.5 * (s[i][k] - s[lo][k]);
      v[i] = eval(s[i]);
    }
  }
}

// Pattern search along each axis with a halving step.
bool coordinate_search(Objective& f, Point x, double fx, std::vector<double> step,
                       int budget, double tol) {
  int used = 0;
  while (true) {
    bool improved = false;
    for (std::size_t k = 0; k < x.size(); ++k) {
      for (double dir : {1.0, -1.0}) {
        if (used >= budget || f.exhausted()) return false;
        Point y = x;
        y[k] += dir * step[k];
        const double fy = f(y);
        ++used;
        if (fy > fx + tol) {
          x = std::move(y);
          fx = fy;
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      double largest = 0.0;
      for (double& s : step) {
        s *= 0.5;
        largest = std::max(largest, s);
      }
      if (largest < 1e-7) return true;
    }
  }
}

}  // namespace

OptimizeResult optimize_params(const qaoa::IsingProblem& prob, int p,
                               const Evaluator& evaluator,
                               const OptimizerConfig& cfg,
                               const std::optional<ParamVector>& warm_start) {
  cfg.validate();
  if (p < 1) throw ConfigError("p must be >= 1");
  const std::size_t d = 2 * static_cast<std::size_t>(p);
  const double gmax = gamma_bound(prob);
  const double bmax = kPi / 2.0;
  auto axis_len = [&](std::size_t k) { return k < d / 2 ? gmax : bmax; };
  const int g = cfg.initial_grid;

  Objective f(evaluator, cfg.max_evals);
  std::vector<Seed> seeds;
  auto try_point = [&](const Point& x) {
    if (f.exhausted()) return;
    seeds.push_back({x, f(x)});
  };
  auto grid_point = [&](const std::vector<int>& idx) {
    Point x(d);
    for (std::size_t k = 0; k < d; ++k) x[k] = axis_len(k) * idx[k] / g;
    return x;
  };

  if (warm_start) {
    if (warm_start->p() != p - 1) {
      throw LengthError("warm start must have p-1 = " + std::to_string(p - 1) +
                        " layers");
    }
    // A zero layer reproduces the p-1 state exactly, so the warm start can
    // only improve on it. Repeating the last layer and interpolating the
    // schedule give two more seeds.
    ParamVector padded = *warm_start;
    padded.gammas.push_back(0.0);
    padded.betas.push_back(0.0);
    try_point(to_point(padded));
    ParamVector rep = *warm_start;
    rep.gammas.push_back(rep.gammas.back());
    rep.betas.push_back(rep.betas.back());
    try_point(to_point(rep));
    ParamVector interp;
    for (const auto* src : {&warm_start->gammas, &warm_start->betas}) {
      std::vector<double> out(static_cast<std::size_t>(p));
      for (int i = 0; i < p; ++i) {
        const double lo = i > 0 ? (*src)[static_cast<std::size_t>(i - 1)] : 0.0;
        const double hi = i < p - 1 ? (*src)[static_cast<std::size_t>(i)] : 0.0;
        out[static_cast<std::size_t>(i)] =
            static_cast<double>(i) / (p - 1) * lo +
            static_cast<double>(p - 1 - i) / (p - 1) * hi;
      }
      (src == &warm_start->gammas ? interp.gammas : interp.betas) = out;
    }
    try_point(to_point(interp));
  }

  const double total = std::pow(static_cast<double>(g), static_cast<double>(d));
  if (total <= cfg.max_grid_points) {
    std::vector<int> idx(d, 0);
    while (!f.exhausted()) {
      try_point(grid_point(idx));
      std::size_t k = d;
      while (k > 0 && ++idx[k - 1] == g) idx[--k] = 0;
      if (k == 0) break;
    }
  } else {
    std::mt19937_64 rng(cfg.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(p)));
    std::uniform_int_distribution<int> pick(0, g - 1);
    std::vector<int> idx(d);
    for (int i = 0; i < cfg.max_grid_points && !f.exhausted(); ++i) {
      for (auto& v : idx) v = pick(rng);
      try_point(grid_point(idx));
    }
  }

  // Best distinct seeds, earliest first on ties.
  std::vector<std::size_t> order(seeds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return seeds[a].value > seeds[b].value;
  });
  std::vector<double> step(d);
  for (std::size_t k = 0; k < d; ++k) step[k] = axis_len(k) / (2.0 * g);

  OptimizeResult result;
  bool converged = true;
  int started = 0;
  for (std::size_t i = 0; i < order.size() && started < cfg.restarts; ++i) {
    const Seed& s = seeds[order[i]];
    if (!std::isfinite(s.value)) break;
    if (f.exhausted()) {
      converged = false;
      break;
    }
    const int share = f.remaining() / (cfg.restarts - started);
    const bool ok = cfg.method == Method::NelderMead
                        ? nelder_mead(f, s.x, s.value, step, std::max(share, 1),
                                      cfg.tolerance)
                        : coordinate_search(f, s.x, s.value, step,
                                            std::max(share, 1), cfg.tolerance);
    converged = converged && ok;
    ++started;
  }
  if (seeds.empty()) converged = false;

  result.objective = f.best();
  result.params = f.best_x().empty() ? to_params(Point(d, 0.0)) : to_params(f.best_x());
  result.trace = f.take_trace();
  result.budget_exhausted = !converged;
  return result;
}

}  // namespace bqaoa::opt
