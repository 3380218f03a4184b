// Copyright 2026 The idldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// opt0 is solved in the coordinates u = ln(a/b), w = ln((1-b)/(1-a)). The
// pairwise constraint ln(a_i (1-b_j) / (b_i (1-a_j))) <= r_ij becomes the
// linear constraint u_i + w_j <= r_ij, and
//   b(1-b)/(a-b)^2 = 1 / ((e^u - 1)(1 - e^-w)),
//   (1-a-b)/(a-b)  = (e^{u-w} - 1) b(1-b)/(a-b)^2.
// The max term uses an epigraph variable s with C_i <= s, enforced by an
// augmented Lagrangian whose subproblems run a projected gradient method on
// the linear polytope.

#include "idldp/optimizer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "idldp/error.h"
#include "idldp/privacy.h"
#include "idldp/random.h"
#include "solver.h"

namespace idldp {

namespace {

using Eigen::VectorXd;

constexpr double kMargin = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct UwTerms {
  double v = 0.0;
  double c = 0.0;
  double dv_du = 0.0;
  double dv_dw = 0.0;
  double dc_du = 0.0;
  double dc_dw = 0.0;
};

UwTerms EvalUw(double u, double w) {
  const double eu = std::expm1(u);
  const double ew = -std::expm1(-w);
  UwTerms t;
  t.v = 1.0 / (eu * ew);
  t.c = std::expm1(u - w) * t.v;
  t.dv_du = -t.v * (eu + 1.0) / eu;
  t.dv_dw = -t.v / std::expm1(w);
  t.dc_du = (eu + 1.0) / (eu * eu);
  t.dc_dw = -(1.0 - ew) / (ew * ew);
  return t;
}

BitProbs ProbsFromUw(double u, double w) {
  const double eu = std::expm1(u);
  const double ew = -std::expm1(-w);
  const double b = ew / (eu + ew);
  return {(eu + 1.0) * b, b};
}

std::pair<double, double> UwFromProbs(const BitProbs& p) {
  return {std::log(p.a / p.b), std::log((1.0 - p.b) / (1.0 - p.a))};
}

double PairBudget(const PrivacyModel& model, std::size_t i, std::size_t j) {
  return r_eval(model, i, j);
}

internal::SpgSettings SpgFrom(const SolverOptions& options) {
  internal::SpgSettings s;
  s.max_iters = options.max_iters;
  s.step_tol = options.step_tol;
  return s;
}

struct Candidate {
  std::vector<BitProbs> levels;
  double objective = kInf;
  std::size_t iterations = 0;
};

// Lower objective wins; equal objectives fall back to lexicographic
// (a_1, b_1, a_2, ...).
bool Better(const Candidate& x, const Candidate& y) {
  if (x.objective != y.objective) return x.objective < y.objective;
  for (std::size_t i = 0; i < x.levels.size(); ++i) {
    if (x.levels[i].a != y.levels[i].a) return x.levels[i].a < y.levels[i].a;
    if (x.levels[i].b != y.levels[i].b) return x.levels[i].b < y.levels[i].b;
  }
  return false;
}

SolveResult Finish(const Candidate& best, const PrivacyModel& model, OptModel which,
                   const SolverOptions& options) {
  PerturbationProfile profile = PerturbationProfile::WithDummyFromModel(best.levels, model);
  const AuditReport audit = check_idldp(profile, model, kAuditTolerance);
  if (!audit.passed) {
    throw SolverError(to_string(which) + " produced a profile violating the privacy constraint " +
                      audit.worst_x + " vs " + audit.worst_x_prime);
  }
  SolveResult result{std::move(profile), 0.0, which, options.seed, best.iterations};
  result.objective = which == OptModel::kOpt0 ? objective_worst_case(result.profile, model)
                                              : variance_sum(result.profile, model);
  return result;
}

std::vector<double> LevelWeights(const PrivacyModel& model) {
  std::vector<double> m;
  for (std::size_t size : model.level_sizes()) m.push_back(static_cast<double>(size));
  return m;
}

// ---------------------------------------------------------------- opt0 ---

internal::Polytope Opt0Polytope(const PrivacyModel& model) {
  const std::size_t t = model.num_levels();
  internal::Polytope poly(2 * t + 1);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      VectorXd g = VectorXd::Zero(static_cast<Eigen::Index>(2 * t + 1));
      g[static_cast<Eigen::Index>(i)] = 1.0;
      g[static_cast<Eigen::Index>(t + j)] = 1.0;
      poly.AddRow(g, PairBudget(model, i, j));
    }
  }
  for (std::size_t k = 0; k < 2 * t; ++k) poly.AddLowerBound(k, kMargin);
  VectorXd interior = VectorXd::Constant(static_cast<Eigen::Index>(2 * t + 1),
                                         model.min_budget() / 4.0);
  interior[static_cast<Eigen::Index>(2 * t)] = 0.0;
  poly.SetInterior(interior);
  return poly;
}

Candidate CandidateFromUw(const VectorXd& x, std::size_t t, const PrivacyModel& model) {
  Candidate c;
  for (std::size_t i = 0; i < t; ++i) {
    c.levels.push_back(
        ProbsFromUw(x[static_cast<Eigen::Index>(i)], x[static_cast<Eigen::Index>(t + i)]));
  }
  c.objective = objective_worst_case(PerturbationProfile::WithDummyFromModel(c.levels, model),
                                     model);
  return c;
}

Candidate RunOpt0FromStart(const PrivacyModel& model, const internal::Polytope& poly,
                           const VectorXd& start, const SolverOptions& options) {
  const std::size_t t = model.num_levels();
  const std::vector<double> m = LevelWeights(model);
  const auto s_index = static_cast<Eigen::Index>(2 * t);

  VectorXd x = poly.Project(start);
  {
    double worst = -kInf;
    for (std::size_t i = 0; i < t; ++i) {
      worst = std::max(worst, EvalUw(x[static_cast<Eigen::Index>(i)],
                                     x[static_cast<Eigen::Index>(t + i)]).c);
    }
    x[s_index] = worst;
  }

  std::vector<double> lambda(t, 0.0);
  // The variance sum grows with m while the penalized term stays O(1);
  // starting the penalty at the same scale keeps the inner solves balanced.
  double mu = std::max(10.0, std::accumulate(m.begin(), m.end(), 0.0));
  double prev_violation = kInf;
  double last_value = kInf;
  std::size_t iterations = 0;

  for (int outer = 0; outer < 60; ++outer) {
    auto lagrangian = [&](const VectorXd& z, VectorXd* grad) -> double {
      const double s = z[s_index];
      double value = s;
      grad->setZero(z.size());
      (*grad)[s_index] = 1.0;
      for (std::size_t i = 0; i < t; ++i) {
        const auto ui = static_cast<Eigen::Index>(i);
        const auto wi = static_cast<Eigen::Index>(t + i);
        if (!(z[ui] > 0.0) || !(z[wi] > 0.0)) return kInf;
        const UwTerms terms = EvalUw(z[ui], z[wi]);
        value += m[i] * terms.v;
        (*grad)[ui] += m[i] * terms.dv_du;
        (*grad)[wi] += m[i] * terms.dv_dw;
        const double shifted = lambda[i] + mu * (terms.c - s);
        if (shifted > 0.0) {
          value += (shifted * shifted - lambda[i] * lambda[i]) / (2.0 * mu);
          (*grad)[ui] += shifted * terms.dc_du;
          (*grad)[wi] += shifted * terms.dc_dw;
          (*grad)[s_index] -= shifted;
        } else {
          value -= lambda[i] * lambda[i] / (2.0 * mu);
        }
      }
      return value;
    };
    const internal::SpgResult inner = internal::MinimizeSpg(lagrangian, poly, x, SpgFrom(options));
    iterations += inner.iterations;
    x = inner.x;

    double violation = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
      const double c = EvalUw(x[static_cast<Eigen::Index>(i)],
                              x[static_cast<Eigen::Index>(t + i)]).c;
      violation = std::max(violation, c - x[s_index]);
      lambda[i] = std::max(0.0, lambda[i] + mu * (c - x[s_index]));
    }
    if (violation <= options.constraint_tol &&
        (inner.converged || inner.value >= last_value * (1.0 - 1e-10))) {
      break;
    }
    last_value = inner.value;
    if (violation > 0.25 * prev_violation) mu = std::min(mu * 10.0, 1e10);
    prev_violation = violation;
  }

  Candidate c = CandidateFromUw(x, t, model);
  c.iterations = iterations;
  return c;
}

VectorXd UwVector(const std::vector<BitProbs>& levels) {
  const std::size_t t = levels.size();
  VectorXd x = VectorXd::Zero(static_cast<Eigen::Index>(2 * t + 1));
  for (std::size_t i = 0; i < t; ++i) {
    const auto [u, w] = UwFromProbs(levels[i]);
    x[static_cast<Eigen::Index>(i)] = u;
    x[static_cast<Eigen::Index>(t + i)] = w;
  }
  return x;
}

template <typename Fn>
void RunParallel(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = next++; k < count; k = next++) fn(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::string to_string(OptModel model) {
  switch (model) {
    case OptModel::kOpt0:
      return "opt0";
    case OptModel::kOpt1:
      return "opt1";
    case OptModel::kOpt2:
      return "opt2";
  }
  return "opt0";
}

OptModel parse_opt_model(const std::string& text) {
  if (text == "opt0") return OptModel::kOpt0;
  if (text == "opt1") return OptModel::kOpt1;
  if (text == "opt2") return OptModel::kOpt2;
  throw std::invalid_argument("unknown optimization model '" + text + "'");
}

std::string to_string(Baseline baseline) {
  return baseline == Baseline::kRappor ? "RAPPOR" : "OUE";
}

void SolverOptions::Validate() const {
  if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (!(step_tol > 0.0) || !(constraint_tol > 0.0)) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
}

double variance_sum(const PerturbationProfile& profile, const PrivacyModel& model) {
  if (profile.num_levels() != model.num_levels()) {
    throw std::invalid_argument("profile and model level counts differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < model.num_levels(); ++i) {
    const BitProbs& p = profile.level(i);
    if (p.a == p.b) throw std::invalid_argument("a = b makes the estimator undefined");
    const double diff = p.a - p.b;
    sum += static_cast<double>(model.level_sizes()[i]) * p.b * (1.0 - p.b) / (diff * diff);
  }
  return sum;
}

double objective_worst_case(const PerturbationProfile& profile, const PrivacyModel& model) {
  double worst = -kInf;
  for (const BitProbs& p : profile.levels()) {
    if (p.a == p.b) throw std::invalid_argument("a = b makes the estimator undefined");
    worst = std::max(worst, (1.0 - p.a - p.b) / (p.a - p.b));
  }
  return variance_sum(profile, model) + worst;
}

BitProbs baseline_probs(Baseline baseline, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("budget must be positive");
  if (baseline == Baseline::kRappor) {
    const double b = 1.0 / (std::exp(eps / 2.0) + 1.0);
    return {1.0 - b, b};
  }
  return {0.5, 1.0 / (std::exp(eps) + 1.0)};
}

PerturbationProfile baseline_profile(Baseline baseline, double eps, const PrivacyModel& model) {
  const BitProbs p = baseline_probs(baseline, eps);
  return PerturbationProfile(std::vector<BitProbs>(model.num_levels(), p), p);
}

GrrParams grr_params(double eps, std::size_t m) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("budget must be positive");
  if (m < 2) throw std::invalid_argument("GRR needs at least two items");
  const double denom = std::exp(eps) + static_cast<double>(m) - 1.0;
  return {std::exp(eps) / denom, 1.0 / denom};
}

SolveResult solve_opt1(const PrivacyModel& model, const SolverOptions& options) {
  options.Validate();
  const std::size_t t = model.num_levels();
  const std::vector<double> m = LevelWeights(model);
  internal::Polytope poly(t);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = i; j < t; ++j) {
      VectorXd g = VectorXd::Zero(static_cast<Eigen::Index>(t));
      g[static_cast<Eigen::Index>(i)] += 1.0;
      g[static_cast<Eigen::Index>(j)] += 1.0;
      poly.AddRow(g, PairBudget(model, i, j));
    }
    poly.AddLowerBound(i, kMargin);
  }
  poly.SetInterior(VectorXd::Constant(static_cast<Eigen::Index>(t), model.min_budget() / 4.0));
  auto objective = [&](const VectorXd& tau, VectorXd* grad) -> double {
    double value = 0.0;
    grad->setZero(tau.size());
    for (std::size_t i = 0; i < t; ++i) {
      const double x = tau[static_cast<Eigen::Index>(i)];
      if (!(x > 0.0)) return kInf;
      const double em = std::expm1(x);
      const double e = em + 1.0;
      value += m[i] * e / (em * em);
      (*grad)[static_cast<Eigen::Index>(i)] = -m[i] * e * (e + 1.0) / (em * em * em);
    }
    return value;
  };
  const VectorXd start = VectorXd::Constant(static_cast<Eigen::Index>(t), model.min_budget() / 2.0);
  const internal::SpgResult res = internal::MinimizeSpg(objective, poly, start, SpgFrom(options));

  Candidate best;
  for (std::size_t i = 0; i < t; ++i) {
    const double b = 1.0 / (std::exp(res.x[static_cast<Eigen::Index>(i)]) + 1.0);
    best.levels.push_back({1.0 - b, b});
  }
  best.iterations = res.iterations;
  return Finish(best, model, OptModel::kOpt1, options);
}

SolveResult solve_opt2(const PrivacyModel& model, const SolverOptions& options) {
  options.Validate();
  const std::size_t t = model.num_levels();
  const std::vector<double> m = LevelWeights(model);
  internal::Polytope poly(t);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      if (i == j) continue;
      VectorXd g = VectorXd::Zero(static_cast<Eigen::Index>(t));
      g[static_cast<Eigen::Index>(i)] = -std::exp(PairBudget(model, i, j));
      g[static_cast<Eigen::Index>(j)] = -1.0;
      poly.AddRow(g, -1.0);
    }
    poly.AddLowerBound(i, 1.0 / (std::exp(PairBudget(model, i, i)) + 1.0));
    poly.AddUpperBound(i, 0.5 - kMargin);
  }
  const double oue_b = 1.0 / (std::exp(model.min_budget()) + 1.0);
  poly.SetInterior(VectorXd::Constant(static_cast<Eigen::Index>(t), (oue_b + 0.5 - kMargin) / 2.0));
  auto objective = [&](const VectorXd& b, VectorXd* grad) -> double {
    double value = 0.0;
    grad->setZero(b.size());
    for (std::size_t i = 0; i < t; ++i) {
      const double x = b[static_cast<Eigen::Index>(i)];
      if (!(x > 0.0) || !(x < 0.5)) return kInf;
      const double gap = 0.5 - x;
      value += m[i] * x * (1.0 - x) / (gap * gap);
      (*grad)[static_cast<Eigen::Index>(i)] = 0.5 * m[i] / (gap * gap * gap);
    }
    return value;
  };
  const VectorXd start = VectorXd::Constant(static_cast<Eigen::Index>(t), oue_b);
  const internal::SpgResult res = internal::MinimizeSpg(objective, poly, start, SpgFrom(options));

  Candidate best;
  for (std::size_t i = 0; i < t; ++i) best.levels.push_back({0.5, res.x[static_cast<Eigen::Index>(i)]});
  best.iterations = res.iterations;
  return Finish(best, model, OptModel::kOpt2, options);
}

SolveResult solve_opt0(const PrivacyModel& model, const SolverOptions& options) {
  options.Validate();
  const std::size_t t = model.num_levels();
  const internal::Polytope poly = Opt0Polytope(model);
  const double eps_min = model.min_budget();

  std::vector<VectorXd> starts;
  starts.push_back(UwVector(std::vector<BitProbs>(t, baseline_probs(Baseline::kRappor, eps_min))));
  starts.push_back(UwVector(std::vector<BitProbs>(t, baseline_probs(Baseline::kOue, eps_min))));
  const SolveResult r1 = solve_opt1(model, options);
  const SolveResult r2 = solve_opt2(model, options);
  starts.push_back(UwVector({r1.profile.levels().begin(), r1.profile.levels().end()}));
  starts.push_back(UwVector({r2.profile.levels().begin(), r2.profile.levels().end()}));
  const std::size_t fixed_starts = starts.size();

  // Random starts are drawn from the box [min(E)/20, min(E)/2]^{2t}, which
  // satisfies every pair constraint strictly. Starts near the variable
  // bounds sit where the objective blows up and only slow the search.
  RandomSource rng(options.seed, 0x6f707430);
  for (std::size_t k = 0; k < options.restarts; ++k) {
    VectorXd x = VectorXd::Zero(static_cast<Eigen::Index>(2 * t + 1));
    for (std::size_t i = 0; i < 2 * t; ++i) {
      x[static_cast<Eigen::Index>(i)] = eps_min * (0.05 + 0.45 * rng.uniform01());
    }
    starts.push_back(x);
  }

  std::vector<Candidate> results(starts.size());
  RunParallel(starts.size(), options.threads, [&](std::size_t k) {
    results[k] = RunOpt0FromStart(model, poly, starts[k], options);
  });
  // The feasible starting points themselves are candidates too.
  for (std::size_t k = 0; k < fixed_starts; ++k) {
    results.push_back(CandidateFromUw(poly.Project(starts[k]), t, model));
  }

  const Candidate* best = &results.front();
  auto admissible = [&](const Candidate& c) {
    return std::isfinite(c.objective) &&
           check_idldp(PerturbationProfile::WithDummyFromModel(c.levels, model), model).passed;
  };
  for (const Candidate& c : results) {
    if (admissible(c) && (!admissible(*best) || Better(c, *best))) best = &c;
  }
  if (!admissible(*best)) throw SolverError("opt0 found no feasible point");
  return Finish(*best, model, OptModel::kOpt0, options);
}

SolveResult solve(OptModel which, const PrivacyModel& model, const SolverOptions& options) {
  switch (which) {
    case OptModel::kOpt0:
      return solve_opt0(model, options);
    case OptModel::kOpt1:
      return solve_opt1(model, options);
    case OptModel::kOpt2:
      return solve_opt2(model, options);
  }
  throw std::invalid_argument("unknown optimization model");
}

}  // namespace idldp
