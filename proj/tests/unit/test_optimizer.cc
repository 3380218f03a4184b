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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "idldp/error.h"
#include "idldp/optimizer.h"
#include "idldp/privacy.h"
#include "test_util.h"

namespace idldp {
namespace {

using testing::kLn4;
using testing::kLn6;
using testing::PrintedToyProfile;
using testing::RelErr;
using testing::ToyModel;

PrivacyModel RandomModel(std::mt19937_64& rng, std::size_t t, RKind kind) {
  std::uniform_real_distribution<double> e(0.3, 4.0);
  std::vector<double> budgets(t);
  std::vector<std::size_t> sizes(t);
  for (std::size_t i = 0; i < t; ++i) {
    budgets[i] = e(rng);
    sizes[i] = 1 + rng() % 50;
  }
  return PrivacyModel::FromLevelSizes(budgets, sizes, kind);
}

double RapporTerm(double tau) { return std::exp(tau) / std::pow(std::exp(tau) - 1.0, 2); }
double OueTerm(double b) { return b * (1.0 - b) / std::pow(0.5 - b, 2); }

// opt1 for t = 2 by grid search over tau_1 plus the polytope's vertices.
// Each term decreases in tau, so for fixed tau_1 the best tau_2 is the
// largest feasible one.
double GridOpt1(const PrivacyModel& model, double step) {
  const double r11 = r_eval(model, 0, 0);
  const double r12 = r_eval(model, 0, 1);
  const double r22 = r_eval(model, 1, 1);
  const double m1 = static_cast<double>(model.level_sizes()[0]);
  const double m2 = static_cast<double>(model.level_sizes()[1]);
  std::vector<double> grid{r11 / 2.0, r12 - r22 / 2.0};
  for (double t1 = step; t1 < r11 / 2.0; t1 += step) grid.push_back(t1);
  double best = std::numeric_limits<double>::infinity();
  for (double t1 : grid) {
    if (t1 <= 0.0 || t1 > r11 / 2.0) continue;
    const double t2 = std::min(r22 / 2.0, r12 - t1);
    if (t2 <= 0.0) continue;
    best = std::min(best, m1 * RapporTerm(t1) + m2 * RapporTerm(t2));
  }
  return best;
}

// opt2 for t = 2 by grid search over b_1 plus the polytope's vertices. Each
// term increases in b, so for fixed b_1 the best b_2 is the smallest
// feasible one.
double GridOpt2(const PrivacyModel& model, double step) {
  const double e11 = std::exp(r_eval(model, 0, 0));
  const double e12 = std::exp(r_eval(model, 0, 1));
  const double e22 = std::exp(r_eval(model, 1, 1));
  const double m1 = static_cast<double>(model.level_sizes()[0]);
  const double m2 = static_cast<double>(model.level_sizes()[1]);
  const double low1 = 1.0 / (e11 + 1.0);
  const double low2 = 1.0 / (e22 + 1.0);
  std::vector<double> grid{low1, (1.0 - low2) / e12, 1.0 - e12 * low2};
  for (double b1 = step; b1 < 0.5; b1 += step) grid.push_back(b1);
  double best = std::numeric_limits<double>::infinity();
  for (double b1 : grid) {
    if (b1 < low1 || b1 >= 0.5) continue;
    const double b2 = std::max({low2, 1.0 - e12 * b1, (1.0 - b1) / e12});
    if (b2 >= 0.5) continue;
    best = std::min(best, m1 * OueTerm(b1) + m2 * OueTerm(b2));
  }
  return best;
}

TEST(Objective, ToySettingExamples) {
  const PrivacyModel model = ToyModel();
  EXPECT_NEAR(objective_worst_case(baseline_profile(Baseline::kRappor, kLn4, model), model), 10.0,
              1e-12);
  EXPECT_NEAR(objective_worst_case(baseline_profile(Baseline::kOue, kLn4, model), model),
              5.0 * 0.16 / 0.09 + 1.0, 1e-12);
  EXPECT_NEAR(objective_worst_case(baseline_profile(Baseline::kOue, kLn4, model), model), 9.89,
              0.005);
  // Termwise oracle for the printed point: 3.27 + 4 * 1.325 + 0.308.
  const double printed = objective_worst_case(PrintedToyProfile(), model);
  EXPECT_NEAR(printed, 0.33 * 0.67 / (0.26 * 0.26) + 4 * 0.28 * 0.72 / (0.39 * 0.39) + 0.08 / 0.26,
              1e-12);
  EXPECT_NEAR(printed, 8.88, 0.005);
  EXPECT_NEAR(variance_sum(PrintedToyProfile(), model), printed - 0.08 / 0.26, 1e-12);
}

TEST(Baselines, Constants) {
  const BitProbs rappor = baseline_probs(Baseline::kRappor, kLn4);
  EXPECT_NEAR(rappor.a, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(rappor.b, 1.0 / 3.0, 1e-15);
  const BitProbs oue = baseline_probs(Baseline::kOue, kLn4);
  EXPECT_DOUBLE_EQ(oue.a, 0.5);
  EXPECT_NEAR(oue.b, 0.2, 1e-15);
  const GrrParams grr = grr_params(kLn4, 5);
  EXPECT_NEAR(grr.p, 0.5, 1e-15);
  EXPECT_NEAR(grr.q, 0.125, 1e-15);
  EXPECT_THROW(grr_params(1.0, 1), std::invalid_argument);
  EXPECT_THROW(baseline_probs(Baseline::kOue, 0.0), std::invalid_argument);
}

TEST(Options, Validation) {
  SolverOptions options;
  EXPECT_NO_THROW(options.Validate());
  options.restarts = 0;
  EXPECT_THROW(options.Validate(), std::invalid_argument);
  options = {};
  options.step_tol = 0.0;
  EXPECT_THROW(options.Validate(), std::invalid_argument);
  options = {};
  options.constraint_tol = -1.0;
  EXPECT_THROW(solve_opt1(ToyModel(), options), std::invalid_argument);
}

TEST(Opt0, ToyFlipProbabilities) {
  const SolveResult result = solve_opt0(ToyModel());
  const PerturbationProfile& p = result.profile;
  EXPECT_NEAR(1.0 - p.level(0).a, 0.41, 0.01);
  EXPECT_NEAR(1.0 - p.level(1).a, 0.33, 0.01);
  EXPECT_NEAR(p.level(0).b, 0.33, 0.01);
  EXPECT_NEAR(p.level(1).b, 0.28, 0.01);
  // Independent multistart SLSQP optimum of the same problem.
  EXPECT_NEAR(result.objective, 8.5675, 1e-4);
  EXPECT_LT(result.objective, objective_worst_case(PrintedToyProfile(), ToyModel()));
  EXPECT_TRUE(check_idldp(p, ToyModel()).passed);
  EXPECT_EQ(p.dummy(), p.level(0));
}

TEST(Opt0, SingleLevelBeatsBaselines) {
  for (double eps : {0.5, 1.0, 2.0, 4.0}) {
    const PrivacyModel model = PrivacyModel::FromLevelSizes({eps}, {10});
    const double value = solve_opt0(model).objective;
    const double rappor = objective_worst_case(baseline_profile(Baseline::kRappor, eps, model), model);
    const double oue = objective_worst_case(baseline_profile(Baseline::kOue, eps, model), model);
    EXPECT_LE(value, std::min(rappor, oue) + 1e-9) << eps;
  }
}

TEST(Opt0, SymmetricProblemHasSymmetricValue) {
  const PrivacyModel model = PrivacyModel::FromLevelSizes({1.2, 1.2}, {7, 7});
  const PerturbationProfile p = solve_opt0(model).profile;
  const PerturbationProfile swapped({p.level(1), p.level(0)}, p.dummy());
  EXPECT_NEAR(objective_worst_case(p, model), objective_worst_case(swapped, model), 1e-9);
  EXPECT_NEAR(p.level(0).a, p.level(1).a, 1e-4);
  EXPECT_NEAR(p.level(0).b, p.level(1).b, 1e-4);
}

TEST(Opt0, DeterministicAcrossThreadCounts) {
  const PrivacyModel model = PrivacyModel::FromLevelSizes({0.8, 1.5, 2.5}, {5, 20, 75});
  SolverOptions serial;
  serial.seed = 99;
  SolverOptions parallel = serial;
  parallel.threads = 4;
  const SolveResult a = solve_opt0(model, serial);
  const SolveResult b = solve_opt0(model, serial);
  const SolveResult c = solve_opt0(model, parallel);
  EXPECT_EQ(a.profile, b.profile);
  EXPECT_EQ(a.profile, c.profile);
  EXPECT_EQ(a.objective, c.objective);
}

TEST(Opt1, SingleLevelIsRappor) {
  for (double eps : {0.5, kLn4, 3.0}) {
    const PrivacyModel model = PrivacyModel::FromLevelSizes({eps}, {4});
    const PerturbationProfile p = solve_opt1(model).profile;
    const BitProbs rappor = baseline_probs(Baseline::kRappor, eps);
    EXPECT_NEAR(p.level(0).a, rappor.a, 1e-7);
    EXPECT_NEAR(p.level(0).b, rappor.b, 1e-7);
    EXPECT_DOUBLE_EQ(p.level(0).a + p.level(0).b, 1.0);
  }
}

TEST(Opt1, EqualBudgetsGiveHalfBudgetEverywhere) {
  const PrivacyModel model = PrivacyModel::FromLevelSizes({1.4, 1.4, 1.4}, {3, 10, 40});
  const PerturbationProfile p = solve_opt1(model).profile;
  const BitProbs rappor = baseline_probs(Baseline::kRappor, 1.4);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(p.level(i).a, rappor.a, 1e-7);
}

TEST(Opt1, ToyModelFavorsLargerLevel) {
  const PerturbationProfile p = solve_opt1(ToyModel()).profile;
  const double tau1 = std::log(p.level(0).a / p.level(0).b);
  const double tau2 = std::log(p.level(1).a / p.level(1).b);
  EXPECT_GT(tau2, tau1);
  EXPECT_LE(tau1 + tau2, kLn4 + 1e-9);
  EXPECT_LE(2.0 * tau2, kLn6 + 1e-9);
  EXPECT_LT(RelErr(variance_sum(p, ToyModel()), GridOpt1(ToyModel(), 1e-3)), 1e-3);
}

TEST(Opt2, SingleLevelIsOue) {
  for (double eps : {0.5, kLn4, 3.0}) {
    const PrivacyModel model = PrivacyModel::FromLevelSizes({eps}, {4});
    const PerturbationProfile p = solve_opt2(model).profile;
    EXPECT_DOUBLE_EQ(p.level(0).a, 0.5);
    EXPECT_NEAR(p.level(0).b, 1.0 / (std::exp(eps) + 1.0), 1e-7);
  }
}

TEST(Opt2, EqualBudgetsGiveEqualB) {
  const PrivacyModel model = PrivacyModel::FromLevelSizes({2.0, 2.0}, {9, 2});
  const PerturbationProfile p = solve_opt2(model).profile;
  EXPECT_NEAR(p.level(0).b, p.level(1).b, 1e-7);
}

TEST(Opt2, ToyModelFavorsLargerLevel) {
  const PerturbationProfile p = solve_opt2(ToyModel()).profile;
  // Both self constraints and the cross constraint meet at the OUE point.
  EXPECT_LE(p.level(1).b, p.level(0).b + 1e-9);
  EXPECT_NEAR(p.level(0).b, 0.2, 1e-6);
  EXPECT_TRUE(check_idldp(p, ToyModel()).passed);
  EXPECT_LT(RelErr(variance_sum(p, ToyModel()), GridOpt2(ToyModel(), 1e-4)), 1e-3);
}

// Property: the convex models match grid search for random two-level models.
TEST(ConvexModels, MatchGridSearch) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const PrivacyModel model = RandomModel(rng, 2, trial % 2 ? RKind::kAvg : RKind::kMin);
    const double v1 = solve_opt1(model).objective;
    const double v2 = solve_opt2(model).objective;
    const double g1 = GridOpt1(model, 1e-3);
    const double g2 = GridOpt2(model, 1e-4);
    EXPECT_LE(v1, g1 * (1.0 + 1e-9));
    EXPECT_LE(v2, g2 * (1.0 + 1e-9));
    EXPECT_LT(RelErr(v1, g1), 1e-3);
    EXPECT_LT(RelErr(v2, g2), 1e-3);
  }
}

// Property: both convex objectives are midpoint-convex on feasible chords.
TEST(ConvexModels, MidpointConvexity) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const PrivacyModel model = RandomModel(rng, 1 + rng() % 4, RKind::kMin);
    const std::size_t t = model.num_levels();
    const double emin = model.min_budget();
    auto f1 = [&](const std::vector<double>& tau) {
      double s = 0.0;
      for (std::size_t i = 0; i < t; ++i) s += model.level_sizes()[i] * RapporTerm(tau[i]);
      return s;
    };
    auto f2 = [&](const std::vector<double>& b) {
      double s = 0.0;
      for (std::size_t i = 0; i < t; ++i) s += model.level_sizes()[i] * OueTerm(b[i]);
      return s;
    };
    const double b_low = 1.0 / (std::exp(emin) + 1.0);
    std::vector<double> x(t), y(t), mid(t), bx(t), by(t), bmid(t);
    for (std::size_t i = 0; i < t; ++i) {
      x[i] = u(rng) * emin / 2.0;
      y[i] = u(rng) * emin / 2.0;
      mid[i] = 0.5 * (x[i] + y[i]);
      bx[i] = b_low + u(rng) * (0.499 - b_low);
      by[i] = b_low + u(rng) * (0.499 - b_low);
      bmid[i] = 0.5 * (bx[i] + by[i]);
    }
    EXPECT_LE(f1(mid), 0.5 * (f1(x) + f1(y)) * (1.0 + 1e-12));
    EXPECT_LE(f2(bmid), 0.5 * (f2(bx) + f2(by)) * (1.0 + 1e-12));
  }
}

// Properties: every solver output passes the analytic check, and opt0
// dominates both constrained models and both baselines.
TEST(Solvers, FeasibleAndDominance) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const PrivacyModel model = RandomModel(rng, 1 + rng() % 3, trial % 2 ? RKind::kAvg : RKind::kMin);
    const SolveResult r0 = solve_opt0(model);
    const SolveResult r1 = solve_opt1(model);
    const SolveResult r2 = solve_opt2(model);
    for (const SolveResult* r : {&r0, &r1, &r2}) {
      EXPECT_TRUE(check_idldp(r->profile, model).passed);
      EXPECT_TRUE(r->profile.validated());
    }
    const double best = std::min(objective_worst_case(r1.profile, model),
                                 objective_worst_case(r2.profile, model));
    EXPECT_LE(r0.objective, best + 1e-6);
    for (Baseline base : {Baseline::kRappor, Baseline::kOue}) {
      const double v = objective_worst_case(baseline_profile(base, model.min_budget(), model), model);
      EXPECT_LE(r0.objective, v + 1e-6);
    }
    EXPECT_LE(r1.objective,
              variance_sum(baseline_profile(Baseline::kRappor, model.min_budget(), model), model) +
                  1e-9);
    EXPECT_LE(r2.objective,
              variance_sum(baseline_profile(Baseline::kOue, model.min_budget(), model), model) +
                  1e-9);
  }
}

TEST(Solvers, DispatchAndNames) {
  EXPECT_EQ(parse_opt_model("opt1"), OptModel::kOpt1);
  EXPECT_EQ(to_string(OptModel::kOpt2), "opt2");
  EXPECT_THROW(parse_opt_model("opt9"), std::invalid_argument);
  EXPECT_EQ(solve(OptModel::kOpt1, ToyModel()).profile, solve_opt1(ToyModel()).profile);
}

}  // namespace
}  // namespace idldp
