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

BitProbs RandomProbs(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.02, 0.98);
  double x = u(rng);
  double y = u(rng);
  while (std::abs(x - y) < 1e-3) y = u(rng);
  return {std::max(x, y), std::min(x, y)};
}

// A random model with m items spread over t nonempty levels.
PrivacyModel RandomModel(std::mt19937_64& rng, std::size_t m, std::size_t t, RKind kind) {
  std::vector<std::size_t> item_level(m);
  for (std::size_t k = 0; k < m; ++k) item_level[k] = k < t ? k : rng() % t;
  std::vector<double> budgets(t);
  std::uniform_real_distribution<double> e(0.2, 3.0);
  for (double& b : budgets) b = e(rng);
  return PrivacyModel(budgets, item_level, kind);
}

// A random profile plus MinID budgets just large enough for it to pass.
std::pair<PerturbationProfile, PrivacyModel> TightPassingPair(std::mt19937_64& rng,
                                                              std::size_t m, std::size_t t) {
  std::vector<BitProbs> levels(t);
  for (BitProbs& p : levels) p = RandomProbs(rng);
  std::vector<double> budgets(t, 0.0);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      budgets[i] = std::max({budgets[i], std::log(pair_ratio(levels[i], levels[j])),
                             std::log(pair_ratio(levels[j], levels[i]))});
    }
  }
  std::vector<std::size_t> item_level(m);
  for (std::size_t k = 0; k < m; ++k) item_level[k] = k < t ? k : rng() % t;
  PrivacyModel model(budgets, item_level, RKind::kMin);
  return {PerturbationProfile::WithDummyFromModel(levels, model), model};
}

TEST(PairRatio, UniformLn4ProbabilitiesGiveFour) {
  const BitProbs p{2.0 / 3.0, 1.0 / 3.0};
  EXPECT_NEAR(pair_ratio(p, p), 4.0, 1e-12);
  const PrivacyModel model = PrivacyModel::FromLevelSizes({kLn4}, {2});
  const PerturbationProfile profile({p}, p);
  const UnaryChannel channel = UnaryChannel::ForProfile(profile, model);
  const ExactMechanism* chain[] = {&channel};
  EXPECT_NEAR(bruteforce_max_ratio(chain, {1}, {2}), 4.0, 1e-12);
}

TEST(PairRatio, DegenerateChannelGivesOne) {
  const PerturbationProfile profile =
      PerturbationProfile::Unchecked({{0.4, 0.4}, {0.7, 0.7}}, {0.4, 0.4});
  EXPECT_DOUBLE_EQ(pair_ratio(profile, 0, 1), 1.0);
  EXPECT_DOUBLE_EQ(pair_ratio(profile, 1, 0), 1.0);
}

TEST(PairRatio, PrintedToyValue) {
  const PerturbationProfile profile = PrintedToyProfile();
  const double r = pair_ratio(profile, 0, 1);
  EXPECT_NEAR(r, 0.59 * 0.72 / (0.33 * 0.33), 1e-12);
  EXPECT_NEAR(r, 3.90, 0.005);
  EXPECT_LE(r, 4.0);
}

TEST(CheckIdldp, RapporAtMinimumBudgetPasses) {
  for (RKind kind : {RKind::kMin, RKind::kAvg}) {
    const PrivacyModel model = PrivacyModel::FromLevelSizes({0.7, 1.5, 3.0}, {3, 4, 5}, kind);
    const PerturbationProfile profile =
        baseline_profile(Baseline::kRappor, model.min_budget(), model);
    EXPECT_TRUE(check_idldp(profile, model).passed);
  }
}

TEST(CheckIdldp, PrintedToyProfilePasses) {
  const AuditReport report = check_idldp(PrintedToyProfile(), ToyModel());
  EXPECT_TRUE(report.passed);
  // Oracle: the four ordered pairs evaluated by hand.
  const double r12 = 0.59 * 0.72 / (0.33 * 0.33);
  const double r21 = 0.67 * 0.67 / (0.28 * 0.41);
  EXPECT_NEAR(r21, 3.91, 0.005);
  EXPECT_LE(r12, 4.0);
  EXPECT_LE(r21, 4.0);
  EXPECT_GE(report.pairs_checked, 4u);
}

TEST(CheckIdldp, GrossViolationFails) {
  const PrivacyModel model = PrivacyModel::FromLevelSizes({kLn4}, {3});
  const PerturbationProfile profile({{0.9, 0.1}}, {0.9, 0.1});
  const AuditReport report = check_idldp(profile, model);
  EXPECT_FALSE(report.passed);
  EXPECT_NEAR(report.max_ratio, 81.0, 1e-9);
  EXPECT_NEAR(report.bound, 4.0, 1e-12);
}

TEST(CheckIdldp, LevelMismatchThrows) {
  EXPECT_THROW(check_idldp(PerturbationProfile({{0.6, 0.3}}, {0.6, 0.3}), ToyModel()),
               std::invalid_argument);
}

// Property: for t = 1 the check is exactly the unary-encoding LDP condition.
TEST(CheckIdldp, SingleLevelReducesToLdp) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> e(0.1, 4.0);
  for (int trial = 0; trial < 500; ++trial) {
    const BitProbs p = RandomProbs(rng);
    const double eps = e(rng);
    const PrivacyModel model = PrivacyModel::FromLevelSizes({eps}, {3});
    const bool ldp = std::log(pair_ratio(p, p)) <= eps + std::log1p(kAuditTolerance);
    EXPECT_EQ(check_idldp(PerturbationProfile({p}, p), model).passed, ldp);
  }
}

TEST(Bruteforce, IdenticalInputsGiveOne) {
  const PrivacyModel model = ToyModel();
  const UnaryChannel channel = UnaryChannel::ForProfile(PrintedToyProfile(), model);
  const ExactMechanism* chain[] = {&channel};
  for (Item x = 1; x <= 5; ++x) EXPECT_NEAR(bruteforce_max_ratio(chain, {x}, {x}), 1.0, 1e-12);
}

TEST(Bruteforce, SequentialCompositionOfTwoChannels) {
  const BitProbs p = baseline_probs(Baseline::kRappor, std::log(2.0));
  const PrivacyModel model = PrivacyModel::FromLevelSizes({std::log(2.0)}, {2});
  const UnaryChannel channel = UnaryChannel::ForProfile(PerturbationProfile({p}, p), model);
  const ExactMechanism* chain[] = {&channel, &channel};
  EXPECT_NEAR(bruteforce_max_ratio(chain, {1}, {2}), 4.0, 1e-12);
}

TEST(Bruteforce, CapIsEnforced) {
  const PrivacyModel model = PrivacyModel::FromLevelSizes({1.0}, {23});
  const BitProbs p{0.6, 0.3};
  const UnaryChannel channel = UnaryChannel::ForProfile(PerturbationProfile({p}, p), model);
  const ExactMechanism* chain[] = {&channel};
  EXPECT_THROW(bruteforce_max_ratio(chain, {1}, {2}), EnumerationCapExceeded);
  EXPECT_THROW(bruteforce_max_ratio(chain, {1}, {2}, 1 << 10), EnumerationCapExceeded);
}

TEST(Bruteforce, ZeroDenominatorIsRejected) {
  const PrivacyModel model = PrivacyModel::FromLevelSizes({1.0}, {2});
  const PerturbationProfile identity = PerturbationProfile::Unchecked({{1.0, 0.0}}, {1.0, 0.0});
  const UnaryChannel channel = UnaryChannel::ForProfile(identity, model);
  const ExactMechanism* chain[] = {&channel};
  EXPECT_THROW(bruteforce_max_ratio(chain, {1}, {2}), std::domain_error);
}

// Property: exhaustive enumeration matches the closed-form ratio.
TEST(Bruteforce, AgreesWithPairRatio) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + trial % 3;
    const std::size_t t = 1 + rng() % m;
    const PrivacyModel model = RandomModel(rng, m, t, RKind::kMin);
    std::vector<BitProbs> levels(t);
    for (BitProbs& p : levels) p = RandomProbs(rng);
    const PerturbationProfile profile(levels, levels[0]);
    const UnaryChannel channel = UnaryChannel::ForProfile(profile, model);
    const ExactMechanism* chain[] = {&channel};
    for (Item i = 1; i <= m; ++i) {
      for (Item j = 1; j <= m; ++j) {
        if (i == j) continue;
        const double expect = pair_ratio(profile, model.level_of(i), model.level_of(j));
        EXPECT_LT(RelErr(bruteforce_max_ratio(chain, {i}, {j}), expect), 1e-9);
      }
    }
  }
}

// Property: chained channels never exceed the summed budgets.
TEST(Bruteforce, CompositionBound) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 2 + trial % 2;
    const std::size_t t = 1 + rng() % m;
    auto [p1, model1] = TightPassingPair(rng, m, t);
    auto [p2, model2] = TightPassingPair(rng, m, t);
    // Both models must share the item assignment; rebuild the second one.
    std::vector<std::size_t> assignment(model1.item_levels().begin(), model1.item_levels().end());
    std::vector<double> budgets2(model2.budgets().begin(), model2.budgets().end());
    const PrivacyModel shared2(budgets2, assignment);
    std::vector<BitProbs> levels2(p2.levels().begin(), p2.levels().end());
    const PerturbationProfile profile2 = PerturbationProfile::WithDummyFromModel(levels2, shared2);
    ASSERT_TRUE(check_idldp(p1, model1).passed);
    ASSERT_TRUE(check_idldp(profile2, shared2).passed);
    const UnaryChannel c1 = UnaryChannel::ForProfile(p1, model1);
    const UnaryChannel c2 = UnaryChannel::ForProfile(profile2, shared2);
    const ExactMechanism* chain[] = {&c1, &c2};
    const std::vector<ItemSet> inputs = singleton_inputs(m);
    std::vector<double> totals;
    for (Item x = 1; x <= m; ++x) totals.push_back(model1.item_budget(x) + shared2.item_budget(x));
    EXPECT_TRUE(audit_bruteforce(chain, inputs, totals, RKind::kMin).passed);
  }
}

TEST(LdpEquivalence, Examples) {
  EXPECT_NEAR(ldp_equivalent_budget(ToyModel()), kLn6, 1e-15);
  EXPECT_DOUBLE_EQ(ldp_equivalent_budget(PrivacyModel::FromLevelSizes({1.0, 5.0}, {1, 1})), 2.0);
  EXPECT_DOUBLE_EQ(ldp_equivalent_budget(PrivacyModel::FromLevelSizes({0.8}, {4})), 0.8);
}

// Property: a profile passing MinID-LDP passes plain LDP at the equivalent
// budget.
TEST(LdpEquivalence, MinIdImpliesLdp) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 3;
    auto [profile, model] = TightPassingPair(rng, m, 1 + rng() % m);
    ASSERT_TRUE(check_idldp(profile, model).passed);
    const UnaryChannel channel = UnaryChannel::ForProfile(profile, model);
    const std::vector<ItemSet> inputs = singleton_inputs(m);
    EXPECT_TRUE(audit_ldp(channel, inputs, ldp_equivalent_budget(model)).passed);
  }
}

TEST(Grr, PassesLdpAtItsBudget) {
  for (std::size_t m : {2u, 3u, 6u}) {
    const GrrParams g = grr_params(1.3, m);
    const GrrChannel channel(m, g.p, g.q);
    const std::vector<ItemSet> inputs = singleton_inputs(m);
    const AuditReport report = audit_ldp(channel, inputs, 1.3);
    EXPECT_TRUE(report.passed);
    EXPECT_NEAR(report.max_ratio, std::exp(1.3), 1e-9);
  }
}

TEST(ItemsetBudget, Examples) {
  const PrivacyModel model = PrivacyModel::FromLevelSizes({kLn4, kLn6}, {1, 2});
  EXPECT_NEAR(itemset_budget({1}, model, 1, kLn4), kLn4, 1e-12);
  const PrivacyModel uniform = PrivacyModel::FromLevelSizes({0.9}, {3});
  EXPECT_NEAR(itemset_budget({1, 3}, uniform, 2, 0.9), 0.9, 1e-12);
  EXPECT_NEAR(itemset_budget({2}, model, 2, kLn4), std::log(5.0), 1e-12);
  EXPECT_THROW(itemset_budget({}, model, 0, kLn4), std::invalid_argument);
}

// Properties: the log-mean-exp dominates the plain mean and grows with every
// budget.
TEST(ItemsetBudget, ConvexityAndMonotonicity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> e(0.1, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 4;
    const PrivacyModel model = RandomModel(rng, m, 1 + rng() % m, RKind::kMin);
    ItemSet x;
    for (Item i = 1; i <= m; ++i) {
      if (rng() % 2) x.push_back(i);
    }
    const std::size_t ell = 1 + rng() % 4;
    const double star = e(rng);
    const double value = itemset_budget(x, model, ell, star);

    const double eta = static_cast<double>(x.size()) / std::max<double>(x.size(), ell);
    double mean = 0.0;
    for (Item i : x) mean += model.item_budget(i);
    if (!x.empty()) mean /= static_cast<double>(x.size());
    EXPECT_GE(value, eta * mean + (1.0 - eta) * star - 1e-12);

    EXPECT_GE(itemset_budget(x, model, ell, star + 0.3), value - 1e-12);
    const std::size_t bump = rng() % model.num_levels();
    std::vector<double> budgets(model.budgets().begin(), model.budgets().end());
    budgets[bump] += 0.4;
    const PrivacyModel raised(budgets, {model.item_levels().begin(), model.item_levels().end()});
    EXPECT_GE(itemset_budget(x, raised, ell, star), value - 1e-12);
  }
}

// Property: the closed-form sampling law equals full enumeration.
TEST(SamplingLaw, ClosedFormMatchesEnumeration) {
  for (std::size_t m = 1; m <= 4; ++m) {
    for (const ItemSet& x : all_item_sets(m)) {
      for (std::size_t ell = 1; ell <= 3; ++ell) {
        const auto closed = sampling_distribution(x, ell, m, SamplingLaw::kClosedForm);
        const auto enumerated = sampling_distribution(x, ell, m, SamplingLaw::kEnumerated);
        ASSERT_EQ(closed.size(), m + ell);
        double total = 0.0;
        for (std::size_t k = 0; k < closed.size(); ++k) {
          EXPECT_NEAR(closed[k], enumerated[k], 1e-12);
          total += closed[k];
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
      }
    }
  }
}

// Property: the padded channel is the sampling-law mixture of one-hot
// channels over m + l positions.
TEST(SamplingLaw, ChannelIsMixtureOfOneHots) {
  const PrivacyModel model = PrivacyModel::FromLevelSizes({kLn4, kLn6}, {1, 2});
  const PerturbationProfile profile = PrintedToyProfile();
  const std::size_t ell = 2;
  std::vector<BitProbs> positions;
  for (Item i = 1; i <= 3; ++i) positions.push_back(profile.level(model.level_of(i)));
  for (std::size_t k = 0; k < ell; ++k) positions.push_back(profile.dummy());
  const UnaryChannel onehot(positions);
  const PaddingSamplingChannel padded(profile, model, ell);
  for (const ItemSet& x : all_item_sets(3)) {
    const auto law = sampling_distribution(x, ell, 3, SamplingLaw::kClosedForm);
    const auto dist = padded.distribution(x);
    ASSERT_EQ(dist.size(), onehot.output_count());
    for (std::uint64_t y = 0; y < dist.size(); ++y) {
      double mix = 0.0;
      for (std::size_t k = 0; k < law.size(); ++k) mix += law[k] * onehot.onehot_probability(k + 1, y);
      EXPECT_NEAR(dist[y], mix, 1e-12);
    }
  }
}

TEST(ItemsetAudit, UniformRapporSingleItemPasses) {
  const double eps = 1.1;
  const PrivacyModel model = PrivacyModel::FromLevelSizes({eps}, {2});
  const PerturbationProfile profile = baseline_profile(Baseline::kRappor, eps, model);
  EXPECT_TRUE(audit_itemset(profile, model, 1, eps).passed());
}

TEST(ItemsetAudit, ToyStyleProfilePasses) {
  const PrivacyModel model = PrivacyModel::FromLevelSizes({kLn4, kLn6}, {1, 2});
  const ItemsetAudit audit = audit_itemset(PrintedToyProfile(), model, 2, kLn4);
  EXPECT_TRUE(audit.budget_bound.passed);
  EXPECT_TRUE(audit.mixture_bound.passed);
}

TEST(ItemsetAudit, SingleItemViolationFails) {
  const PrivacyModel model = PrivacyModel::FromLevelSizes({kLn4}, {2});
  const PerturbationProfile profile({{0.9, 0.1}}, {0.9, 0.1});
  ASSERT_FALSE(check_idldp(profile, model).passed);
  EXPECT_FALSE(audit_itemset(profile, model, 1, kLn4).passed());
}

TEST(Leakage, RapporLn4WithinBounds) {
  const PrivacyModel model = PrivacyModel::FromLevelSizes({kLn4}, {2});
  const PerturbationProfile profile = baseline_profile(Baseline::kRappor, kLn4, model);
  const std::vector<double> prior{0.5, 0.5};
  for (Item x = 1; x <= 2; ++x) {
    const LeakageBounds exact = leakage_bounds(prior, profile, model, x, LeakageMode::kExact);
    EXPECT_GE(exact.lower, 0.25 - 1e-12);
    EXPECT_LE(exact.upper, 4.0 + 1e-12);
    const LeakageBounds bound = leakage_bounds(prior, profile, model, x, LeakageMode::kBound);
    EXPECT_NEAR(bound.lower, 0.25, 1e-12);
    EXPECT_NEAR(bound.upper, 4.0, 1e-12);
  }
}

TEST(Leakage, IdentityLeaningProfileStaysWithinBound) {
  const BitProbs p{0.99, 0.01};
  const double eps = std::log(pair_ratio(p, p));
  const PrivacyModel model = PrivacyModel::FromLevelSizes({eps}, {2});
  const PerturbationProfile profile({p}, p);
  const std::vector<double> prior{0.5, 0.5};
  const LeakageBounds exact = leakage_bounds(prior, profile, model, 1, LeakageMode::kExact);
  const LeakageBounds bound = leakage_bounds(prior, profile, model, 1, LeakageMode::kBound);
  // The posterior nearly pins the input: Pr(x)/Pr(x|y) approaches 1/2.
  EXPECT_NEAR(exact.lower, 0.5, 0.02);
  EXPECT_GE(exact.lower, bound.lower);
  EXPECT_LE(exact.upper, bound.upper);
}

TEST(Leakage, NearUniformOutputLeaksNothing) {
  const PrivacyModel model = PrivacyModel::FromLevelSizes({0.01}, {3});
  const BitProbs p{0.5 + 1e-4, 0.5};
  const PerturbationProfile profile({p}, p);
  const std::vector<double> prior{0.2, 0.3, 0.5};
  const LeakageBounds exact = leakage_bounds(prior, profile, model, 2, LeakageMode::kExact);
  EXPECT_NEAR(exact.lower, 1.0, 1e-3);
  EXPECT_NEAR(exact.upper, 1.0, 1e-3);
}

TEST(Leakage, RejectsBadPrior) {
  const PrivacyModel model = PrivacyModel::FromLevelSizes({1.0}, {2});
  const PerturbationProfile profile({{0.6, 0.3}}, {0.6, 0.3});
  const std::vector<double> bad{0.5, 0.6};
  EXPECT_THROW(leakage_bounds(bad, profile, model, 1, LeakageMode::kExact), std::invalid_argument);
  const std::vector<double> short_prior{1.0};
  EXPECT_THROW(leakage_bounds(short_prior, profile, model, 1, LeakageMode::kExact),
               std::invalid_argument);
}

// Property: exact leakage under any prior lies inside the analytic bound.
TEST(Leakage, ExactWithinBound) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 3;
    auto [profile, model] = TightPassingPair(rng, m, 1 + rng() % m);
    std::vector<double> prior(m);
    double total = 0.0;
    for (double& p : prior) total += (p = 0.05 + w(rng));
    for (double& p : prior) p /= total;
    for (Item x = 1; x <= m; ++x) {
      const LeakageBounds exact = leakage_bounds(prior, profile, model, x, LeakageMode::kExact);
      const LeakageBounds bound = leakage_bounds(prior, profile, model, x, LeakageMode::kBound);
      EXPECT_GE(exact.lower, bound.lower * (1.0 - 1e-9));
      EXPECT_LE(exact.upper, bound.upper * (1.0 + 1e-9));
    }
  }
}

TEST(Leakage, SymbolicRowsAreReportedOnly) {
  const auto rows = symbolic_leakage_rows();
  ASSERT_FALSE(rows.empty());
  bool has_metric_row = false;
  for (const auto& [name, text] : rows) has_metric_row |= name == "GI/CLDP";
  EXPECT_TRUE(has_metric_row);
}

}  // namespace
}  // namespace idldp
