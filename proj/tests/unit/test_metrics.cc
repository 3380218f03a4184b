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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "idldp/data.h"
#include "idldp/estimation.h"
#include "idldp/mechanisms.h"
#include "idldp/metrics.h"
#include "idldp/optimizer.h"
#include "idldp/random.h"

namespace idldp {
namespace {

const std::vector<std::uint64_t> kTruth{50, 40, 30, 20, 10, 0};

std::vector<double> AsDouble(const std::vector<std::uint64_t>& v) { return {v.begin(), v.end()}; }

TEST(TotalMse, Examples) {
  EXPECT_EQ(total_mse(AsDouble(kTruth), kTruth, 100), 0.0);
  std::vector<double> shifted = AsDouble(kTruth);
  for (double& v : shifted) v += 1.0;
  EXPECT_DOUBLE_EQ(total_mse(shifted, kTruth, 100), 6.0 / 100.0);
  EXPECT_THROW(total_mse(shifted, kTruth, 0), std::invalid_argument);
  EXPECT_THROW(total_mse(std::vector<double>{1.0}, kTruth, 10), std::invalid_argument);
}

TEST(TotalMse, RapporToyScale) {
  const double eps = std::log(4.0);
  const PrivacyModel model = PrivacyModel::FromLevelSizes({eps}, {5});
  const PerturbationProfile profile = baseline_profile(Baseline::kRappor, eps, model);
  const BitLayout layout = BitLayout::ForProfile(profile, model);
  const std::vector<std::uint64_t> truth(5, 20000);
  RandomSource rng(1);
  // One run is 2 chi-square(5) with relative SD 0.63; the mean of 1000 runs
  // has relative SD 0.02.
  double mean = 0.0;
  for (int r = 0; r < 1000; ++r) {
    const auto est = estimate_single(sample_ue_counts(truth, 100000, layout, rng), profile, model);
    mean += total_mse(est.estimates, truth, 100000) / 1000.0;
  }
  EXPECT_NEAR(mean, 10.0, 1.0);
}

TEST(TopK, TiesBreakBySmallerId) {
  const std::vector<std::uint64_t> truth{5, 9, 9, 0, 5};
  EXPECT_EQ(true_top_k(truth, 3), (std::vector<Item>{2, 3, 1}));
  EXPECT_THROW(true_top_k(truth, 5), std::invalid_argument);
  const std::vector<double> est{1.0, 3.0, 3.0, 2.0};
  EXPECT_EQ(estimated_top_k(est, 2), (std::vector<Item>{2, 3}));
}

TEST(RelativeError, Examples) {
  EXPECT_EQ(re_at_k(AsDouble(kTruth), kTruth, 3), 0.0);
  std::vector<double> scaled = AsDouble(kTruth);
  for (double& v : scaled) v *= 1.1;
  EXPECT_NEAR(re_at_k(scaled, kTruth, 4), 0.1, 1e-12);
  EXPECT_THROW(re_at_k(scaled, kTruth, 6), std::invalid_argument);
}

TEST(RelativeError, DecreasesWithBudget) {
  const Dataset data = gen_powerlaw(100000, 100, 2.0, 7);
  const std::vector<std::uint64_t> truth = true_counts(data);
  RandomSource rng(2);
  double previous = std::numeric_limits<double>::infinity();
  for (double eps : {1.0, 2.0, 3.0, 4.0}) {
    const PrivacyModel model = PrivacyModel::FromLevelSizes({eps}, {100});
    const PerturbationProfile profile = baseline_profile(Baseline::kOue, eps, model);
    const BitLayout layout = BitLayout::ForProfile(profile, model);
    double mean = 0.0;
    for (int r = 0; r < 10; ++r) {
      const auto est = estimate_single(sample_ue_counts(truth, data.num_records(), layout, rng),
                                       profile, model);
      mean += re_at_k(est.estimates, truth, 20) / 10.0;
    }
    EXPECT_LT(mean, previous) << eps;
    previous = mean;
  }
}

TEST(Precision, Examples) {
  EXPECT_EQ(precision_at_k(AsDouble(kTruth), kTruth, 3), 1.0);
  const std::vector<std::uint64_t> strict{6, 5, 4, 3, 2, 1};
  const std::vector<double> reversed{1, 2, 3, 4, 5, 6};
  EXPECT_EQ(precision_at_k(reversed, strict, 3), 0.0);
  EXPECT_EQ(precision_at_k(reversed, strict, 6), 1.0);
}

// Properties: permutation invariance and precision 1 at k = m.
TEST(Metrics, PermutationInvariance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> noise(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 8;
    std::vector<std::uint64_t> truth(m);
    std::vector<double> est(m);
    for (std::size_t i = 0; i < m; ++i) {
      truth[i] = 1 + rng() % 1000;
      est[i] = truth[i] + noise(rng);
    }
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::uint64_t> truth_p(m);
    std::vector<double> est_p(m);
    for (std::size_t i = 0; i < m; ++i) {
      truth_p[perm[i]] = truth[i];
      est_p[perm[i]] = est[i];
    }
    EXPECT_NEAR(total_mse(est, truth, 100), total_mse(est_p, truth_p, 100), 1e-9);
    EXPECT_EQ(precision_at_k(est, truth, m), 1.0);
    // Rankings with distinct values do not depend on id order.
    std::vector<std::uint64_t> sorted = truth;
    std::sort(sorted.begin(), sorted.end());
    const bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    if (distinct) {
      EXPECT_NEAR(re_at_k(est, truth, 3), re_at_k(est_p, truth_p, 3), 1e-12);
      EXPECT_EQ(precision_at_k(est, truth, 3), precision_at_k(est_p, truth_p, 3));
    }
  }
}

}  // namespace
}  // namespace idldp
