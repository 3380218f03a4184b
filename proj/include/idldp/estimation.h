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

// Server-side aggregation, unbiased frequency estimators and their
// variances. Estimates are never clamped.

#ifndef IDLDP_ESTIMATION_H_
#define IDLDP_ESTIMATION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "idldp/mechanisms.h"
#include "idldp/model.h"

namespace idldp {

// Per-position counts of `reports`; all reports must share one length.
ReportBatch aggregate(std::span<const BitVector> reports, std::size_t padded_len = 0);

// Sums two batches over the same positions and padding.
ReportBatch merge_batches(const ReportBatch& x, const ReportBatch& y);

// c_hat_i = (c_i - n b_i) / (a_i - b_i) for items 1..m.
FrequencyEstimate estimate_single(const ReportBatch& batch, const PerturbationProfile& profile,
                                  const PrivacyModel& model);

// ell (c_i - n b_i) / (a_i - b_i) for items 1..m; dummy positions are
// dropped. Unbiased only when no record is longer than ell.
FrequencyEstimate estimate_itemset(const ReportBatch& batch, const PerturbationProfile& profile,
                                   const PrivacyModel& model, std::size_t ell);

// c_hat_i = (c_i - n q) / (p - q) from per-item report counts.
FrequencyEstimate grr_estimate(std::span<const std::uint64_t> observed, std::uint64_t n,
                               const GrrParams& params);

struct MseBreakdown {
  std::vector<double> per_item;
  double total = 0.0;
};

// Var[c_hat_i] = n b(1-b)/(a-b)^2 + c*_i (1-a-b)/(a-b), which equals the MSE
// of the unbiased estimator.
MseBreakdown theoretical_mse(const PerturbationProfile& profile, const PrivacyModel& model,
                             std::span<const double> true_counts, std::uint64_t n);
MseBreakdown theoretical_mse(const PerturbationProfile& profile, const PrivacyModel& model,
                             std::span<const std::uint64_t> true_counts, std::uint64_t n);

// Expected number of users whose sampled item is i:
// sum over records containing i of 1 / max(|x|, ell).
std::vector<double> expected_sampled_counts(const Dataset& dataset, std::size_t ell);

// Approximate variance of estimate_itemset: ell^2 times the single-item
// formula evaluated at the expected sampled counts.
MseBreakdown theoretical_mse_itemset(const PerturbationProfile& profile,
                                     const PrivacyModel& model, const Dataset& dataset,
                                     std::size_t ell);

// [c* p(1-p) + (n-c*) q(1-q)] / (p-q)^2 per item.
MseBreakdown grr_theoretical_mse(const GrrParams& params,
                                 std::span<const std::uint64_t> true_counts, std::uint64_t n);

}  // namespace idldp

#endif  // IDLDP_ESTIMATION_H_
