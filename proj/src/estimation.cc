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

#include "idldp/estimation.h"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace idldp {

namespace {

void CheckProfile(const PerturbationProfile& profile, const PrivacyModel& model) {
  if (profile.num_levels() != model.num_levels()) {
    throw std::invalid_argument("profile has " + std::to_string(profile.num_levels()) +
                                " levels but the model has " +
                                std::to_string(model.num_levels()));
  }
  for (const BitProbs& p : profile.levels()) {
    if (p.a == p.b) throw std::invalid_argument("a = b makes the estimator undefined");
  }
}

FrequencyEstimate Calibrate(const ReportBatch& batch, const PerturbationProfile& profile,
                            const PrivacyModel& model, double scale) {
  CheckProfile(profile, model);
  batch.Validate();
  const std::size_t m = model.universe_size();
  if (batch.bit_counts.size() != m + batch.padded_len) {
    throw std::invalid_argument("batch has " + std::to_string(batch.bit_counts.size()) +
                                " positions, expected " + std::to_string(m + batch.padded_len));
  }
  FrequencyEstimate est;
  est.n = batch.n;
  est.estimates.resize(m);
  const auto n = static_cast<double>(batch.n);
  for (std::size_t i = 0; i < m; ++i) {
    const BitProbs& p = profile.level(model.item_levels()[i]);
    est.estimates[i] =
        scale * (static_cast<double>(batch.bit_counts[i]) - n * p.b) / (p.a - p.b);
  }
  return est;
}

}  // namespace

ReportBatch aggregate(std::span<const BitVector> reports, std::size_t padded_len) {
  ReportBatch batch;
  batch.padded_len = padded_len;
  batch.n = reports.size();
  if (reports.empty()) return batch;
  const std::size_t len = reports.front().size();
  batch.bit_counts.assign(len, 0);
  for (const BitVector& r : reports) {
    if (r.size() != len) throw std::invalid_argument("reports differ in length");
    const auto words = r.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
      std::uint64_t word = words[w];
      while (word != 0) {
        ++batch.bit_counts[w * 64 + static_cast<std::size_t>(std::countr_zero(word))];
        word &= word - 1;
      }
    }
  }
  return batch;
}

ReportBatch merge_batches(const ReportBatch& x, const ReportBatch& y) {
  if (x.padded_len != y.padded_len) throw std::invalid_argument("padding lengths differ");
  if (x.n == 0 && x.bit_counts.empty()) return y;
  if (y.n == 0 && y.bit_counts.empty()) return x;
  if (x.bit_counts.size() != y.bit_counts.size()) {
    throw std::invalid_argument("batches differ in length");
  }
  ReportBatch out = x;
  out.n += y.n;
  for (std::size_t k = 0; k < out.bit_counts.size(); ++k) out.bit_counts[k] += y.bit_counts[k];
  return out;
}

FrequencyEstimate estimate_single(const ReportBatch& batch, const PerturbationProfile& profile,
                                  const PrivacyModel& model) {
  if (batch.padded_len != 0) throw std::invalid_argument("batch carries padded positions");
  return Calibrate(batch, profile, model, 1.0);
}

FrequencyEstimate estimate_itemset(const ReportBatch& batch, const PerturbationProfile& profile,
                                   const PrivacyModel& model, std::size_t ell) {
  if (ell < 1) throw std::invalid_argument("padding length must be at least 1");
  if (batch.padded_len != ell) throw std::invalid_argument("batch padding does not match ell");
  return Calibrate(batch, profile, model, static_cast<double>(ell));
}

FrequencyEstimate grr_estimate(std::span<const std::uint64_t> observed, std::uint64_t n,
                               const GrrParams& params) {
  if (params.p == params.q) throw std::invalid_argument("p = q makes the estimator undefined");
  FrequencyEstimate est;
  est.n = n;
  est.estimates.reserve(observed.size());
  for (std::uint64_t c : observed) {
    if (c > n) throw std::invalid_argument("observed count exceeds n");
    est.estimates.push_back((static_cast<double>(c) - static_cast<double>(n) * params.q) /
                            (params.p - params.q));
  }
  return est;
}

MseBreakdown theoretical_mse(const PerturbationProfile& profile, const PrivacyModel& model,
                             std::span<const double> true_counts, std::uint64_t n) {
  CheckProfile(profile, model);
  if (true_counts.size() != model.universe_size()) {
    throw std::invalid_argument("one true count per item is required");
  }
  MseBreakdown out;
  out.per_item.resize(true_counts.size());
  for (std::size_t i = 0; i < true_counts.size(); ++i) {
    const BitProbs& p = profile.level(model.item_levels()[i]);
    const double diff = p.a - p.b;
    out.per_item[i] = static_cast<double>(n) * p.b * (1.0 - p.b) / (diff * diff) +
                      true_counts[i] * (1.0 - p.a - p.b) / diff;
    out.total += out.per_item[i];
  }
  return out;
}

MseBreakdown theoretical_mse(const PerturbationProfile& profile, const PrivacyModel& model,
                             std::span<const std::uint64_t> true_counts, std::uint64_t n) {
  const std::vector<double> counts(true_counts.begin(), true_counts.end());
  return theoretical_mse(profile, model, std::span<const double>(counts), n);
}

std::vector<double> expected_sampled_counts(const Dataset& dataset, std::size_t ell) {
  if (ell < 1) throw std::invalid_argument("padding length must be at least 1");
  std::vector<double> out(dataset.universe_size(), 0.0);
  for (const ItemSet& x : dataset.records()) {
    const double share = 1.0 / static_cast<double>(std::max(x.size(), ell));
    for (Item item : x) out[item - 1] += share;
  }
  return out;
}

MseBreakdown theoretical_mse_itemset(const PerturbationProfile& profile,
                                     const PrivacyModel& model, const Dataset& dataset,
                                     std::size_t ell) {
  const std::vector<double> sampled = expected_sampled_counts(dataset, ell);
  MseBreakdown out = theoretical_mse(profile, model, sampled, dataset.num_records());
  const double factor = static_cast<double>(ell) * static_cast<double>(ell);
  out.total = 0.0;
  for (double& v : out.per_item) {
    v *= factor;
    out.total += v;
  }
  return out;
}

MseBreakdown grr_theoretical_mse(const GrrParams& params,
                                 std::span<const std::uint64_t> true_counts, std::uint64_t n) {
  if (params.p == params.q) throw std::invalid_argument("p = q makes the estimator undefined");
  const double diff = params.p - params.q;
  MseBreakdown out;
  for (std::uint64_t c : true_counts) {
    const double truth = static_cast<double>(c);
    const double v = (truth * params.p * (1.0 - params.p) +
                      (static_cast<double>(n) - truth) * params.q * (1.0 - params.q)) /
                     (diff * diff);
    out.per_item.push_back(v);
    out.total += v;
  }
  return out;
}

}  // namespace idldp
