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

#include "idldp/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace idldp {

std::string to_string(RKind kind) { return kind == RKind::kMin ? "min" : "avg"; }

RKind parse_r_kind(const std::string& text) {
  if (text == "min" || text == "MIN") return RKind::kMin;
  if (text == "avg" || text == "AVG") return RKind::kAvg;
  throw std::invalid_argument("unknown r-kind '" + text + "' (expected min or avg)");
}

double combine_budgets(RKind kind, double eps_i, double eps_j) {
  return kind == RKind::kMin ? std::min(eps_i, eps_j) : 0.5 * (eps_i + eps_j);
}

PrivacyModel::PrivacyModel(std::vector<double> budgets,
                           std::vector<std::size_t> item_level, RKind r_kind)
    : budgets_(std::move(budgets)), item_level_(std::move(item_level)), r_kind_(r_kind) {
  if (budgets_.empty()) throw std::invalid_argument("privacy model needs at least one level");
  for (double eps : budgets_) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
      throw std::invalid_argument("privacy budgets must be positive and finite");
    }
  }
  level_sizes_.assign(budgets_.size(), 0);
  for (std::size_t level : item_level_) {
    if (level >= budgets_.size()) {
      throw std::invalid_argument("item assigned to level " + std::to_string(level + 1) +
                                  " but the model has " +
                                  std::to_string(budgets_.size()) + " levels");
    }
    ++level_sizes_[level];
  }
  for (std::size_t i = 0; i < level_sizes_.size(); ++i) {
    if (level_sizes_[i] == 0) {
      throw std::invalid_argument("privacy level " + std::to_string(i + 1) + " owns no item");
    }
  }
}

PrivacyModel PrivacyModel::FromLevelSizes(std::vector<double> budgets,
                                          const std::vector<std::size_t>& level_sizes,
                                          RKind r_kind) {
  if (level_sizes.size() != budgets.size()) {
    throw std::invalid_argument("level sizes and budgets differ in length");
  }
  std::vector<std::size_t> item_level;
  for (std::size_t level = 0; level < level_sizes.size(); ++level) {
    item_level.insert(item_level.end(), level_sizes[level], level);
  }
  return PrivacyModel(std::move(budgets), std::move(item_level), r_kind);
}

PrivacyModel PrivacyModel::CompactLevels(const std::vector<double>& budgets,
                                         const std::vector<std::size_t>& item_level,
                                         RKind r_kind) {
  std::vector<std::size_t> used(budgets.size(), 0);
  for (std::size_t level : item_level) {
    if (level >= budgets.size()) throw std::invalid_argument("item level out of range");
    ++used[level];
  }
  std::vector<std::size_t> remap(budgets.size(), 0);
  std::vector<double> kept;
  for (std::size_t level = 0; level < budgets.size(); ++level) {
    if (used[level] > 0) {
      remap[level] = kept.size();
      kept.push_back(budgets[level]);
    }
  }
  std::vector<std::size_t> levels(item_level.size());
  std::transform(item_level.begin(), item_level.end(), levels.begin(),
                 [&](std::size_t l) { return remap[l]; });
  return PrivacyModel(std::move(kept), std::move(levels), r_kind);
}

double PrivacyModel::budget(std::size_t level) const {
  if (level >= budgets_.size()) {
    throw std::out_of_range("privacy level " + std::to_string(level) + " out of range");
  }
  return budgets_[level];
}

std::size_t PrivacyModel::level_of(Item item) const {
  if (item < 1 || item > item_level_.size()) {
    throw std::out_of_range("item " + std::to_string(item) + " outside 1.." +
                            std::to_string(item_level_.size()));
  }
  return item_level_[item - 1];
}

double PrivacyModel::min_budget() const {
  return *std::min_element(budgets_.begin(), budgets_.end());
}

double PrivacyModel::max_budget() const {
  return *std::max_element(budgets_.begin(), budgets_.end());
}

std::size_t PrivacyModel::min_budget_level() const {
  return static_cast<std::size_t>(
      std::min_element(budgets_.begin(), budgets_.end()) - budgets_.begin());
}

PrivacyModel PrivacyModel::WithRKind(RKind kind) const {
  PrivacyModel copy = *this;
  copy.r_kind_ = kind;
  return copy;
}

double r_eval(const PrivacyModel& model, std::size_t level_i, std::size_t level_j) {
  return combine_budgets(model.r_kind(), model.budget(level_i), model.budget(level_j));
}

namespace {

void ValidateStrict(const BitProbs& p, const std::string& where) {
  if (!(p.b > 0.0 && p.b < p.a && p.a < 1.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << where << ": probabilities must satisfy 0 < b < a < 1 (a=" << p.a << ", b=" << p.b
        << ")";
    throw std::invalid_argument(msg.str());
  }
}

void ValidateLoose(const BitProbs& p, const std::string& where) {
  if (!(p.a >= 0.0 && p.a <= 1.0 && p.b >= 0.0 && p.b <= 1.0)) {
    throw std::invalid_argument(where + ": probabilities must lie in [0, 1]");
  }
}

}  // namespace

PerturbationProfile::PerturbationProfile(std::vector<BitProbs> levels, BitProbs dummy)
    : levels_(std::move(levels)), dummy_(dummy), validated_(true) {
  if (levels_.empty()) throw std::invalid_argument("profile needs at least one level");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    ValidateStrict(levels_[i], "level " + std::to_string(i + 1));
  }
  ValidateStrict(dummy_, "dummy pair");
}

PerturbationProfile PerturbationProfile::WithDummyFromModel(std::vector<BitProbs> levels,
                                                            const PrivacyModel& model) {
  if (levels.size() != model.num_levels()) {
    throw std::invalid_argument("profile and model differ in level count");
  }
  BitProbs dummy = levels[model.min_budget_level()];
  return PerturbationProfile(std::move(levels), dummy);
}

PerturbationProfile PerturbationProfile::Unchecked(std::vector<BitProbs> levels,
                                                   BitProbs dummy) {
  if (levels.empty()) throw std::invalid_argument("profile needs at least one level");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    ValidateLoose(levels[i], "level " + std::to_string(i + 1));
  }
  ValidateLoose(dummy, "dummy pair");
  PerturbationProfile profile;
  profile.levels_ = std::move(levels);
  profile.dummy_ = dummy;
  profile.validated_ = false;
  return profile;
}

const BitProbs& PerturbationProfile::level(std::size_t i) const {
  if (i >= levels_.size()) {
    throw std::out_of_range("profile level " + std::to_string(i) + " out of range");
  }
  return levels_[i];
}

Dataset::Dataset(std::size_t m, std::vector<ItemSet> records)
    : m_(m), records_(std::move(records)) {
  std::vector<std::uint32_t> seen_in(m_ + 1, 0);
  for (std::size_t u = 0; u < records_.size(); ++u) {
    const auto stamp = static_cast<std::uint32_t>(u + 1);
    for (Item item : records_[u]) {
      if (item < 1 || item > m_) {
        throw std::invalid_argument("record " + std::to_string(u) + " holds item " +
                                    std::to_string(item) + " outside 1.." +
                                    std::to_string(m_));
      }
      if (seen_in[item] == stamp) {
        throw std::invalid_argument("record " + std::to_string(u) + " repeats item " +
                                    std::to_string(item));
      }
      seen_in[item] = stamp;
    }
  }
}

bool Dataset::single_item() const {
  return std::all_of(records_.begin(), records_.end(),
                     [](const ItemSet& r) { return r.size() == 1; });
}

std::size_t Dataset::max_record_size() const {
  std::size_t best = 0;
  for (const auto& r : records_) best = std::max(best, r.size());
  return best;
}

double Dataset::mean_record_size() const {
  if (records_.empty()) return 0.0;
  return static_cast<double>(total_items()) / static_cast<double>(records_.size());
}

std::uint64_t Dataset::total_items() const {
  std::uint64_t total = 0;
  for (const auto& r : records_) total += r.size();
  return total;
}

void Dataset::set_original_ids(std::vector<std::uint64_t> ids) {
  if (!ids.empty() && ids.size() != m_) {
    throw std::invalid_argument("original id table must have one entry per item");
  }
  original_ids_ = std::move(ids);
}

std::uint64_t Dataset::original_id(Item item) const {
  if (item < 1 || item > m_) throw std::out_of_range("item outside universe");
  return original_ids_.empty() ? item : original_ids_[item - 1];
}

std::vector<std::uint64_t> true_counts(const Dataset& dataset) {
  std::vector<std::uint64_t> counts(dataset.universe_size(), 0);
  for (const auto& record : dataset.records()) {
    for (Item item : record) ++counts[item - 1];
  }
  return counts;
}

Dataset first_item_projection(const Dataset& dataset) {
  std::vector<ItemSet> records;
  records.reserve(dataset.num_records());
  for (const auto& record : dataset.records()) {
    if (!record.empty()) records.push_back({record.front()});
  }
  Dataset projected(dataset.universe_size(), std::move(records));
  projected.set_original_ids(
      std::vector<std::uint64_t>(dataset.original_ids().begin(), dataset.original_ids().end()));
  return projected;
}

void ReportBatch::Validate() const {
  for (std::size_t i = 0; i < bit_counts.size(); ++i) {
    if (bit_counts[i] > n) {
      throw std::invalid_argument("bit count at position " + std::to_string(i + 1) +
                                  " exceeds the report count");
    }
  }
}

void RecordPair(AuditReport& report, double ratio, double bound, double tol,
                const std::string& x, const std::string& x_prime) {
  const bool ok = ratio <= bound * (1.0 + tol);
  const bool worse = report.pairs_checked == 0 || ratio / bound > report.max_ratio / report.bound;
  ++report.pairs_checked;
  if (!ok) report.passed = false;
  if (worse) {
    report.max_ratio = ratio;
    report.bound = bound;
    report.slack = bound - ratio;
    report.worst_x = x;
    report.worst_x_prime = x_prime;
  }
}

std::string format_item_set(const ItemSet& items) {
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(items[i]);
  }
  return out + "}";
}

}  // namespace idldp
