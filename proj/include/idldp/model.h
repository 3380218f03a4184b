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

// Core domain types: privacy model, perturbation profile, datasets, report
// batches, estimates and audit reports.
//
// Conventions used throughout the library:
//  * Items are 1-based ids in 1..m. Dummy items used by padding occupy
//    m+1..m+l.
//  * Privacy levels are 0-based indices in C++ and 1-based in documents.
//  * Budgets are natural-log units.

#ifndef IDLDP_MODEL_H_
#define IDLDP_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace idldp {

using Item = std::uint32_t;
using ItemSet = std::vector<Item>;

// How the indistinguishability budget of a pair of inputs is derived from
// their individual budgets.
enum class RKind { kMin, kAvg };

std::string to_string(RKind kind);
RKind parse_r_kind(const std::string& text);

// Pair budget for two individual budgets under `kind`.
double combine_budgets(RKind kind, double eps_i, double eps_j);

// Per-level budgets plus the item -> level assignment.
//
// Every level must own at least one item; use CompactLevels() when an
// assignment may leave levels empty.
class PrivacyModel {
 public:
  // `item_level[k]` is the level of item k+1.
  PrivacyModel(std::vector<double> budgets, std::vector<std::size_t> item_level,
               RKind r_kind = RKind::kMin);

  // Items are assigned to levels in contiguous blocks: the first
  // level_sizes[0] items go to level 0 and so on.
  static PrivacyModel FromLevelSizes(std::vector<double> budgets,
                                     const std::vector<std::size_t>& level_sizes,
                                     RKind r_kind = RKind::kMin);

  // Drops levels that own no item and renumbers the remaining ones in order.
  static PrivacyModel CompactLevels(const std::vector<double>& budgets,
                                    const std::vector<std::size_t>& item_level,
                                    RKind r_kind = RKind::kMin);

  std::size_t num_levels() const { return budgets_.size(); }
  std::size_t universe_size() const { return item_level_.size(); }
  RKind r_kind() const { return r_kind_; }

  std::span<const double> budgets() const { return budgets_; }
  double budget(std::size_t level) const;
  std::span<const std::size_t> level_sizes() const { return level_sizes_; }
  std::span<const std::size_t> item_levels() const { return item_level_; }
  std::size_t level_of(Item item) const;
  double item_budget(Item item) const { return budget(level_of(item)); }

  double min_budget() const;
  double max_budget() const;
  // Lowest-index level whose budget equals min_budget().
  std::size_t min_budget_level() const;

  // Same levels and item assignment, different r-function.
  PrivacyModel WithRKind(RKind kind) const;

 private:
  std::vector<double> budgets_;
  std::vector<std::size_t> item_level_;
  std::vector<std::size_t> level_sizes_;
  RKind r_kind_;
};

// r(eps_i, eps_j) for two levels. Symmetric. Throws std::out_of_range on a
// bad level index.
double r_eval(const PrivacyModel& model, std::size_t level_i, std::size_t level_j);

// Perturbation probabilities of one bit position: Pr(y=1|x=1) = a,
// Pr(y=1|x=0) = b.
struct BitProbs {
  double a = 0.5;
  double b = 0.5;

  double alpha() const { return a / b; }
  double beta() const { return (1.0 - a) / (1.0 - b); }

  friend bool operator==(const BitProbs&, const BitProbs&) = default;
};

// Per-level (a, b) pairs plus the pair used for padded dummy items.
class PerturbationProfile {
 public:
  // Enforces 0 < b < a < 1 for every level and for the dummy pair.
  PerturbationProfile(std::vector<BitProbs> levels, BitProbs dummy);

  // A profile whose dummy pair copies the level with the smallest budget.
  static PerturbationProfile WithDummyFromModel(std::vector<BitProbs> levels,
                                                const PrivacyModel& model);

  // Test hook: only requires 0 <= b, a <= 1, so degenerate channels such as
  // the identity (a=1, b=0) can drive the pipeline. Never produced by the
  // optimizer.
  static PerturbationProfile Unchecked(std::vector<BitProbs> levels, BitProbs dummy);

  std::size_t num_levels() const { return levels_.size(); }
  const BitProbs& level(std::size_t i) const;
  std::span<const BitProbs> levels() const { return levels_; }
  const BitProbs& dummy() const { return dummy_; }
  bool validated() const { return validated_; }

  friend bool operator==(const PerturbationProfile&, const PerturbationProfile&) = default;

 private:
  PerturbationProfile() = default;

  std::vector<BitProbs> levels_;
  BitProbs dummy_;
  bool validated_ = false;
};

// Records over the universe 1..m, one record (item set) per user.
class Dataset {
 public:
  Dataset() = default;
  // Validates ids and rejects duplicates inside a record.
  Dataset(std::size_t m, std::vector<ItemSet> records);

  std::size_t universe_size() const { return m_; }
  std::size_t num_records() const { return records_.size(); }
  std::span<const ItemSet> records() const { return records_; }
  const ItemSet& record(std::size_t u) const { return records_.at(u); }

  bool single_item() const;
  std::size_t max_record_size() const;
  double mean_record_size() const;
  std::uint64_t total_items() const;

  // Original ids for each dense id (index k holds the id of item k+1). Empty
  // when the dataset was not remapped.
  std::span<const std::uint64_t> original_ids() const { return original_ids_; }
  void set_original_ids(std::vector<std::uint64_t> ids);
  std::uint64_t original_id(Item item) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t m_ = 0;
  std::vector<ItemSet> records_;
  std::vector<std::uint64_t> original_ids_;
};

// c*_i: number of users whose record contains item i (index i-1).
std::vector<std::uint64_t> true_counts(const Dataset& dataset);

// Keeps the first item of each record and drops empty records.
Dataset first_item_projection(const Dataset& dataset);

// Aggregated per-position counts from n reports.
struct ReportBatch {
  std::vector<std::uint64_t> bit_counts;
  std::uint64_t n = 0;
  std::size_t padded_len = 0;

  // Throws std::invalid_argument if any count exceeds n.
  void Validate() const;
};

struct FrequencyEstimate {
  std::vector<double> estimates;  // one per real item; never clamped
  std::uint64_t n = 0;
};

// Outcome of a privacy audit. Among all checked pairs the reported one is
// the pair with the largest ratio / bound.
struct AuditReport {
  std::string name;
  double max_ratio = 1.0;
  double bound = 1.0;
  std::string worst_x;
  std::string worst_x_prime;
  double slack = 0.0;
  bool passed = true;
  std::size_t pairs_checked = 0;
};

// Folds one (ratio, bound) observation into `report`.
void RecordPair(AuditReport& report, double ratio, double bound, double tol,
                const std::string& x, const std::string& x_prime);

std::string format_item_set(const ItemSet& items);

}  // namespace idldp

#endif  // IDLDP_MODEL_H_
