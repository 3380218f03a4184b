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

// Synthetic generators, transaction-file ingestion and privacy-level
// assignment. Everything here is a pure function of its arguments and seed.

#ifndef IDLDP_DATA_H_
#define IDLDP_DATA_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "idldp/model.h"

namespace idldp {

// n singleton records. Draws x = u^{-1/(alpha-1)} with u uniform on
// [(m+0.5)^{-(alpha-1)}, 1], i.e. the inverse CDF of a continuous power law
// with x_min = 1 truncated to [1, m+0.5], then rounds half-up and clamps to
// [1, m].
Dataset gen_powerlaw(std::size_t n, std::size_t m, double alpha, std::uint64_t seed);

// n singleton records uniform over 1..m.
Dataset gen_uniform(std::size_t n, std::size_t m, std::uint64_t seed);

enum class TransactionFormat {
  // One record per line, whitespace-separated non-negative integer ids.
  kSpaceSepIds,
  // Header-less "user,item" rows grouped into one record per user, in order
  // of first appearance.
  kCsvUserItem,
};

TransactionFormat parse_transaction_format(const std::string& text);

struct LoadResult {
  Dataset dataset;
  std::size_t duplicates_dropped = 0;
  std::size_t blank_lines = 0;
  std::vector<std::string> warnings;
};

// Ids are remapped densely to 1..m in ascending order of the original id;
// the table is kept in Dataset::original_ids(). Throws ParseError (with the
// line number) on malformed input or an empty file, IoError if the file
// cannot be read.
LoadResult load_transactions(const std::string& path, TransactionFormat format);
LoadResult parse_transactions(std::istream& in, TransactionFormat format);

// Writes SPACE_SEP_IDS lines using original ids when present.
void save_transactions(const Dataset& dataset, const std::string& path);
void write_transactions(const Dataset& dataset, std::ostream& out);

// Level (0-based) of every item. Level sizes are round(m * fraction) with
// largest-remainder rounding; items are placed by a seeded shuffle.
std::vector<std::size_t> assign_levels(std::size_t m, std::span<const double> fractions,
                                       std::uint64_t seed);
// Level sizes assign_levels would produce.
std::vector<std::size_t> level_counts(std::size_t m, std::span<const double> fractions);

struct DatasetSummary {
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t total_items = 0;
  double mean_record_size = 0.0;
  std::size_t max_record_size = 0;
  std::size_t distinct_items = 0;
};

DatasetSummary summarize(const Dataset& dataset);

struct ReferenceDataset {
  std::string name;
  std::size_t n;
  std::size_t m;
};

// Published sizes of the Retail, Kosarak and Clothing datasets.
std::span<const ReferenceDataset> reference_datasets();

}  // namespace idldp

#endif  // IDLDP_DATA_H_
