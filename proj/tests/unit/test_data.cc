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
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "idldp/data.h"
#include "idldp/error.h"

namespace idldp {
namespace {

LoadResult Parse(const std::string& text, TransactionFormat format = TransactionFormat::kSpaceSepIds) {
  std::istringstream in(text);
  return parse_transactions(in, format);
}

TEST(PowerLaw, HeavyHeadAndSlope) {
  const Dataset data = gen_powerlaw(100000, 100, 2.0, 1);
  ASSERT_EQ(data.num_records(), 100000u);
  ASSERT_TRUE(data.single_item());
  std::vector<std::uint64_t> counts = true_counts(data);
  EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}), 100000u);
  std::vector<std::uint64_t> sorted = counts;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_GE(*std::max_element(counts.begin(), counts.end()), 10 * sorted[sorted.size() / 2]);

  // Least-squares fit of log count on log item id.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0, k = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    const double x = std::log(static_cast<double>(i + 1));
    const double y = std::log(static_cast<double>(counts[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    k += 1;
  }
  const double cov = sxy - sx * sy / k;
  const double vx = sxx - sx * sx / k;
  const double vy = syy - sy * sy / k;
  const double slope = cov / vx;
  EXPECT_NEAR(slope, -2.0, 0.3);
  EXPECT_GT(cov * cov / (vx * vy), 0.9);
}

TEST(PowerLaw, DegenerateAndDeterministic) {
  const Dataset one = gen_powerlaw(50, 1, 2.0, 3);
  for (const ItemSet& r : one.records()) EXPECT_EQ(r, ItemSet{1});
  EXPECT_EQ(gen_powerlaw(1000, 30, 2.5, 9), gen_powerlaw(1000, 30, 2.5, 9));
  EXPECT_NE(gen_powerlaw(1000, 30, 2.5, 9), gen_powerlaw(1000, 30, 2.5, 10));
  EXPECT_THROW(gen_powerlaw(10, 10, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(gen_powerlaw(0, 10, 2.0, 1), std::invalid_argument);
}

TEST(Uniform, BinaryBand) {
  const auto counts = true_counts(gen_uniform(100000, 2, 4));
  EXPECT_NEAR(static_cast<double>(counts[0]), 50000.0, 700.0);
  EXPECT_NEAR(static_cast<double>(counts[1]), 50000.0, 700.0);
}

TEST(Uniform, ChiSquareOverHundredItems) {
  const auto counts = true_counts(gen_uniform(100000, 100, 5));
  double stat = 0.0;
  for (std::uint64_t c : counts) stat += (c - 1000.0) * (c - 1000.0) / 1000.0;
  // 99 degrees of freedom; the 0.01 critical value is 134.6.
  EXPECT_LT(stat, 134.6);
}

TEST(Uniform, DegenerateAndDeterministic) {
  const Dataset one = gen_uniform(20, 1, 1);
  for (const ItemSet& r : one.records()) EXPECT_EQ(r, ItemSet{1});
  EXPECT_EQ(gen_uniform(500, 7, 2), gen_uniform(500, 7, 2));
}

TEST(Load, SpaceSeparatedExample) {
  const LoadResult r = Parse("1 2\n2 3\n");
  EXPECT_EQ(r.dataset.universe_size(), 3u);
  ASSERT_EQ(r.dataset.num_records(), 2u);
  EXPECT_EQ(r.dataset.record(0), (ItemSet{1, 2}));
  EXPECT_EQ(r.dataset.record(1), (ItemSet{2, 3}));
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Load, DuplicatesDroppedWithWarning) {
  const LoadResult r = Parse("5 5 7\n7\n");
  EXPECT_EQ(r.duplicates_dropped, 1u);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("line 1"), std::string::npos);
  EXPECT_EQ(r.dataset.record(0), (ItemSet{1, 2}));
}

TEST(Load, SparseIdsAreRemappedDensely) {
  const LoadResult r = Parse("100 7\n\n40000\n");
  EXPECT_EQ(r.blank_lines, 1u);
  EXPECT_EQ(r.dataset.universe_size(), 3u);
  EXPECT_EQ(r.dataset.record(0), (ItemSet{2, 1}));
  EXPECT_EQ(r.dataset.record(1), (ItemSet{3}));
  EXPECT_EQ(r.dataset.original_id(3), 40000u);
}

TEST(Load, CsvGroupsByUser) {
  const LoadResult r = Parse("u1,10\nu2,20\nu1,30\nu1,10\n", TransactionFormat::kCsvUserItem);
  ASSERT_EQ(r.dataset.num_records(), 2u);
  EXPECT_EQ(r.dataset.record(0), (ItemSet{1, 3}));
  EXPECT_EQ(r.dataset.record(1), (ItemSet{2}));
  EXPECT_EQ(r.duplicates_dropped, 1u);
}

TEST(Load, Errors) {
  try {
    Parse("1 2\n3 x\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(Parse("1 -2\n"), ParseError);
  EXPECT_THROW(Parse(""), ParseError);
  EXPECT_THROW(Parse("\n  \n"), ParseError);
  EXPECT_THROW(Parse("u1;3\n", TransactionFormat::kCsvUserItem), ParseError);
  EXPECT_THROW(Parse("u1,3,4\n", TransactionFormat::kCsvUserItem), ParseError);
  EXPECT_THROW(load_transactions("/nonexistent/file.dat", TransactionFormat::kSpaceSepIds), IoError);
  EXPECT_THROW(parse_transaction_format("xml"), std::invalid_argument);
  EXPECT_EQ(parse_transaction_format("CSV_USER_ITEM"), TransactionFormat::kCsvUserItem);
}

// Property: saving and reloading reproduces the dataset.
TEST(Load, RoundTrip) {
  const LoadResult original = Parse("9 3 12\n3\n\n12 9 40 1\n");
  std::ostringstream out;
  write_transactions(original.dataset, out);
  EXPECT_EQ(Parse(out.str()).dataset, original.dataset);

  const Dataset generated = gen_uniform(2000, 50, 6);
  const auto path = std::filesystem::temp_directory_path() / "idldp_roundtrip.dat";
  save_transactions(generated, path.string());
  const LoadResult reloaded = load_transactions(path.string(), TransactionFormat::kSpaceSepIds);
  std::filesystem::remove(path);
  EXPECT_EQ(reloaded.dataset.records().size(), generated.records().size());
  EXPECT_TRUE(std::equal(reloaded.dataset.records().begin(), reloaded.dataset.records().end(),
                         generated.records().begin()));
}

TEST(AssignLevels, Examples) {
  const std::vector<double> defaults{0.05, 0.05, 0.90};
  EXPECT_EQ(level_counts(100, defaults), (std::vector<std::size_t>{5, 5, 90}));
  const std::vector<double> toy{0.2, 0.8};
  EXPECT_EQ(level_counts(5, toy), (std::vector<std::size_t>{1, 4}));
  const std::vector<double> all{1.0};
  for (std::size_t level : assign_levels(12, all, 3)) EXPECT_EQ(level, 0u);
  const std::vector<double> bad{0.5, 0.6};
  EXPECT_THROW(assign_levels(10, bad, 1), std::invalid_argument);
  const std::vector<double> negative{1.5, -0.5};
  EXPECT_THROW(assign_levels(10, negative, 1), std::invalid_argument);
}

// Properties: counts follow largest-remainder rounding, and the assignment
// is a seeded permutation.
TEST(AssignLevels, CountsAndDeterminism) {
  const std::vector<double> fractions{0.17, 0.33, 0.5};
  for (std::size_t m = 1; m <= 200; ++m) {
    const auto counts = level_counts(m, fractions);
    EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::size_t{0}), m);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(std::abs(counts[i] - m * fractions[i]), 1.0);
    const auto levels = assign_levels(m, fractions, 11);
    EXPECT_EQ(levels, assign_levels(m, fractions, 11));
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(static_cast<std::size_t>(std::count(levels.begin(), levels.end(), i)), counts[i]);
    }
  }
  EXPECT_NE(assign_levels(100, fractions, 1), assign_levels(100, fractions, 2));
}

TEST(Summary, CountsAndReferences) {
  const Dataset data(4, {{1, 2}, {2}, {}, {1, 2, 4}});
  const DatasetSummary s = summarize(data);
  EXPECT_EQ(s.n, 4u);
  EXPECT_EQ(s.m, 4u);
  EXPECT_EQ(s.total_items, 6u);
  EXPECT_EQ(s.max_record_size, 3u);
  EXPECT_EQ(s.distinct_items, 3u);
  EXPECT_DOUBLE_EQ(s.mean_record_size, 1.5);
  const auto refs = reference_datasets();
  ASSERT_EQ(refs.size(), 3u);
  EXPECT_EQ(refs[0].n, 88162u);
  EXPECT_EQ(refs[1].m, 41270u);
  EXPECT_EQ(refs[2].n, 105508u);
}

}  // namespace
}  // namespace idldp
