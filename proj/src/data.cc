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

#include "idldp/data.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "idldp/error.h"
#include "idldp/random.h"

namespace idldp {

namespace {

constexpr std::size_t kChunk = 1 << 16;
constexpr std::size_t kMaxWarnings = 20;

template <typename Draw>
Dataset Generate(std::size_t n, std::size_t m, std::uint64_t seed, Draw&& draw) {
  if (n < 1 || m < 1) throw std::invalid_argument("n and m must be at least 1");
  std::vector<ItemSet> records(n);
  for (std::size_t start = 0; start < n; start += kChunk) {
    RandomSource rng(seed, start / kChunk);
    const std::size_t end = std::min(n, start + kChunk);
    for (std::size_t u = start; u < end; ++u) records[u] = {draw(rng)};
  }
  return Dataset(m, std::move(records));
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t ParseId(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || token.empty()) {
    throw ParseError("invalid item id '" + std::string(token) + "'", line);
  }
  return value;
}

void Warn(LoadResult& result, const std::string& text) {
  if (result.warnings.size() < kMaxWarnings) result.warnings.push_back(text);
}

}  // namespace

Dataset gen_powerlaw(std::size_t n, std::size_t m, double alpha, std::uint64_t seed) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must exceed 1");
  const double k = alpha - 1.0;
  const double u_min = std::pow(static_cast<double>(m) + 0.5, -k);
  return Generate(n, m, seed, [&](RandomSource& rng) {
    const double u = u_min + (1.0 - u_min) * (1.0 - rng.uniform01());
    const double x = std::pow(u, -1.0 / k);
    const double rounded = std::floor(x + 0.5);
    return static_cast<Item>(std::clamp(rounded, 1.0, static_cast<double>(m)));
  });
}

Dataset gen_uniform(std::size_t n, std::size_t m, std::uint64_t seed) {
  return Generate(n, m, seed,
                  [&](RandomSource& rng) { return static_cast<Item>(1 + rng.below(m)); });
}

TransactionFormat parse_transaction_format(const std::string& text) {
  if (text == "SPACE_SEP_IDS" || text == "space") return TransactionFormat::kSpaceSepIds;
  if (text == "CSV_USER_ITEM" || text == "csv") return TransactionFormat::kCsvUserItem;
  throw std::invalid_argument("unknown transaction format '" + text + "'");
}

LoadResult parse_transactions(std::istream& in, TransactionFormat format) {
  LoadResult result;
  std::vector<std::vector<std::uint64_t>> raw;
  std::unordered_map<std::string, std::size_t> user_index;
  std::vector<std::unordered_set<std::uint64_t>> seen;

  auto add = [&](std::size_t record, std::uint64_t id, std::size_t line) {
    if (!seen[record].insert(id).second) {
      ++result.duplicates_dropped;
      Warn(result, "line " + std::to_string(line) + ": duplicate item " + std::to_string(id) +
                       " dropped");
      return;
    }
    raw[record].push_back(id);
  };

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const std::string_view body = Trim(text);
    if (body.empty()) {
      ++result.blank_lines;
      continue;
    }
    if (format == TransactionFormat::kSpaceSepIds) {
      raw.emplace_back();
      seen.emplace_back();
      std::size_t pos = 0;
      while (pos < body.size()) {
        const auto start = body.find_first_not_of(" \t", pos);
        if (start == std::string_view::npos) break;
        auto stop = body.find_first_of(" \t", start);
        if (stop == std::string_view::npos) stop = body.size();
        add(raw.size() - 1, ParseId(body.substr(start, stop - start), line), line);
        pos = stop;
      }
    } else {
      const auto comma = body.find(',');
      if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos) {
        throw ParseError("expected two comma-separated fields", line);
      }
      const std::string user(Trim(body.substr(0, comma)));
      if (user.empty()) throw ParseError("empty user id", line);
      const std::uint64_t id = ParseId(Trim(body.substr(comma + 1)), line);
      auto [it, inserted] = user_index.emplace(user, raw.size());
      if (inserted) {
        raw.emplace_back();
        seen.emplace_back();
      }
      add(it->second, id, line);
    }
  }
  if (raw.empty()) throw ParseError("dataset file is empty", 0);

  std::vector<std::uint64_t> ids;
  for (const auto& record : raw) ids.insert(ids.end(), record.begin(), record.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::unordered_map<std::uint64_t, Item> dense;
  dense.reserve(ids.size());
  for (std::size_t k = 0; k < ids.size(); ++k) dense.emplace(ids[k], static_cast<Item>(k + 1));

  std::vector<ItemSet> records;
  records.reserve(raw.size());
  for (const auto& record : raw) {
    ItemSet set;
    set.reserve(record.size());
    for (std::uint64_t id : record) set.push_back(dense.at(id));
    records.push_back(std::move(set));
  }
  result.dataset = Dataset(ids.size(), std::move(records));
  result.dataset.set_original_ids(std::move(ids));
  return result;
}

LoadResult load_transactions(const std::string& path, TransactionFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_transactions(in, format);
}

void write_transactions(const Dataset& dataset, std::ostream& out) {
  const bool remapped = !dataset.original_ids().empty();
  for (const ItemSet& record : dataset.records()) {
    for (std::size_t k = 0; k < record.size(); ++k) {
      if (k > 0) out << ' ';
      if (remapped) {
        out << dataset.original_id(record[k]);
      } else {
        out << record[k];
      }
    }
    out << '\n';
  }
}

void save_transactions(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_transactions(dataset, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<std::size_t> level_counts(std::size_t m, std::span<const double> fractions) {
  if (fractions.empty()) throw std::invalid_argument("at least one level fraction is required");
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0) || !std::isfinite(f)) {
      throw std::invalid_argument("level fractions must be non-negative");
    }
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("level fractions must sum to 1");

  std::vector<std::size_t> counts(fractions.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double exact = static_cast<double>(m) * fractions[i];
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t k = 0; assigned < m; ++k, ++assigned) {
    ++counts[remainders[k % remainders.size()].second];
  }
  return counts;
}

std::vector<std::size_t> assign_levels(std::size_t m, std::span<const double> fractions,
                                       std::uint64_t seed) {
  const std::vector<std::size_t> counts = level_counts(m, fractions);
  std::vector<std::size_t> levels;
  levels.reserve(m);
  for (std::size_t i = 0; i < counts.size(); ++i) levels.insert(levels.end(), counts[i], i);
  RandomSource rng(seed, 0x6c6576656c);
  for (std::size_t i = m; i > 1; --i) {
    std::swap(levels[i - 1], levels[static_cast<std::size_t>(rng.below(i))]);
  }
  return levels;
}

DatasetSummary summarize(const Dataset& dataset) {
  DatasetSummary s;
  s.n = dataset.num_records();
  s.m = dataset.universe_size();
  s.total_items = dataset.total_items();
  s.mean_record_size = dataset.mean_record_size();
  s.max_record_size = dataset.max_record_size();
  const std::vector<std::uint64_t> counts = true_counts(dataset);
  s.distinct_items = static_cast<std::size_t>(
      std::count_if(counts.begin(), counts.end(), [](std::uint64_t c) { return c > 0; }));
  return s;
}

std::span<const ReferenceDataset> reference_datasets() {
  static const std::array<ReferenceDataset, 3> kRefs = {{
      {"Retail", 88162, 16470},
      {"Kosarak", 990002, 41270},
      {"Clothing", 105508, 5850},
  }};
  return kRefs;
}

}  // namespace idldp
