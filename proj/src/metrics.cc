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

#include "idldp/metrics.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>
#include <string>

namespace idldp {

namespace {

void CheckLengths(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("estimates and true counts differ in length");
}

template <typename T>
std::vector<Item> TopK(std::span<const T> values, std::size_t k, bool positive_only) {
  std::vector<Item> ids;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!positive_only || values[i] > 0) ids.push_back(static_cast<Item>(i + 1));
  }
  if (k > ids.size()) {
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the " +
                                std::to_string(ids.size()) + " rankable items");
  }
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                    [&](Item x, Item y) {
                      const T vx = values[x - 1];
                      const T vy = values[y - 1];
                      return vx != vy ? vx > vy : x < y;
                    });
  ids.resize(k);
  return ids;
}

}  // namespace

double total_mse(std::span<const double> estimates, std::span<const std::uint64_t> true_counts,
                 std::uint64_t n) {
  CheckLengths(estimates.size(), true_counts.size());
  if (n == 0) throw std::invalid_argument("n must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double diff = estimates[i] - static_cast<double>(true_counts[i]);
    sum += diff * diff;
  }
  return sum / static_cast<double>(n);
}

std::vector<Item> true_top_k(std::span<const std::uint64_t> true_counts, std::size_t k) {
  return TopK(true_counts, k, true);
}

std::vector<Item> estimated_top_k(std::span<const double> estimates, std::size_t k) {
  return TopK(estimates, k, false);
}

double re_at_k(std::span<const double> estimates, std::span<const std::uint64_t> true_counts,
               std::size_t k) {
  CheckLengths(estimates.size(), true_counts.size());
  if (k == 0) throw std::invalid_argument("k must be positive");
  double sum = 0.0;
  for (Item i : true_top_k(true_counts, k)) {
    const double truth = static_cast<double>(true_counts[i - 1]);
    sum += std::abs(estimates[i - 1] - truth) / truth;
  }
  return sum / static_cast<double>(k);
}

double precision_at_k(std::span<const double> estimates,
                      std::span<const std::uint64_t> true_counts, std::size_t k) {
  CheckLengths(estimates.size(), true_counts.size());
  if (k == 0) throw std::invalid_argument("k must be positive");
  std::vector<Item> truth = true_top_k(true_counts, k);
  std::vector<Item> predicted = estimated_top_k(estimates, k);
  std::sort(truth.begin(), truth.end());
  std::sort(predicted.begin(), predicted.end());
  std::vector<Item> common;
  std::set_intersection(truth.begin(), truth.end(), predicted.begin(), predicted.end(),
                        std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(k);
}

}  // namespace idldp
