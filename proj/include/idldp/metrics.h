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

// Evaluation metrics. Rankings break ties by the smaller item id.

#ifndef IDLDP_METRICS_H_
#define IDLDP_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "idldp/model.h"

namespace idldp {

// sum_i (c_hat_i - c*_i)^2 / n.
double total_mse(std::span<const double> estimates, std::span<const std::uint64_t> true_counts,
                 std::uint64_t n);

// The k items with the largest true counts among items with a positive
// count. Throws std::invalid_argument if fewer than k such items exist.
std::vector<Item> true_top_k(std::span<const std::uint64_t> true_counts, std::size_t k);

// The k items with the largest estimates.
std::vector<Item> estimated_top_k(std::span<const double> estimates, std::size_t k);

// Mean of |c_hat_i - c*_i| / c*_i over the true top-k.
double re_at_k(std::span<const double> estimates, std::span<const std::uint64_t> true_counts,
               std::size_t k);

// |estimated top-k intersect true top-k| / k.
double precision_at_k(std::span<const double> estimates,
                      std::span<const std::uint64_t> true_counts, std::size_t k);

}  // namespace idldp

#endif  // IDLDP_METRICS_H_
