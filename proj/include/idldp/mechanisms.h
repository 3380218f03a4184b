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

// Client-side randomizers.

#ifndef IDLDP_MECHANISMS_H_
#define IDLDP_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "idldp/model.h"
#include "idldp/random.h"

namespace idldp {

// Packed bit vector. Positions are 1-based to match item ids.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size);

  std::size_t size() const { return size_; }
  bool test(std::size_t position) const;
  void set(std::size_t position, bool value = true);
  std::size_t count() const;
  std::span<const std::uint64_t> words() const { return words_; }

  // "0100..." with position 1 first.
  std::string to_string() const;
  static BitVector FromString(const std::string& bits);

  // Four positions per hex digit, position 1 in the high bit of the first
  // digit. Trailing pad bits are zero.
  std::string to_hex() const;
  static BitVector FromHex(const std::string& hex, std::size_t size);

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Per-position probabilities plus the positions grouped by identical pair,
// which lets the grouped sampler draw each group's flips at once.
class BitLayout {
 public:
  BitLayout(std::vector<BitProbs> groups, std::vector<std::uint32_t> group_of_position);

  // Positions 1..m take their level's pair; with ell > 0 the positions
  // m+1..m+ell take the dummy pair.
  static BitLayout ForProfile(const PerturbationProfile& profile, const PrivacyModel& model,
                              std::size_t ell = 0);
  // Every position shares the same pair.
  static BitLayout Uniform(BitProbs probs, std::size_t length);

  std::size_t length() const { return group_of_position_.size(); }
  std::size_t num_groups() const { return groups_.size(); }
  const BitProbs& probs(std::size_t position) const {
    return groups_[group_of_position_[position - 1]];
  }
  const BitProbs& group(std::size_t g) const { return groups_[g]; }
  std::uint32_t group_of(std::size_t position) const { return group_of_position_[position - 1]; }
  // 1-based positions of group g, ascending.
  std::span<const std::uint32_t> positions(std::size_t g) const { return members_[g]; }
  std::vector<BitProbs> expanded() const;

 private:
  std::vector<BitProbs> groups_;
  std::vector<std::uint32_t> group_of_position_;
  std::vector<std::vector<std::uint32_t>> members_;
};

BitVector encode_onehot(Item item, std::size_t length);

// Independent per-bit perturbation: y[k] ~ Bernoulli(a_k) where x[k] = 1,
// Bernoulli(b_k) otherwise. Draws every position in order.
BitVector perturb_ue(const BitVector& bits, const BitLayout& layout, RandomSource& rng);

// Same output law as perturb_ue. Within each group, zero positions flip in
// bulk: the number of flips is drawn from Binomial(#zeros, b) and placed
// uniformly without replacement. Cost is proportional to the number of set
// output bits rather than the vector length.
class GroupedPerturber {
 public:
  explicit GroupedPerturber(const BitLayout& layout);
  BitVector operator()(const BitVector& bits, RandomSource& rng);

 private:
  void Swap(std::vector<std::uint32_t>& pool, std::size_t i, std::size_t j);

  const BitLayout* layout_;
  // Per-group scratch permutations of member positions; any permutation is a
  // valid starting point for a partial Fisher-Yates draw.
  std::vector<std::vector<std::uint32_t>> scratch_;
  // Index of each position inside its group's pool.
  std::vector<std::uint32_t> slot_;
  std::vector<std::size_t> tail_;
};

struct GrrParams {
  double p = 1.0;
  double q = 0.0;
};

// Reports the true item with probability p and each other item with
// probability q. Requires p + (m-1) q = 1.
Item grr_perturb(Item item, std::size_t m, const GrrParams& params, RandomSource& rng);

// Padding-and-sampling. Returns an id in 1..m+ell; ids above m are dummies.
Item pad_and_sample(const ItemSet& x, std::size_t ell, std::size_t m, RandomSource& rng);

// Padding-and-sampling, one-hot over m+ell positions, then perturbation.
// `layout` must cover m+ell positions (see BitLayout::ForProfile).
BitVector idue_ps(const ItemSet& x, const BitLayout& layout, std::size_t ell, std::size_t m,
                  RandomSource& rng);

// Aggregate-level sampling: the per-position counts of n unary-encoded
// reports whose one-hot inputs put `onehot_counts[k]` users on position k+1.
// Counts at different positions are independent binomial sums, so this is
// distributed exactly as aggregating n perturb_ue reports.
ReportBatch sample_ue_counts(std::span<const std::uint64_t> onehot_counts, std::uint64_t n,
                             const BitLayout& layout, RandomSource& rng,
                             std::size_t padded_len = 0);

}  // namespace idldp

#endif  // IDLDP_MECHANISMS_H_
