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

#include "idldp/mechanisms.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>

namespace idldp {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::uint64_t Binomial(std::uint64_t trials, double p, RandomSource& rng) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::uint64_t> dist(trials, p);
  return dist(rng);
}

}  // namespace

BitVector::BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

bool BitVector::test(std::size_t position) const {
  if (position < 1 || position > size_) throw std::out_of_range("bit position out of range");
  const std::size_t k = position - 1;
  return (words_[k / 64] >> (k % 64)) & 1U;
}

void BitVector::set(std::size_t position, bool value) {
  if (position < 1 || position > size_) throw std::out_of_range("bit position out of range");
  const std::size_t k = position - 1;
  const std::uint64_t mask = std::uint64_t{1} << (k % 64);
  if (value) {
    words_[k / 64] |= mask;
  } else {
    words_[k / 64] &= ~mask;
  }
}

std::size_t BitVector::count() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::string BitVector::to_string() const {
  std::string out(size_, '0');
  for (std::size_t k = 1; k <= size_; ++k) {
    if (test(k)) out[k - 1] = '1';
  }
  return out;
}

BitVector BitVector::FromString(const std::string& bits) {
  BitVector v(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] == '1') {
      v.set(k + 1);
    } else if (bits[k] != '0') {
      throw std::invalid_argument("bit string may only hold '0' and '1'");
    }
  }
  return v;
}

std::string BitVector::to_hex() const {
  std::string out((size_ + 3) / 4, '0');
  for (std::size_t k = 1; k <= size_; ++k) {
    if (test(k)) {
      const std::size_t digit = (k - 1) / 4;
      const int shift = 3 - static_cast<int>((k - 1) % 4);
      const int value = HexValue(out[digit]) | (1 << shift);
      out[digit] = kHexDigits[value];
    }
  }
  return out;
}

BitVector BitVector::FromHex(const std::string& hex, std::size_t size) {
  if (hex.size() != (size + 3) / 4) {
    throw std::invalid_argument("hex report has " + std::to_string(hex.size()) +
                                " digits, expected " + std::to_string((size + 3) / 4));
  }
  BitVector v(size);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const int value = HexValue(hex[d]);
    if (value < 0) throw std::invalid_argument("invalid hex digit in report");
    for (int bit = 0; bit < 4; ++bit) {
      if (value & (8 >> bit)) {
        const std::size_t position = d * 4 + static_cast<std::size_t>(bit) + 1;
        if (position > size) throw std::invalid_argument("non-zero pad bits in hex report");
        v.set(position);
      }
    }
  }
  return v;
}

BitLayout::BitLayout(std::vector<BitProbs> groups, std::vector<std::uint32_t> group_of_position)
    : groups_(std::move(groups)),
      group_of_position_(std::move(group_of_position)),
      members_(groups_.size()) {
  for (std::size_t k = 0; k < group_of_position_.size(); ++k) {
    const std::uint32_t g = group_of_position_[k];
    if (g >= groups_.size()) throw std::invalid_argument("layout group out of range");
    members_[g].push_back(static_cast<std::uint32_t>(k + 1));
  }
}

BitLayout BitLayout::ForProfile(const PerturbationProfile& profile, const PrivacyModel& model,
                                std::size_t ell) {
  if (profile.num_levels() != model.num_levels()) {
    throw std::invalid_argument("profile has " + std::to_string(profile.num_levels()) +
                                " levels but the model has " +
                                std::to_string(model.num_levels()));
  }
  std::vector<BitProbs> groups(profile.levels().begin(), profile.levels().end());
  std::vector<std::uint32_t> group_of;
  group_of.reserve(model.universe_size() + ell);
  for (std::size_t level : model.item_levels()) {
    group_of.push_back(static_cast<std::uint32_t>(level));
  }
  if (ell > 0) {
    groups.push_back(profile.dummy());
    group_of.insert(group_of.end(), ell, static_cast<std::uint32_t>(groups.size() - 1));
  }
  return BitLayout(std::move(groups), std::move(group_of));
}

BitLayout BitLayout::Uniform(BitProbs probs, std::size_t length) {
  return BitLayout({probs}, std::vector<std::uint32_t>(length, 0));
}

std::vector<BitProbs> BitLayout::expanded() const {
  std::vector<BitProbs> out;
  out.reserve(length());
  for (std::uint32_t g : group_of_position_) out.push_back(groups_[g]);
  return out;
}

BitVector encode_onehot(Item item, std::size_t length) {
  if (item < 1 || item > length) {
    throw std::out_of_range("item " + std::to_string(item) + " outside 1.." +
                            std::to_string(length));
  }
  BitVector v(length);
  v.set(item);
  return v;
}

BitVector perturb_ue(const BitVector& bits, const BitLayout& layout, RandomSource& rng) {
  if (bits.size() != layout.length()) {
    throw std::invalid_argument("bit vector length " + std::to_string(bits.size()) +
                                " does not match layout length " +
                                std::to_string(layout.length()));
  }
  BitVector out(bits.size());
  for (std::size_t k = 1; k <= bits.size(); ++k) {
    const BitProbs& p = layout.probs(k);
    if (rng.bernoulli(bits.test(k) ? p.a : p.b)) out.set(k);
  }
  return out;
}

GroupedPerturber::GroupedPerturber(const BitLayout& layout)
    : layout_(&layout), slot_(layout.length() + 1, 0), tail_(layout.num_groups(), 0) {
  scratch_.reserve(layout.num_groups());
  for (std::size_t g = 0; g < layout.num_groups(); ++g) {
    const auto members = layout.positions(g);
    scratch_.emplace_back(members.begin(), members.end());
    for (std::size_t i = 0; i < members.size(); ++i) slot_[members[i]] = static_cast<std::uint32_t>(i);
  }
}

void GroupedPerturber::Swap(std::vector<std::uint32_t>& pool, std::size_t i, std::size_t j) {
  std::swap(pool[i], pool[j]);
  slot_[pool[i]] = static_cast<std::uint32_t>(i);
  slot_[pool[j]] = static_cast<std::uint32_t>(j);
}

BitVector GroupedPerturber::operator()(const BitVector& bits, RandomSource& rng) {
  const BitLayout& layout = *layout_;
  if (bits.size() != layout.length()) {
    throw std::invalid_argument("bit vector length does not match layout length");
  }
  BitVector out(bits.size());
  std::fill(tail_.begin(), tail_.end(), 0);
  // Set input positions are drawn individually and parked at the tail of
  // their group's pool so the bulk draw below only sees zero positions.
  const auto words = bits.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t word = words[w];
    while (word != 0) {
      const std::size_t position = w * 64 + static_cast<std::size_t>(std::countr_zero(word)) + 1;
      word &= word - 1;
      const std::uint32_t g = layout.group_of(position);
      auto& pool = scratch_[g];
      ++tail_[g];
      Swap(pool, slot_[position], pool.size() - tail_[g]);
      if (rng.bernoulli(layout.group(g).a)) out.set(position);
    }
  }
  for (std::size_t g = 0; g < layout.num_groups(); ++g) {
    auto& pool = scratch_[g];
    const std::size_t zeros = pool.size() - tail_[g];
    const std::uint64_t flips = Binomial(zeros, layout.group(g).b, rng);
    for (std::size_t i = 0; i < flips; ++i) {
      Swap(pool, i, i + static_cast<std::size_t>(rng.below(zeros - i)));
      out.set(pool[i]);
    }
  }
  return out;
}

Item grr_perturb(Item item, std::size_t m, const GrrParams& params, RandomSource& rng) {
  if (m < 1) throw std::invalid_argument("GRR needs a non-empty domain");
  if (item < 1 || item > m) throw std::out_of_range("GRR input outside 1..m");
  if (params.p < 0.0 || params.p > 1.0 || params.q < 0.0 || params.q > 1.0 ||
      std::abs(params.p + static_cast<double>(m - 1) * params.q - 1.0) > 1e-9) {
    throw std::invalid_argument("GRR probabilities must satisfy p + (m-1) q = 1");
  }
  if (m == 1 || rng.bernoulli(params.p)) return item;
  // Uniform over the other m-1 items.
  auto other = static_cast<Item>(1 + rng.below(m - 1));
  return other >= item ? other + 1 : other;
}

Item pad_and_sample(const ItemSet& x, std::size_t ell, std::size_t m, RandomSource& rng) {
  if (ell < 1) throw std::invalid_argument("padding length must be at least 1");
  for (Item item : x) {
    if (item < 1 || item > m) throw std::out_of_range("item-set member outside 1..m");
  }
  std::vector<Item> padded(x.begin(), x.end());
  if (padded.size() < ell) {
    // Distinct dummies, uniformly chosen from m+1..m+ell.
    std::vector<Item> dummies(ell);
    std::iota(dummies.begin(), dummies.end(), static_cast<Item>(m + 1));
    const std::size_t need = ell - padded.size();
    for (std::size_t i = 0; i < need; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(ell - i));
      std::swap(dummies[i], dummies[j]);
      padded.push_back(dummies[i]);
    }
  } else if (padded.size() > ell) {
    // Keep a uniform ell-subset.
    for (std::size_t i = 0; i < ell; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(padded.size() - i));
      std::swap(padded[i], padded[j]);
    }
    padded.resize(ell);
  }
  return padded[static_cast<std::size_t>(rng.below(padded.size()))];
}

BitVector idue_ps(const ItemSet& x, const BitLayout& layout, std::size_t ell, std::size_t m,
                  RandomSource& rng) {
  if (layout.length() != m + ell) {
    throw std::invalid_argument("layout must cover m + ell positions");
  }
  const Item sampled = pad_and_sample(x, ell, m, rng);
  return perturb_ue(encode_onehot(sampled, m + ell), layout, rng);
}

ReportBatch sample_ue_counts(std::span<const std::uint64_t> onehot_counts, std::uint64_t n,
                             const BitLayout& layout, RandomSource& rng,
                             std::size_t padded_len) {
  if (onehot_counts.size() != layout.length()) {
    throw std::invalid_argument("one-hot counts do not match layout length");
  }
  ReportBatch batch;
  batch.n = n;
  batch.padded_len = padded_len;
  batch.bit_counts.resize(layout.length());
  for (std::size_t k = 1; k <= layout.length(); ++k) {
    const std::uint64_t ones = onehot_counts[k - 1];
    if (ones > n) throw std::invalid_argument("one-hot count exceeds report count");
    const BitProbs& p = layout.probs(k);
    batch.bit_counts[k - 1] = Binomial(ones, p.a, rng) + Binomial(n - ones, p.b, rng);
  }
  return batch;
}

}  // namespace idldp
