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

#include "idldp/privacy.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "idldp/error.h"

namespace idldp {

namespace {

std::string LevelLabel(std::size_t level, std::size_t num_levels) {
  return level == num_levels ? "dummy" : "level " + std::to_string(level + 1);
}

// Multiplies output counts, refusing anything past `cap`.
std::uint64_t JointOutputCount(std::span<const ExactMechanism* const> chain,
                               std::uint64_t cap) {
  if (chain.empty()) throw std::invalid_argument("mechanism chain is empty");
  std::uint64_t joint = 1;
  for (const ExactMechanism* mech : chain) {
    const std::uint64_t count = mech->output_count();
    if (count == 0) throw std::invalid_argument("mechanism has an empty output space");
    if (joint > cap / count) {
      throw EnumerationCapExceeded("joint output space exceeds the enumeration cap of " +
                                   std::to_string(cap));
    }
    joint *= count;
  }
  return joint;
}

// Distribution of each chain member for one input.
std::vector<std::vector<double>> ChainDistributions(
    std::span<const ExactMechanism* const> chain, const ItemSet& input) {
  std::vector<std::vector<double>> out;
  out.reserve(chain.size());
  for (const ExactMechanism* mech : chain) out.push_back(mech->distribution(input));
  return out;
}

// max over the joint outputs of prod_k num[k][y_k] / prod_k den[k][y_k].
double MaxJointRatio(const std::vector<std::vector<double>>& num,
                     const std::vector<std::vector<double>>& den, std::uint64_t joint) {
  const std::size_t k = num.size();
  std::vector<std::size_t> digit(k, 0);
  double best = 0.0;
  for (std::uint64_t y = 0; y < joint; ++y) {
    double p = 1.0;
    double q = 1.0;
    for (std::size_t c = 0; c < k; ++c) {
      p *= num[c][digit[c]];
      q *= den[c][digit[c]];
    }
    if (q <= 0.0) {
      throw std::domain_error("zero-probability output under the denominator input");
    }
    best = std::max(best, p / q);
    for (std::size_t c = 0; c < k; ++c) {
      if (++digit[c] < num[c].size()) break;
      digit[c] = 0;
    }
  }
  return best;
}

// Visits every size-`k` subset of {0..n-1} as a bitmask.
template <typename Fn>
void ForEachSubset(std::size_t n, std::size_t k, Fn&& fn) {
  if (n > 62) throw std::invalid_argument("subset enumeration limited to 62 elements");
  if (k > n) return;
  if (k == 0) {
    fn(std::uint64_t{0});
    return;
  }
  std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n;
  while (mask < limit) {
    fn(mask);
    // Gosper's hack: next mask with the same popcount.
    const std::uint64_t c = mask & (~mask + 1);
    const std::uint64_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
}

}  // namespace

double pair_ratio(const BitProbs& level_i, const BitProbs& level_j) {
  return level_i.a * (1.0 - level_j.b) / (level_i.b * (1.0 - level_j.a));
}

double pair_ratio(const PerturbationProfile& profile, std::size_t level_i,
                  std::size_t level_j) {
  return pair_ratio(profile.level(level_i), profile.level(level_j));
}

AuditReport check_idldp(const PerturbationProfile& profile, const PrivacyModel& model,
                        double tol) {
  if (profile.num_levels() != model.num_levels()) {
    throw std::invalid_argument("profile has " + std::to_string(profile.num_levels()) +
                                " levels but the model has " +
                                std::to_string(model.num_levels()));
  }
  const std::size_t t = model.num_levels();
  auto probs = [&](std::size_t i) -> const BitProbs& {
    return i == t ? profile.dummy() : profile.level(i);
  };
  auto budget = [&](std::size_t i) { return i == t ? model.min_budget() : model.budget(i); };

  AuditReport report;
  report.name = "idldp-analytic";
  for (std::size_t i = 0; i <= t; ++i) {
    for (std::size_t j = 0; j <= t; ++j) {
      const double ratio = pair_ratio(probs(i), probs(j));
      const double bound = std::exp(combine_budgets(model.r_kind(), budget(i), budget(j)));
      RecordPair(report, ratio, bound, tol, LevelLabel(i, t), LevelLabel(j, t));
    }
  }
  return report;
}

std::vector<double> ExactMechanism::distribution(const ItemSet& input) const {
  std::vector<double> out(output_count());
  for (std::uint64_t y = 0; y < out.size(); ++y) out[y] = probability(input, y);
  return out;
}

UnaryChannel::UnaryChannel(std::vector<BitProbs> positions) : positions_(std::move(positions)) {
  if (positions_.empty() || positions_.size() > 62) {
    throw std::invalid_argument("unary channel length must be in 1..62");
  }
}

UnaryChannel UnaryChannel::ForProfile(const PerturbationProfile& profile,
                                      const PrivacyModel& model) {
  return UnaryChannel(BitLayout::ForProfile(profile, model).expanded());
}

std::uint64_t UnaryChannel::output_count() const {
  return std::uint64_t{1} << positions_.size();
}

double UnaryChannel::onehot_probability(std::size_t position, std::uint64_t output) const {
  double p = 1.0;
  for (std::size_t k = 1; k <= positions_.size(); ++k) {
    const BitProbs& bp = positions_[k - 1];
    const double one = (k == position) ? bp.a : bp.b;
    p *= ((output >> (k - 1)) & 1U) ? one : 1.0 - one;
  }
  return p;
}

double UnaryChannel::probability(const ItemSet& input, std::uint64_t output) const {
  if (input.size() != 1 || input[0] < 1 || input[0] > positions_.size()) {
    throw std::invalid_argument("unary channel input must be a single item in range");
  }
  if (output >= output_count()) throw std::out_of_range("output index out of range");
  return onehot_probability(input[0], output);
}

GrrChannel::GrrChannel(std::size_t m, double p, double q) : m_(m), p_(p), q_(q) {
  if (m_ < 1) throw std::invalid_argument("GRR needs a non-empty domain");
  if (std::abs(p_ + static_cast<double>(m_ - 1) * q_ - 1.0) > 1e-9) {
    throw std::invalid_argument("GRR probabilities must satisfy p + (m-1) q = 1");
  }
}

double GrrChannel::probability(const ItemSet& input, std::uint64_t output) const {
  if (input.size() != 1 || input[0] < 1 || input[0] > m_) {
    throw std::invalid_argument("GRR input must be a single item in range");
  }
  if (output >= m_) throw std::out_of_range("output index out of range");
  return (output + 1 == input[0]) ? p_ : q_;
}

std::vector<double> sampling_distribution(const ItemSet& x, std::size_t ell, std::size_t m,
                                          SamplingLaw law) {
  if (ell < 1) throw std::invalid_argument("padding length must be at least 1");
  for (Item item : x) {
    if (item < 1 || item > m) throw std::out_of_range("item-set member outside 1..m");
  }
  std::vector<double> w(m + ell, 0.0);
  const std::size_t size = x.size();

  if (law == SamplingLaw::kClosedForm) {
    const double eta = static_cast<double>(size) / static_cast<double>(std::max(size, ell));
    for (Item item : x) w[item - 1] = eta / static_cast<double>(size);
    for (std::size_t d = 0; d < ell; ++d) w[m + d] = (1.0 - eta) / static_cast<double>(ell);
    return w;
  }

  // Each padded set is equally likely; the sample is uniform inside it.
  std::vector<std::vector<Item>> padded_sets;
  if (size < ell) {
    ForEachSubset(ell, ell - size, [&](std::uint64_t mask) {
      std::vector<Item> padded(x.begin(), x.end());
      for (std::size_t d = 0; d < ell; ++d) {
        if ((mask >> d) & 1U) padded.push_back(static_cast<Item>(m + 1 + d));
      }
      padded_sets.push_back(std::move(padded));
    });
  } else {
    ForEachSubset(size, ell, [&](std::uint64_t mask) {
      std::vector<Item> kept;
      for (std::size_t i = 0; i < size; ++i) {
        if ((mask >> i) & 1U) kept.push_back(x[i]);
      }
      padded_sets.push_back(std::move(kept));
    });
  }
  const double set_weight = 1.0 / static_cast<double>(padded_sets.size());
  for (const auto& padded : padded_sets) {
    for (Item item : padded) w[item - 1] += set_weight / static_cast<double>(padded.size());
  }
  return w;
}

PaddingSamplingChannel::PaddingSamplingChannel(const PerturbationProfile& profile,
                                               const PrivacyModel& model, std::size_t ell,
                                               SamplingLaw law)
    : m_(model.universe_size()),
      ell_(ell),
      law_(law),
      channel_(BitLayout::ForProfile(profile, model, ell).expanded()) {
  if (ell_ < 1) throw std::invalid_argument("padding length must be at least 1");
}

double PaddingSamplingChannel::probability(const ItemSet& input, std::uint64_t output) const {
  const std::vector<double> w = sampling_distribution(input, ell_, m_, law_);
  double p = 0.0;
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (w[s] > 0.0) p += w[s] * channel_.onehot_probability(s + 1, output);
  }
  return p;
}

std::vector<double> PaddingSamplingChannel::distribution(const ItemSet& input) const {
  const std::vector<double> w = sampling_distribution(input, ell_, m_, law_);
  std::vector<double> out(output_count(), 0.0);
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (w[s] <= 0.0) continue;
    for (std::uint64_t y = 0; y < out.size(); ++y) {
      out[y] += w[s] * channel_.onehot_probability(s + 1, y);
    }
  }
  return out;
}

double bruteforce_max_ratio(std::span<const ExactMechanism* const> chain, const ItemSet& x,
                            const ItemSet& x_prime, std::uint64_t cap) {
  const std::uint64_t joint = JointOutputCount(chain, cap);
  return MaxJointRatio(ChainDistributions(chain, x), ChainDistributions(chain, x_prime), joint);
}

AuditReport audit_bruteforce(std::span<const ExactMechanism* const> chain,
                             std::span<const ItemSet> inputs,
                             std::span<const double> input_budgets, RKind r_kind, double tol,
                             std::uint64_t cap) {
  if (inputs.size() != input_budgets.size()) {
    throw std::invalid_argument("one budget per input is required");
  }
  const std::uint64_t joint = JointOutputCount(chain, cap);
  std::vector<std::vector<std::vector<double>>> dists;
  dists.reserve(inputs.size());
  for (const ItemSet& x : inputs) dists.push_back(ChainDistributions(chain, x));

  AuditReport report;
  report.name = "idldp-bruteforce";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (std::size_t j = 0; j < inputs.size(); ++j) {
      if (i == j) continue;
      const double ratio = MaxJointRatio(dists[i], dists[j], joint);
      const double bound =
          std::exp(combine_budgets(r_kind, input_budgets[i], input_budgets[j]));
      RecordPair(report, ratio, bound, tol, format_item_set(inputs[i]),
                 format_item_set(inputs[j]));
    }
  }
  return report;
}

AuditReport audit_ldp(const ExactMechanism& mechanism, std::span<const ItemSet> inputs,
                      double epsilon, double tol, std::uint64_t cap) {
  const ExactMechanism* chain[] = {&mechanism};
  std::vector<double> budgets(inputs.size(), epsilon);
  AuditReport report = audit_bruteforce(chain, inputs, budgets, RKind::kMin, tol, cap);
  report.name = "ldp-bruteforce";
  return report;
}

std::vector<ItemSet> singleton_inputs(std::size_t m) {
  std::vector<ItemSet> out;
  out.reserve(m);
  for (std::size_t i = 1; i <= m; ++i) out.push_back({static_cast<Item>(i)});
  return out;
}

std::vector<ItemSet> all_item_sets(std::size_t m) {
  if (m > 20) throw std::invalid_argument("item-set enumeration limited to m <= 20");
  std::vector<ItemSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    ItemSet set;
    for (std::size_t i = 0; i < m; ++i) {
      if ((mask >> i) & 1U) set.push_back(static_cast<Item>(i + 1));
    }
    out.push_back(std::move(set));
  }
  return out;
}

double itemset_budget(const ItemSet& x, const PrivacyModel& model, std::size_t ell,
                      double eps_star) {
  if (ell < 1) throw std::invalid_argument("padding length must be at least 1");
  const std::size_t size = x.size();
  const double eta = static_cast<double>(size) / static_cast<double>(std::max(size, ell));
  double mean_exp = 0.0;
  for (Item item : x) mean_exp += std::exp(model.item_budget(item));
  if (size > 0) mean_exp /= static_cast<double>(size);
  return std::log(eta * mean_exp + (1.0 - eta) * std::exp(eps_star));
}

double itemset_ratio_bound(const ItemSet& x, const ItemSet& x_prime,
                           const PerturbationProfile& profile, const PrivacyModel& model,
                           std::size_t ell) {
  if (ell < 1) throw std::invalid_argument("padding length must be at least 1");
  auto mixture = [&](const ItemSet& set, bool use_alpha) {
    const std::size_t size = set.size();
    const double eta = static_cast<double>(size) / static_cast<double>(std::max(size, ell));
    double mean = 0.0;
    for (Item item : set) {
      const BitProbs& p = profile.level(model.level_of(item));
      mean += use_alpha ? p.alpha() : p.beta();
    }
    if (size > 0) mean /= static_cast<double>(size);
    const double dummy = use_alpha ? profile.dummy().alpha() : profile.dummy().beta();
    return eta * mean + (1.0 - eta) * dummy;
  };
  return mixture(x, true) / mixture(x_prime, false);
}

ItemsetAudit audit_itemset(const PerturbationProfile& profile, const PrivacyModel& model,
                           std::size_t ell, double eps_star, double tol, std::uint64_t cap) {
  const std::size_t m = model.universe_size();
  if (ell < 1) throw std::invalid_argument("padding length must be at least 1");
  if (m + ell > 40 || (std::uint64_t{1} << m) > cap / (std::uint64_t{1} << (m + ell))) {
    throw EnumerationCapExceeded("item-set audit over m=" + std::to_string(m) +
                                 ", l=" + std::to_string(ell) +
                                 " exceeds the enumeration cap");
  }
  const PaddingSamplingChannel channel(profile, model, ell, SamplingLaw::kEnumerated);
  const std::vector<ItemSet> sets = all_item_sets(m);
  std::vector<std::vector<double>> dists;
  std::vector<double> budgets;
  dists.reserve(sets.size());
  for (const ItemSet& x : sets) {
    dists.push_back(channel.distribution(x));
    budgets.push_back(itemset_budget(x, model, ell, eps_star));
  }

  ItemsetAudit audit;
  audit.budget_bound.name = "itemset-budget";
  audit.mixture_bound.name = "itemset-mixture";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = 0; j < sets.size(); ++j) {
      if (i == j) continue;
      double ratio = 0.0;
      for (std::size_t y = 0; y < dists[i].size(); ++y) {
        if (dists[j][y] <= 0.0) throw std::domain_error("zero-probability output");
        ratio = std::max(ratio, dists[i][y] / dists[j][y]);
      }
      const std::string x = format_item_set(sets[i]);
      const std::string x_prime = format_item_set(sets[j]);
      RecordPair(audit.budget_bound, ratio, std::exp(std::min(budgets[i], budgets[j])), tol, x,
                 x_prime);
      RecordPair(audit.mixture_bound, ratio,
                 itemset_ratio_bound(sets[i], sets[j], profile, model, ell), tol, x, x_prime);
    }
  }
  return audit;
}

double ldp_equivalent_budget(const PrivacyModel& model) {
  return std::min(model.max_budget(), 2.0 * model.min_budget());
}

LeakageBounds leakage_bounds(std::span<const double> prior, const PerturbationProfile& profile,
                             const PrivacyModel& model, Item x, LeakageMode mode,
                             std::uint64_t cap) {
  const std::size_t m = model.universe_size();
  if (prior.size() != m) throw std::invalid_argument("prior must have one entry per item");
  double total = 0.0;
  for (double p : prior) {
    if (!(p >= 0.0)) throw std::invalid_argument("prior probabilities must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("prior does not sum to 1");
  const double eps_x = model.item_budget(x);

  if (mode == LeakageMode::kBound) {
    const double e = std::min(eps_x, 2.0 * model.min_budget());
    return {std::exp(-e), std::exp(e)};
  }

  const UnaryChannel channel = UnaryChannel::ForProfile(profile, model);
  if (channel.output_count() > cap) {
    throw EnumerationCapExceeded("leakage enumeration exceeds the cap");
  }
  LeakageBounds bounds{std::numeric_limits<double>::infinity(), 0.0};
  for (std::uint64_t y = 0; y < channel.output_count(); ++y) {
    double marginal = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
      if (prior[k - 1] > 0.0) marginal += prior[k - 1] * channel.onehot_probability(k, y);
    }
    const double ratio = marginal / channel.onehot_probability(x, y);
    bounds.lower = std::min(bounds.lower, ratio);
    bounds.upper = std::max(bounds.upper, ratio);
  }
  return bounds;
}

std::vector<std::pair<std::string, std::string>> symbolic_leakage_rows() {
  return {
      {"LDP", "[e^{-eps}, e^{eps}]"},
      {"PLDP", "[e^{-eps_u}, e^{eps_u}]"},
      {"GI/CLDP",
       "[sum_x' Pr(x') e^{-eps d(x,x')}, sum_x' Pr(x') e^{eps d(x,x')}] (needs a metric d)"},
      {"MinID-LDP", "[e^{-min(eps_x, 2 min E)}, e^{min(eps_x, 2 min E)}]"},
  };
}

}  // namespace idldp
