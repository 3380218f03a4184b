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

// Privacy evaluation and auditing.
//
// Analytic checks work on the closed-form pairwise ratio of unary encoding.
// Brute-force audits never sample: they enumerate every output of a
// mechanism's exact distribution, so every claim can be confirmed on small
// domains independently of the closed forms.

#ifndef IDLDP_PRIVACY_H_
#define IDLDP_PRIVACY_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "idldp/mechanisms.h"
#include "idldp/model.h"

namespace idldp {

inline constexpr double kAuditTolerance = 1e-9;
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 22;

// a_i (1 - b_j) / (b_i (1 - a_j)): the largest value of
// Pr(y | v_i) / Pr(y | v_j), attained at y[i] = 1, y[j] = 0.
double pair_ratio(const BitProbs& level_i, const BitProbs& level_j);
double pair_ratio(const PerturbationProfile& profile, std::size_t level_i,
                  std::size_t level_j);

// Checks every ordered level pair against e^{r(eps_i, eps_j)}. The dummy
// pair is checked as an extra level whose budget is min(E).
AuditReport check_idldp(const PerturbationProfile& profile, const PrivacyModel& model,
                        double tol = kAuditTolerance);

// A mechanism with an exactly computable output distribution over a finite,
// enumerable output space. Outputs are indexed 0..output_count()-1.
class ExactMechanism {
 public:
  virtual ~ExactMechanism() = default;
  virtual std::uint64_t output_count() const = 0;
  // Pr(output | input). Throws std::invalid_argument for inputs outside the
  // mechanism's domain.
  virtual double probability(const ItemSet& input, std::uint64_t output) const = 0;
  // Full distribution for one input; the default loops over probability().
  virtual std::vector<double> distribution(const ItemSet& input) const;
  virtual std::string name() const = 0;
};

// Unary encoding over explicit per-position probabilities. Inputs are
// singletons {i}; output bit k (1-based position) is bit k-1 of the index.
class UnaryChannel : public ExactMechanism {
 public:
  explicit UnaryChannel(std::vector<BitProbs> positions);
  // IDUE over items 1..m.
  static UnaryChannel ForProfile(const PerturbationProfile& profile, const PrivacyModel& model);

  std::uint64_t output_count() const override;
  double probability(const ItemSet& input, std::uint64_t output) const override;
  std::string name() const override { return "UE"; }

  // Pr(y | one-hot at `position`) with position 1-based, or 0 for the
  // all-zero input vector.
  double onehot_probability(std::size_t position, std::uint64_t output) const;
  std::size_t length() const { return positions_.size(); }

 private:
  std::vector<BitProbs> positions_;
};

// Generalized randomized response over 1..m.
class GrrChannel : public ExactMechanism {
 public:
  GrrChannel(std::size_t m, double p, double q);
  std::uint64_t output_count() const override { return m_; }
  double probability(const ItemSet& input, std::uint64_t output) const override;
  std::string name() const override { return "GRR"; }

 private:
  std::size_t m_;
  double p_;
  double q_;
};

// How PaddingSamplingChannel computes the law of the sampled item.
enum class SamplingLaw {
  // eta_x / |x| per real item, (1 - eta_x) / l per dummy.
  kClosedForm,
  // Enumerates every padding (distinct dummies) and every truncation.
  kEnumerated,
};

// Sampling law of padding-and-sampling: probability of each position
// 1..m+l being the sampled item.
std::vector<double> sampling_distribution(const ItemSet& x, std::size_t ell, std::size_t m,
                                          SamplingLaw law);

// Padding-and-sampling followed by unary encoding over m + l positions.
class PaddingSamplingChannel : public ExactMechanism {
 public:
  PaddingSamplingChannel(const PerturbationProfile& profile, const PrivacyModel& model,
                         std::size_t ell, SamplingLaw law = SamplingLaw::kEnumerated);

  std::uint64_t output_count() const override { return channel_.output_count(); }
  double probability(const ItemSet& input, std::uint64_t output) const override;
  std::vector<double> distribution(const ItemSet& input) const override;
  std::string name() const override { return "IDUE-PS"; }

 private:
  std::size_t m_;
  std::size_t ell_;
  SamplingLaw law_;
  UnaryChannel channel_;
};

// max_y Pr(y | x) / Pr(y | x') over the joint output space of a chain of
// mechanisms all applied to the same input. Throws EnumerationCapExceeded
// when the joint space exceeds `cap` and std::domain_error on a zero
// denominator.
double bruteforce_max_ratio(std::span<const ExactMechanism* const> chain, const ItemSet& x,
                            const ItemSet& x_prime, std::uint64_t cap = kDefaultEnumerationCap);

// Brute-force ID-LDP audit: every ordered pair of `inputs` against
// e^{r(budget_x, budget_x')}, where budget_x is the total budget of input x
// across the chain.
AuditReport audit_bruteforce(std::span<const ExactMechanism* const> chain,
                             std::span<const ItemSet> inputs,
                             std::span<const double> input_budgets, RKind r_kind,
                             double tol = kAuditTolerance,
                             std::uint64_t cap = kDefaultEnumerationCap);

// Brute-force plain LDP audit at a single budget.
AuditReport audit_ldp(const ExactMechanism& mechanism, std::span<const ItemSet> inputs,
                      double epsilon, double tol = kAuditTolerance,
                      std::uint64_t cap = kDefaultEnumerationCap);

// Every singleton {1}..{m} of the model.
std::vector<ItemSet> singleton_inputs(std::size_t m);
// Every subset of {1..m}, including the empty set.
std::vector<ItemSet> all_item_sets(std::size_t m);

// Combined budget of an item set under padding length l and dummy budget
// eps_star: ln[eta_x * mean_{i in x} e^{eps_i} + (1 - eta_x) e^{eps_star}].
double itemset_budget(const ItemSet& x, const PrivacyModel& model, std::size_t ell,
                      double eps_star);

// Upper bound on Pr(y|x) / Pr(y|x') for IDUE-PS built from the alpha/beta
// mixtures of the two sets.
double itemset_ratio_bound(const ItemSet& x, const ItemSet& x_prime,
                           const PerturbationProfile& profile, const PrivacyModel& model,
                           std::size_t ell);

struct ItemsetAudit {
  // Against e^{min(eps_x, eps_x')}.
  AuditReport budget_bound;
  // Against the alpha/beta mixture bound of each pair.
  AuditReport mixture_bound;
  bool passed() const { return budget_bound.passed && mixture_bound.passed; }
};

// Exhaustive item-set audit of IDUE-PS over every pair of subsets of
// {1..m} and every output in {0,1}^{m+l}.
ItemsetAudit audit_itemset(const PerturbationProfile& profile, const PrivacyModel& model,
                           std::size_t ell, double eps_star, double tol = kAuditTolerance,
                           std::uint64_t cap = kDefaultEnumerationCap);

// min{max(E), 2 min(E)}: the plain LDP level implied by MinID-LDP.
double ldp_equivalent_budget(const PrivacyModel& model);

enum class LeakageMode { kExact, kBound };

struct LeakageBounds {
  double lower = 1.0;
  double upper = 1.0;
};

// Bounds of Pr(x) / Pr(x | y) over all outputs y for single-item IDUE.
// kExact enumerates outputs under `prior`; kBound returns
// e^{-+min(eps_x, 2 min(E))}.
LeakageBounds leakage_bounds(std::span<const double> prior, const PerturbationProfile& profile,
                             const PrivacyModel& model, Item x, LeakageMode mode,
                             std::uint64_t cap = kDefaultEnumerationCap);

// Prior-posterior bound rows for notions that are only reported, never
// evaluated here (they need a distance metric or per-user budgets).
std::vector<std::pair<std::string, std::string>> symbolic_leakage_rows();

}  // namespace idldp

#endif  // IDLDP_PRIVACY_H_
