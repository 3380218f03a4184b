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

// Text formats: profile documents, report files, estimate tables and budget
// literals.
//
// Profile document (flat key=value, '#' comments):
//
//   # idldp profile v1
//   r_kind=min
//   levels=2
//   universe=5
//   level.1.budget=1.3862943611198906
//   level.1.size=1
//   level.1.a=...
//   level.1.b=...
//   dummy.a=...  dummy.b=...  dummy.budget=...
//   item_levels=1,2,2,2,2
//   solver.model=opt0  solver.objective=...  solver.seed=...
//
// Unknown keys are ignored so that tools may append their own (audit.*).

#ifndef IDLDP_SERIALIZATION_H_
#define IDLDP_SERIALIZATION_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idldp/estimation.h"
#include "idldp/mechanisms.h"
#include "idldp/model.h"

namespace idldp {

// "ln(k)" for k > 0 or a plain decimal number; the result is in nats.
double parse_budget(const std::string& text);
// Comma-separated budgets.
std::vector<double> parse_budget_list(const std::string& text);

struct SolverMetadata {
  std::string model;
  double objective = 0.0;
  std::uint64_t seed = 0;
};

struct ProfileDocument {
  PrivacyModel model;
  PerturbationProfile profile;
  std::optional<SolverMetadata> solver;
};

std::string serialize_profile(const PerturbationProfile& profile, const PrivacyModel& model,
                              const std::optional<SolverMetadata>& solver = std::nullopt);
// Throws ParseError on malformed or inconsistent documents.
ProfileDocument parse_profile(const std::string& text);

// FNV-1a over the level and dummy probabilities.
std::uint64_t profile_hash(const PerturbationProfile& profile);

struct ReportFile {
  std::size_t m = 0;
  std::size_t ell = 0;
  std::uint64_t profile_hash = 0;
  std::vector<BitVector> reports;
};

// "# idldp-reports v1", then "m=<m> l=<ell> profile=<hash hex>", then one
// hex row per report.
void write_reports(std::ostream& out, const ReportFile& file);
ReportFile read_reports(std::istream& in);

// "item,estimate,variance,level" rows; item ids are original ids when the
// dataset was remapped.
void write_estimates(std::ostream& out, const FrequencyEstimate& estimate,
                     std::span<const double> variances, const PrivacyModel& model,
                     std::span<const std::uint64_t> original_ids = {});

}  // namespace idldp

#endif  // IDLDP_SERIALIZATION_H_
