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

// Perturbation-profile solvers and baseline profiles.
//
//  * opt0 minimizes the worst-case total variance over free (a_i, b_i).
//  * opt1 restricts every level to the symmetric form a_i + b_i = 1.
//  * opt2 fixes a_i = 1/2.
//
// Every returned profile passes check_idldp; the solvers throw SolverError
// otherwise.

#ifndef IDLDP_OPTIMIZER_H_
#define IDLDP_OPTIMIZER_H_

#include <cstddef>
#include <cstdint>
#include <string>

#include "idldp/mechanisms.h"
#include "idldp/model.h"

namespace idldp {

enum class OptModel { kOpt0, kOpt1, kOpt2 };

std::string to_string(OptModel model);
OptModel parse_opt_model(const std::string& text);

struct SolverOptions {
  // Seeded random starts for opt0, on top of the deterministic starts.
  std::size_t restarts = 8;
  std::size_t max_iters = 5000;
  double step_tol = 1e-11;
  double constraint_tol = 1e-10;
  std::uint64_t seed = 0;
  // Workers for independent starts. Results do not depend on this value.
  std::size_t threads = 1;

  void Validate() const;
};

struct SolveResult {
  PerturbationProfile profile;
  // The solved model's own objective (see objective_worst_case and
  // variance_sum).
  double objective = 0.0;
  OptModel model = OptModel::kOpt0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
};

// sum_i m_i b_i(1-b_i)/(a_i-b_i)^2 + max_i (1-a_i-b_i)/(a_i-b_i).
double objective_worst_case(const PerturbationProfile& profile, const PrivacyModel& model);
// sum_i m_i b_i(1-b_i)/(a_i-b_i)^2: the objective of opt1 and opt2.
double variance_sum(const PerturbationProfile& profile, const PrivacyModel& model);

SolveResult solve_opt0(const PrivacyModel& model, const SolverOptions& options = {});
SolveResult solve_opt1(const PrivacyModel& model, const SolverOptions& options = {});
SolveResult solve_opt2(const PrivacyModel& model, const SolverOptions& options = {});
SolveResult solve(OptModel which, const PrivacyModel& model, const SolverOptions& options = {});

enum class Baseline { kRappor, kOue };

std::string to_string(Baseline baseline);

// The uniform RAPPOR or OUE profile at budget eps over the model's levels.
PerturbationProfile baseline_profile(Baseline baseline, double eps, const PrivacyModel& model);
BitProbs baseline_probs(Baseline baseline, double eps);

// p = e^eps/(e^eps+m-1), q = 1/(e^eps+m-1). Requires m >= 2.
GrrParams grr_params(double eps, std::size_t m);

}  // namespace idldp

#endif  // IDLDP_OPTIMIZER_H_
