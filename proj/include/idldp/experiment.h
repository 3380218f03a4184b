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

// End-to-end simulation runner: perturb a dataset under each mechanism and
// budget, estimate, and score. Output is a versioned CSV.
//
// Every run draws from its own substream derived from (seed, mechanism,
// budget index, repeat), and per-user draws from (run seed, user), so the
// CSV is byte-identical for a given config regardless of thread count.

#ifndef IDLDP_EXPERIMENT_H_
#define IDLDP_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idldp/model.h"
#include "idldp/optimizer.h"
#include "idldp/serialization.h"

namespace idldp {

enum class Mechanism { kGrr, kRappor, kOue, kIdue, kIduePs };

std::string to_string(Mechanism mechanism);
Mechanism parse_mechanism(const std::string& text);

enum class ReportPath {
  // Per-position binomial counts; same law as aggregating per-user reports.
  kAggregate,
  // Every user's report is perturbed and aggregated individually.
  kPerUser,
};

struct SimulationConfig {
  std::vector<Mechanism> mechanisms{Mechanism::kRappor, Mechanism::kOue, Mechanism::kIdue};
  OptModel model = OptModel::kOpt0;
  RKind r_kind = RKind::kMin;
  // Base budgets; level budgets are base * level_multipliers.
  std::vector<double> epsilons{1.0, 2.0, 3.0, 4.0};
  std::vector<double> level_multipliers{1.0, 1.2, 2.0};
  std::vector<double> level_fractions{0.05, 0.05, 0.90};
  std::size_t repeats = 10;
  std::vector<std::size_t> ks{10};
  // Padding length for IDUE-PS; 0 selects default_padding_length().
  std::size_t ell = 0;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  ReportPath report_path = ReportPath::kAggregate;
  // Test hook: every channel becomes the identity (a=1, b=0; p=1, q=0).
  bool identity_channel = false;
  // Fixed model and profile for IDUE / IDUE-PS instead of solving; the
  // budget list is then the profile's minimum budget only.
  std::optional<ProfileDocument> profile;
  SolverOptions solver;
  // Extra key=value pairs echoed into the CSV header.
  std::vector<std::pair<std::string, std::string>> echo;

  void Validate() const;
};

// round(mean) when eps_base >= 4, otherwise max(1, round(mean / 2)).
std::size_t default_padding_length(double mean_record_size, double eps_base);

struct SimulationRow {
  Mechanism mechanism = Mechanism::kIdue;
  std::string model;
  double epsilon_base = 0.0;
  // Repeat index; -1 marks a mean row.
  long repeat = 0;
  double mse_emp = 0.0;
  double mse_theory = 0.0;
  std::vector<double> re;
  std::vector<double> prec;
};

struct SimulationResult {
  std::vector<SimulationRow> rows;
  std::vector<SimulationRow> means;
  // Padding length used at each base budget.
  std::vector<std::size_t> ells;
};

SimulationResult run_simulation(const Dataset& dataset, const SimulationConfig& config);

std::string format_simulation_csv(const SimulationResult& result, const SimulationConfig& config);

}  // namespace idldp

#endif  // IDLDP_EXPERIMENT_H_
