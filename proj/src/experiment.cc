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

#include "idldp/experiment.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "idldp/data.h"
#include "idldp/estimation.h"
#include "idldp/mechanisms.h"
#include "idldp/metrics.h"
#include "idldp/random.h"

namespace idldp {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();


// Channel inputs shared by every run at one base budget.
struct BudgetSetup {
  double eps_base = 0.0;
  PrivacyModel model;
  std::optional<PerturbationProfile> idue;
  std::size_t ell = 1;
};

struct RunInput {
  const Dataset* data;
  std::vector<std::uint64_t> truth;
};

struct Task {
  std::size_t mech_index;
  std::size_t budget_index;
  std::size_t repeat;
};

PerturbationProfile IdentityProfile(std::size_t levels) {
  return PerturbationProfile::Unchecked(std::vector<BitProbs>(levels, {1.0, 0.0}), {1.0, 0.0});
}

std::string Fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

double Mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? kNan : sum / static_cast<double>(values.size());
}

ReportBatch PerturbUnary(const std::vector<Item>& positions, const BitLayout& layout,
                         std::size_t ell, std::uint64_t run_seed, ReportPath path,
                         RandomSource& run_rng) {
  const std::size_t len = layout.length();
  if (path == ReportPath::kAggregate) {
    std::vector<std::uint64_t> onehot(len, 0);
    for (Item p : positions) ++onehot[p - 1];
    return sample_ue_counts(onehot, positions.size(), layout, run_rng, ell);
  }
  GroupedPerturber perturb(layout);
  ReportBatch batch;
  batch.n = positions.size();
  batch.padded_len = ell;
  batch.bit_counts.assign(len, 0);
  for (std::size_t u = 0; u < positions.size(); ++u) {
    RandomSource rng(run_seed, 2 * u + 1);
    const BitVector report = perturb(encode_onehot(positions[u], len), rng);
    const auto words = report.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
      std::uint64_t word = words[w];
      while (word != 0) {
        ++batch.bit_counts[w * 64 + static_cast<std::size_t>(std::countr_zero(word))];
        word &= word - 1;
      }
    }
  }
  return batch;
}

SimulationRow RunOne(const SimulationConfig& config, const BudgetSetup& setup, Mechanism mech,
                     const RunInput& input, std::uint64_t run_seed) {
  const Dataset& data = *input.data;
  const std::vector<std::uint64_t>& truth = input.truth;
  const std::uint64_t n = data.num_records();
  const PrivacyModel& model = setup.model;
  const std::size_t m = model.universe_size();
  const double eps_min = model.min_budget();
  RandomSource run_rng(run_seed, 0);

  SimulationRow row;
  row.mechanism = mech;
  row.epsilon_base = setup.eps_base;
  FrequencyEstimate est;

  if (mech == Mechanism::kGrr) {
    const GrrParams params = config.identity_channel ? GrrParams{1.0, 0.0} : grr_params(eps_min, m);
    std::vector<std::uint64_t> observed(m, 0);
    for (std::size_t u = 0; u < n; ++u) {
      RandomSource rng(run_seed, 2 * u + 1);
      ++observed[grr_perturb(data.record(u).front(), m, params, rng) - 1];
    }
    est = grr_estimate(observed, n, params);
    row.mse_theory = grr_theoretical_mse(params, truth, n).total / static_cast<double>(n);
  } else {
    PerturbationProfile profile = IdentityProfile(model.num_levels());
    if (!config.identity_channel) {
      if (mech == Mechanism::kRappor) profile = baseline_profile(Baseline::kRappor, eps_min, model);
      if (mech == Mechanism::kOue) profile = baseline_profile(Baseline::kOue, eps_min, model);
      if (mech == Mechanism::kIdue || mech == Mechanism::kIduePs) profile = *setup.idue;
    }
    if (mech == Mechanism::kIduePs) {
      const std::size_t ell = setup.ell;
      std::vector<Item> sampled(n);
      for (std::size_t u = 0; u < n; ++u) {
        RandomSource rng(run_seed, 2 * u + 2);
        sampled[u] = pad_and_sample(data.record(u), ell, m, rng);
      }
      const BitLayout layout = BitLayout::ForProfile(profile, model, ell);
      const ReportBatch batch =
          PerturbUnary(sampled, layout, ell, run_seed, config.report_path, run_rng);
      est = estimate_itemset(batch, profile, model, ell);
      row.mse_theory = theoretical_mse_itemset(profile, model, data, ell).total /
                       static_cast<double>(n);
    } else {
      std::vector<Item> items(n);
      for (std::size_t u = 0; u < n; ++u) items[u] = data.record(u).front();
      const BitLayout layout = BitLayout::ForProfile(profile, model);
      const ReportBatch batch = PerturbUnary(items, layout, 0, run_seed, config.report_path, run_rng);
      est = estimate_single(batch, profile, model);
      row.mse_theory = theoretical_mse(profile, model, truth, n).total / static_cast<double>(n);
    }
  }

  row.mse_emp = total_mse(est.estimates, truth, n);
  const auto positives = static_cast<std::size_t>(
      std::count_if(truth.begin(), truth.end(), [](std::uint64_t c) { return c > 0; }));
  for (std::size_t k : config.ks) {
    const bool defined = k <= positives;
    row.re.push_back(defined ? re_at_k(est.estimates, truth, k) : kNan);
    row.prec.push_back(defined ? precision_at_k(est.estimates, truth, k) : kNan);
  }
  return row;
}

}  // namespace

std::string to_string(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kGrr:
      return "GRR";
    case Mechanism::kRappor:
      return "RAPPOR";
    case Mechanism::kOue:
      return "OUE";
    case Mechanism::kIdue:
      return "IDUE";
    case Mechanism::kIduePs:
      return "IDUE-PS";
  }
  return "IDUE";
}

Mechanism parse_mechanism(const std::string& text) {
  std::string upper = text;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (Mechanism m : {Mechanism::kGrr, Mechanism::kRappor, Mechanism::kOue, Mechanism::kIdue,
                      Mechanism::kIduePs}) {
    if (upper == to_string(m)) return m;
  }
  if (upper == "IDUE_PS" || upper == "IDUEPS") return Mechanism::kIduePs;
  throw std::invalid_argument("unknown mechanism '" + text + "'");
}

void SimulationConfig::Validate() const {
  if (mechanisms.empty()) throw std::invalid_argument("no mechanisms selected");
  if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  if (!profile) {
    if (epsilons.empty()) throw std::invalid_argument("no base budgets given");
    for (double e : epsilons) {
      if (!(e > 0.0) || !std::isfinite(e)) throw std::invalid_argument("budgets must be positive");
    }
    if (level_multipliers.empty() || level_multipliers.size() != level_fractions.size()) {
      throw std::invalid_argument("level multipliers and fractions must pair up");
    }
    for (double x : level_multipliers) {
      if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument("level multipliers must be positive");
      }
    }
  }
  for (std::size_t k : ks) {
    if (k == 0) throw std::invalid_argument("k must be positive");
  }
  solver.Validate();
}

std::size_t default_padding_length(double mean_record_size, double eps_base) {
  const double target = eps_base >= 4.0 ? mean_record_size : mean_record_size / 2.0;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(target)));
}

SimulationResult run_simulation(const Dataset& dataset, const SimulationConfig& config) {
  config.Validate();
  if (dataset.num_records() == 0) throw std::invalid_argument("dataset has no records");
  const std::size_t m = dataset.universe_size();
  const bool needs_single = std::any_of(config.mechanisms.begin(), config.mechanisms.end(),
                                        [](Mechanism x) { return x != Mechanism::kIduePs; });
  const bool needs_sets = std::any_of(config.mechanisms.begin(), config.mechanisms.end(),
                                      [](Mechanism x) { return x == Mechanism::kIduePs; });
  for (Mechanism mech : config.mechanisms) {
    if (mech == Mechanism::kGrr && m < 2 && !config.identity_channel) {
      throw std::invalid_argument("GRR needs at least two items");
    }
  }

  RunInput single{nullptr, {}};
  Dataset projected;
  if (needs_single) {
    projected = dataset.single_item() ? dataset : first_item_projection(dataset);
    if (projected.num_records() == 0) throw std::invalid_argument("dataset has no items");
    single = {&projected, true_counts(projected)};
  }
  const RunInput sets{&dataset, true_counts(dataset)};

  std::vector<BudgetSetup> setups;
  if (config.profile) {
    const PrivacyModel& model = config.profile->model;
    if (model.universe_size() != m) {
      throw std::invalid_argument("profile universe does not match the dataset");
    }
    BudgetSetup s{model.min_budget(), model, config.profile->profile, 0};
    setups.push_back(std::move(s));
  } else {
    const std::vector<std::size_t> levels = assign_levels(m, config.level_fractions, config.seed);
    for (double eps : config.epsilons) {
      std::vector<double> budgets;
      for (double x : config.level_multipliers) budgets.push_back(eps * x);
      PrivacyModel model = PrivacyModel::CompactLevels(budgets, levels, config.r_kind);
      setups.push_back(BudgetSetup{eps, std::move(model), std::nullopt, 0});
    }
  }
  SimulationResult result;
  for (BudgetSetup& s : setups) {
    s.ell = config.ell > 0 ? config.ell
                           : default_padding_length(dataset.mean_record_size(), s.eps_base);
    result.ells.push_back(s.ell);
    const bool needs_idue =
        std::any_of(config.mechanisms.begin(), config.mechanisms.end(),
                    [](Mechanism x) { return x == Mechanism::kIdue || x == Mechanism::kIduePs; });
    if (needs_idue && !s.idue && !config.identity_channel) {
      SolverOptions options = config.solver;
      options.threads = std::max<std::size_t>(options.threads, config.threads);
      s.idue = solve(config.model, s.model, options).profile;
    }
  }
  (void)needs_sets;

  std::vector<Task> tasks;
  for (std::size_t mi = 0; mi < config.mechanisms.size(); ++mi) {
    for (std::size_t bi = 0; bi < setups.size(); ++bi) {
      for (std::size_t r = 0; r < config.repeats; ++r) tasks.push_back({mi, bi, r});
    }
  }
  std::vector<SimulationRow> rows(tasks.size());
  auto work = [&](std::size_t k) {
    const Task& task = tasks[k];
    const Mechanism mech = config.mechanisms[task.mech_index];
    const std::uint64_t run_seed = derive_seed(
        derive_seed(derive_seed(config.seed, static_cast<std::uint64_t>(mech) + 1),
                    task.budget_index),
        task.repeat);
    SimulationRow row = RunOne(config, setups[task.budget_index], mech,
                               mech == Mechanism::kIduePs ? sets : single, run_seed);
    row.repeat = static_cast<long>(task.repeat);
    if (config.identity_channel) {
      row.model = "identity";
    } else if (mech == Mechanism::kIdue || mech == Mechanism::kIduePs) {
      row.model = config.profile ? "file" : to_string(config.model);
    } else {
      row.model = "baseline";
    }
    rows[k] = std::move(row);
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(config.threads, tasks.size()));
  if (threads == 1) {
    for (std::size_t k = 0; k < tasks.size(); ++k) work(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = next++; k < tasks.size(); k = next++) work(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  result.rows = std::move(rows);
  for (std::size_t start = 0; start < result.rows.size(); start += config.repeats) {
    SimulationRow mean = result.rows[start];
    mean.repeat = -1;
    std::vector<double> emp, theory;
    std::vector<std::vector<double>> re(config.ks.size()), prec(config.ks.size());
    for (std::size_t r = 0; r < config.repeats; ++r) {
      const SimulationRow& row = result.rows[start + r];
      emp.push_back(row.mse_emp);
      theory.push_back(row.mse_theory);
      for (std::size_t k = 0; k < config.ks.size(); ++k) {
        re[k].push_back(row.re[k]);
        prec[k].push_back(row.prec[k]);
      }
    }
    mean.mse_emp = Mean(emp);
    mean.mse_theory = Mean(theory);
    for (std::size_t k = 0; k < config.ks.size(); ++k) {
      mean.re[k] = Mean(re[k]);
      mean.prec[k] = Mean(prec[k]);
    }
    result.means.push_back(std::move(mean));
  }
  return result;
}

std::string format_simulation_csv(const SimulationResult& result, const SimulationConfig& config) {
  std::ostringstream out;
  out << "# idldp-metrics v1\n";
  // Effective settings first, then caller-supplied keys that are not
  // settings (data source and the like). Thread count is never echoed so
  // the output does not depend on it.
  auto join = [](const auto& values, auto&& fmt) {
    std::string text;
    for (const auto& v : values) text += (text.empty() ? "" : ",") + fmt(v);
    return text;
  };
  auto num = [](double v) { return Fmt(v); };
  std::vector<std::pair<std::string, std::string>> effective{
      {"mechanisms", join(config.mechanisms, [](Mechanism x) { return to_string(x); })},
      {"model", config.profile ? std::string("file") : to_string(config.model)},
      {"r_kind", to_string(config.profile ? config.profile->model.r_kind() : config.r_kind)},
      {"epsilons", config.profile ? Fmt(config.profile->model.min_budget())
                                  : join(config.epsilons, num)},
      {"level_multipliers", join(config.level_multipliers, num)},
      {"level_fractions", join(config.level_fractions, num)},
      {"repeats", std::to_string(config.repeats)},
      {"k", join(config.ks, [](std::size_t k) { return std::to_string(k); })},
      {"ell", std::to_string(config.ell)},
      {"seed", std::to_string(config.seed)},
      {"report_path", config.report_path == ReportPath::kAggregate ? "aggregate" : "per-user"},
      {"identity", config.identity_channel ? "1" : "0"},
      {"solver.restarts", std::to_string(config.solver.restarts)},
      {"solver.max_iters", std::to_string(config.solver.max_iters)},
      {"solver.seed", std::to_string(config.solver.seed)},
  };
  for (const auto& [key, value] : effective) out << "# config " << key << '=' << value << '\n';
  for (const auto& [key, value] : config.echo) {
    const bool known = key == "threads" || std::any_of(effective.begin(), effective.end(),
                                                       [&](const auto& e) { return e.first == key; });
    if (!known) out << "# config " << key << '=' << value << '\n';
  }
  for (std::size_t i = 0; i < result.ells.size(); ++i) {
    out << "# config ell[" << i << "]=" << result.ells[i] << '\n';
  }
  out << "# note mse_emp = sum_i (est_i - true_i)^2 / n; mse_theory = sum_i Var[est_i] / n\n";
  if (std::find(config.mechanisms.begin(), config.mechanisms.end(), Mechanism::kIduePs) !=
      config.mechanisms.end()) {
    out << "# note IDUE-PS mse_theory is an approximation: l^2 times the single-item variance at "
           "the expected sampled counts\n";
  }
  out << "mechanism,model,epsilon_base,repeat,mse_emp,mse_theory";
  for (std::size_t k : config.ks) out << ",re_" << k << ",prec_" << k;
  out << '\n';
  auto emit = [&](const SimulationRow& row) {
    out << to_string(row.mechanism) << ',' << row.model << ',' << Fmt(row.epsilon_base) << ','
        << (row.repeat < 0 ? std::string("mean") : std::to_string(row.repeat)) << ','
        << Fmt(row.mse_emp) << ',' << Fmt(row.mse_theory);
    for (std::size_t k = 0; k < row.re.size(); ++k) out << ',' << Fmt(row.re[k]) << ',' << Fmt(row.prec[k]);
    out << '\n';
  };
  for (const SimulationRow& row : result.rows) emit(row);
  for (const SimulationRow& row : result.means) emit(row);
  return out.str();
}

}  // namespace idldp
