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

#include "idldp/idldp.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "idldp/data.h"
#include "idldp/error.h"
#include "idldp/experiment.h"
#include "idldp/model.h"
#include "idldp/optimizer.h"
#include "idldp/privacy.h"
#include "idldp/serialization.h"
#include "json.hpp"

struct idldp_model {
  idldp::PrivacyModel model;
};

struct idldp_profile {
  idldp::ProfileDocument doc;
};

struct idldp_dataset {
  idldp::Dataset data;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

idldp_status Fail(idldp_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn and maps exceptions onto status codes.
template <typename Fn>
idldp_status Guard(Fn&& fn) {
  try {
    fn();
    return IDLDP_OK;
  } catch (const idldp::SolverError& e) {
    return Fail(IDLDP_SOLVER_ERROR, e.what());
  } catch (const idldp::EnumerationCapExceeded& e) {
    return Fail(IDLDP_ENUMERATION_CAP, e.what());
  } catch (const idldp::ParseError& e) {
    return Fail(IDLDP_PARSE_ERROR, e.what());
  } catch (const idldp::IoError& e) {
    return Fail(IDLDP_IO_ERROR, e.what());
  } catch (const std::out_of_range& e) {
    return Fail(IDLDP_OUT_OF_RANGE, e.what());
  } catch (const std::invalid_argument& e) {
    return Fail(IDLDP_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(IDLDP_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(IDLDP_INTERNAL, e.what());
  } catch (...) {
    return Fail(IDLDP_INTERNAL, "unknown error");
  }
}

void Require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

char* CopyString(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

idldp::RKind ToRKind(idldp_r_kind kind) {
  switch (kind) {
    case IDLDP_R_MIN:
      return idldp::RKind::kMin;
    case IDLDP_R_AVG:
      return idldp::RKind::kAvg;
  }
  throw std::invalid_argument("unknown r kind");
}

idldp::SolverOptions ToOptions(const idldp_solver_options* options) {
  idldp::SolverOptions out;
  if (options != nullptr) {
    out.restarts = options->restarts;
    out.max_iters = options->max_iters;
    out.step_tol = options->step_tol;
    out.constraint_tol = options->constraint_tol;
    out.seed = options->seed;
    out.threads = options->threads;
  }
  out.Validate();
  return out;
}

json ReportJson(const idldp::AuditReport& r) {
  return {{"name", r.name},           {"passed", r.passed},
          {"max_ratio", r.max_ratio}, {"bound", r.bound},
          {"slack", r.slack},         {"worst_x", r.worst_x},
          {"worst_x_prime", r.worst_x_prime}, {"pairs_checked", r.pairs_checked}};
}

// The first `keep` items that still cover every level: one item per level
// first, then the lowest remaining ids.
idldp::PrivacyModel ReduceModel(const idldp::PrivacyModel& model, std::size_t keep) {
  const std::size_t m = model.universe_size();
  keep = std::min(m, std::max(keep, model.num_levels()));
  std::vector<bool> chosen(m, false);
  std::vector<bool> covered(model.num_levels(), false);
  std::size_t count = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t level = model.item_levels()[k];
    if (!covered[level]) {
      covered[level] = true;
      chosen[k] = true;
      ++count;
    }
  }
  for (std::size_t k = 0; k < m && count < keep; ++k) {
    if (!chosen[k]) {
      chosen[k] = true;
      ++count;
    }
  }
  std::vector<std::size_t> levels;
  for (std::size_t k = 0; k < m; ++k) {
    if (chosen[k]) levels.push_back(model.item_levels()[k]);
  }
  const auto budgets = model.budgets();
  return idldp::PrivacyModel(std::vector<double>(budgets.begin(), budgets.end()),
                             std::move(levels), model.r_kind());
}

std::vector<double> ParseDoubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto first = token.find_first_not_of(" \t");
    if (first == std::string::npos) throw std::invalid_argument("empty list entry");
    const auto last = token.find_last_not_of(" \t");
    token = token.substr(first, last - first + 1);
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0' || !std::isfinite(v)) {
      throw std::invalid_argument("bad number '" + token + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::uint64_t ParseUnsigned(const std::string& key, const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument(key + " must be a non-negative integer");
  }
  try {
    return std::stoull(text);
  } catch (const std::out_of_range&) {
    throw std::invalid_argument(key + " is too large");
  }
}

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

idldp::SimulationConfig ParseSimulationConfig(const std::string& text) {
  idldp::SimulationConfig config;
  std::stringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = Trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw idldp::ParseError("expected key=value", line_no);
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    config.echo.emplace_back(key, value);
    if (key == "mechanisms") {
      config.mechanisms.clear();
      std::stringstream list(value);
      std::string name;
      while (std::getline(list, name, ',')) config.mechanisms.push_back(idldp::parse_mechanism(Trim(name)));
    } else if (key == "model") {
      config.model = idldp::parse_opt_model(value);
    } else if (key == "r_kind") {
      config.r_kind = idldp::parse_r_kind(value);
    } else if (key == "epsilons") {
      config.epsilons = idldp::parse_budget_list(value);
    } else if (key == "level_multipliers") {
      config.level_multipliers = ParseDoubles(value);
    } else if (key == "level_fractions") {
      config.level_fractions = ParseDoubles(value);
    } else if (key == "repeats") {
      config.repeats = ParseUnsigned(key, value);
    } else if (key == "k") {
      config.ks.clear();
      std::stringstream list(value);
      std::string k;
      while (std::getline(list, k, ',')) config.ks.push_back(ParseUnsigned(key, Trim(k)));
    } else if (key == "ell") {
      config.ell = ParseUnsigned(key, value);
    } else if (key == "seed") {
      config.seed = ParseUnsigned(key, value);
    } else if (key == "threads") {
      config.threads = std::max<std::size_t>(1, ParseUnsigned(key, value));
    } else if (key == "report_path") {
      if (value == "aggregate") {
        config.report_path = idldp::ReportPath::kAggregate;
      } else if (value == "per-user" || value == "per_user") {
        config.report_path = idldp::ReportPath::kPerUser;
      } else {
        throw std::invalid_argument("report_path must be aggregate or per-user");
      }
    } else if (key == "identity") {
      config.identity_channel = ParseUnsigned(key, value) != 0;
    } else if (key == "solver.restarts") {
      config.solver.restarts = ParseUnsigned(key, value);
    } else if (key == "solver.max_iters") {
      config.solver.max_iters = ParseUnsigned(key, value);
    } else if (key == "solver.seed") {
      config.solver.seed = ParseUnsigned(key, value);
    }
  }
  return config;
}

}  // namespace

extern "C" {

const char* idldp_version(void) { return "1.0.0"; }

const char* idldp_status_string(idldp_status status) {
  switch (status) {
    case IDLDP_OK:
      return "ok";
    case IDLDP_INVALID_ARGUMENT:
      return "invalid argument";
    case IDLDP_OUT_OF_RANGE:
      return "out of range";
    case IDLDP_SOLVER_ERROR:
      return "solver failure";
    case IDLDP_ENUMERATION_CAP:
      return "enumeration cap exceeded";
    case IDLDP_PARSE_ERROR:
      return "parse error";
    case IDLDP_IO_ERROR:
      return "i/o error";
    case IDLDP_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* idldp_last_error(void) { return g_last_error.c_str(); }

void idldp_string_free(char* text) { std::free(text); }

idldp_status idldp_parse_budget(const char* text, double* out) {
  return Guard([&] {
    Require(text != nullptr && out != nullptr, "null argument");
    *out = idldp::parse_budget(text);
  });
}

idldp_status idldp_model_from_sizes(const double* budgets, const size_t* sizes, size_t levels,
                                    idldp_r_kind r_kind, idldp_model** out) {
  return Guard([&] {
    Require(budgets != nullptr && sizes != nullptr && out != nullptr, "null argument");
    *out = new idldp_model{idldp::PrivacyModel::FromLevelSizes(
        std::vector<double>(budgets, budgets + levels),
        std::vector<std::size_t>(sizes, sizes + levels), ToRKind(r_kind))};
  });
}

idldp_status idldp_model_from_levels(const double* budgets, size_t levels,
                                     const size_t* item_levels, size_t m, idldp_r_kind r_kind,
                                     int compact, idldp_model** out) {
  return Guard([&] {
    Require(budgets != nullptr && item_levels != nullptr && out != nullptr, "null argument");
    std::vector<double> b(budgets, budgets + levels);
    std::vector<std::size_t> l(item_levels, item_levels + m);
    *out = new idldp_model{compact != 0
                               ? idldp::PrivacyModel::CompactLevels(b, l, ToRKind(r_kind))
                               : idldp::PrivacyModel(std::move(b), std::move(l), ToRKind(r_kind))};
  });
}

void idldp_model_free(idldp_model* model) { delete model; }

size_t idldp_model_num_levels(const idldp_model* model) {
  return model == nullptr ? 0 : model->model.num_levels();
}

size_t idldp_model_universe_size(const idldp_model* model) {
  return model == nullptr ? 0 : model->model.universe_size();
}

idldp_status idldp_model_budget(const idldp_model* model, size_t level, double* out) {
  return Guard([&] {
    Require(model != nullptr && out != nullptr, "null argument");
    *out = model->model.budget(level);
  });
}

idldp_status idldp_model_level_of(const idldp_model* model, uint32_t item, size_t* out) {
  return Guard([&] {
    Require(model != nullptr && out != nullptr, "null argument");
    *out = model->model.level_of(item);
  });
}

void idldp_solver_options_default(idldp_solver_options* options) {
  if (options == nullptr) return;
  const idldp::SolverOptions d;
  *options = {d.restarts, d.max_iters, d.step_tol, d.constraint_tol, d.seed, d.threads};
}

idldp_status idldp_solve(const idldp_model* model, idldp_opt_model which,
                         const idldp_solver_options* options, idldp_profile** out) {
  return Guard([&] {
    Require(model != nullptr && out != nullptr, "null argument");
    idldp::OptModel m;
    switch (which) {
      case IDLDP_OPT0:
        m = idldp::OptModel::kOpt0;
        break;
      case IDLDP_OPT1:
        m = idldp::OptModel::kOpt1;
        break;
      case IDLDP_OPT2:
        m = idldp::OptModel::kOpt2;
        break;
      default:
        throw std::invalid_argument("unknown optimization model");
    }
    const idldp::SolverOptions opts = ToOptions(options);
    idldp::SolveResult result = idldp::solve(m, model->model, opts);
    *out = new idldp_profile{idldp::ProfileDocument{
        model->model, std::move(result.profile),
        idldp::SolverMetadata{idldp::to_string(m), result.objective, opts.seed}}};
  });
}

idldp_status idldp_profile_baseline(const idldp_model* model, idldp_baseline which, double eps,
                                    idldp_profile** out) {
  return Guard([&] {
    Require(model != nullptr && out != nullptr, "null argument");
    Require(which == IDLDP_RAPPOR || which == IDLDP_OUE, "unknown baseline");
    const auto b = which == IDLDP_RAPPOR ? idldp::Baseline::kRappor : idldp::Baseline::kOue;
    *out = new idldp_profile{idldp::ProfileDocument{
        model->model, idldp::baseline_profile(b, eps, model->model), std::nullopt}};
  });
}

idldp_status idldp_profile_create(const idldp_model* model, const double* a, const double* b,
                                  size_t levels, idldp_profile** out) {
  return Guard([&] {
    Require(model != nullptr && a != nullptr && b != nullptr && out != nullptr, "null argument");
    Require(levels == model->model.num_levels(), "profile and model level counts differ");
    std::vector<idldp::BitProbs> probs;
    for (std::size_t i = 0; i < levels; ++i) probs.push_back({a[i], b[i]});
    *out = new idldp_profile{idldp::ProfileDocument{
        model->model, idldp::PerturbationProfile::WithDummyFromModel(probs, model->model),
        std::nullopt}};
  });
}

void idldp_profile_free(idldp_profile* profile) { delete profile; }

size_t idldp_profile_num_levels(const idldp_profile* profile) {
  return profile == nullptr ? 0 : profile->doc.profile.num_levels();
}

idldp_status idldp_profile_level(const idldp_profile* profile, size_t level, double* a,
                                 double* b) {
  return Guard([&] {
    Require(profile != nullptr && a != nullptr && b != nullptr, "null argument");
    const idldp::BitProbs& p = profile->doc.profile.level(level);
    *a = p.a;
    *b = p.b;
  });
}

idldp_status idldp_profile_dummy(const idldp_profile* profile, double* a, double* b) {
  return Guard([&] {
    Require(profile != nullptr && a != nullptr && b != nullptr, "null argument");
    *a = profile->doc.profile.dummy().a;
    *b = profile->doc.profile.dummy().b;
  });
}

idldp_status idldp_profile_model(const idldp_profile* profile, idldp_model** out) {
  return Guard([&] {
    Require(profile != nullptr && out != nullptr, "null argument");
    *out = new idldp_model{profile->doc.model};
  });
}

idldp_status idldp_profile_objectives(const idldp_profile* profile, double* worst_case,
                                      double* variance_sum) {
  return Guard([&] {
    Require(profile != nullptr, "null argument");
    if (worst_case != nullptr) {
      *worst_case = idldp::objective_worst_case(profile->doc.profile, profile->doc.model);
    }
    if (variance_sum != nullptr) {
      *variance_sum = idldp::variance_sum(profile->doc.profile, profile->doc.model);
    }
  });
}

double idldp_profile_solver_objective(const idldp_profile* profile) {
  if (profile == nullptr || !profile->doc.solver) return std::numeric_limits<double>::quiet_NaN();
  return profile->doc.solver->objective;
}

idldp_status idldp_profile_serialize(const idldp_profile* profile, char** out) {
  return Guard([&] {
    Require(profile != nullptr && out != nullptr, "null argument");
    *out = CopyString(
        idldp::serialize_profile(profile->doc.profile, profile->doc.model, profile->doc.solver));
  });
}

idldp_status idldp_profile_parse(const char* text, idldp_profile** out) {
  return Guard([&] {
    Require(text != nullptr && out != nullptr, "null argument");
    *out = new idldp_profile{idldp::parse_profile(text)};
  });
}

idldp_status idldp_check(const idldp_profile* profile, double tol, idldp_check_result* out) {
  return Guard([&] {
    Require(profile != nullptr && out != nullptr, "null argument");
    const idldp::AuditReport r = idldp::check_idldp(profile->doc.profile, profile->doc.model, tol);
    out->passed = r.passed ? 1 : 0;
    out->max_ratio = r.max_ratio;
    out->bound = r.bound;
    out->slack = r.slack;
    out->pairs_checked = r.pairs_checked;
    std::snprintf(out->worst_x, sizeof(out->worst_x), "%s", r.worst_x.c_str());
    std::snprintf(out->worst_x_prime, sizeof(out->worst_x_prime), "%s", r.worst_x_prime.c_str());
  });
}

void idldp_audit_options_default(idldp_audit_options* options) {
  if (options == nullptr) return;
  *options = {3, 3, 2, idldp::kAuditTolerance, idldp::kDefaultEnumerationCap};
}

idldp_status idldp_audit(const idldp_profile* profile, const idldp_audit_options* options,
                         char** json_out, int* all_passed) {
  return Guard([&] {
    Require(profile != nullptr && json_out != nullptr, "null argument");
    idldp_audit_options opts;
    idldp_audit_options_default(&opts);
    if (options != nullptr) opts = *options;
    Require(opts.bruteforce_m >= 1, "bruteforce_m must be at least 1");
    const idldp::PerturbationProfile& prof = profile->doc.profile;
    const idldp::PrivacyModel& model = profile->doc.model;
    const bool min_kind = model.r_kind() == idldp::RKind::kMin;
    bool passed = true;
    json doc;
    doc["r_kind"] = idldp::to_string(model.r_kind());
    doc["universe"] = model.universe_size();
    doc["levels"] = model.num_levels();

    const idldp::AuditReport analytic = idldp::check_idldp(prof, model, opts.tol);
    passed = passed && analytic.passed;
    doc["analytic"] = ReportJson(analytic);

    // Brute-force audits on a reduced universe that keeps every level.
    const idldp::PrivacyModel reduced = ReduceModel(model, opts.bruteforce_m);
    const idldp::UnaryChannel channel = idldp::UnaryChannel::ForProfile(prof, reduced);
    const std::vector<idldp::ItemSet> inputs = idldp::singleton_inputs(reduced.universe_size());
    std::vector<double> budgets, doubled;
    for (std::size_t k = 1; k <= reduced.universe_size(); ++k) {
      budgets.push_back(reduced.item_budget(static_cast<idldp::Item>(k)));
      doubled.push_back(2.0 * budgets.back());
    }
    doc["bruteforce_universe"] = reduced.universe_size();
    const idldp::ExactMechanism* single[] = {&channel};
    const idldp::AuditReport brute = idldp::audit_bruteforce(
        single, inputs, budgets, model.r_kind(), opts.tol, opts.enumeration_cap);
    passed = passed && brute.passed;
    doc["bruteforce_single"] = ReportJson(brute);

    const double ldp_eps = min_kind ? idldp::ldp_equivalent_budget(reduced) : reduced.max_budget();
    const idldp::AuditReport ldp =
        idldp::audit_ldp(channel, inputs, ldp_eps, opts.tol, opts.enumeration_cap);
    passed = passed && ldp.passed;
    doc["ldp_equivalence"] = ReportJson(ldp);
    doc["ldp_equivalence"]["epsilon"] = ldp_eps;

    const idldp::ExactMechanism* pair[] = {&channel, &channel};
    const idldp::AuditReport composed = idldp::audit_bruteforce(
        pair, inputs, doubled, model.r_kind(), opts.tol, opts.enumeration_cap);
    passed = passed && composed.passed;
    doc["composition"] = ReportJson(composed);

    if (min_kind) {
      // Posterior leakage under a uniform prior against the closed-form bound.
      const std::size_t m = reduced.universe_size();
      const std::vector<double> prior(m, 1.0 / static_cast<double>(m));
      json items = json::array();
      bool leak_ok = true;
      for (std::size_t x = 1; x <= m; ++x) {
        const auto item = static_cast<idldp::Item>(x);
        const idldp::LeakageBounds exact = idldp::leakage_bounds(
            prior, prof, reduced, item, idldp::LeakageMode::kExact, opts.enumeration_cap);
        const idldp::LeakageBounds bound =
            idldp::leakage_bounds(prior, prof, reduced, item, idldp::LeakageMode::kBound);
        const bool ok = exact.lower >= bound.lower * (1.0 - opts.tol) &&
                        exact.upper <= bound.upper * (1.0 + opts.tol);
        leak_ok = leak_ok && ok;
        items.push_back({{"item", x},
                         {"exact", {exact.lower, exact.upper}},
                         {"bound", {bound.lower, bound.upper}},
                         {"passed", ok}});
      }
      passed = passed && leak_ok;
      doc["leakage"] = {{"passed", leak_ok}, {"items", items}};
    } else {
      doc["leakage"] = {{"skipped", "closed-form bound assumes r=min"}};
    }
    json symbolic = json::object();
    for (const auto& [name, row] : idldp::symbolic_leakage_rows()) symbolic[name] = row;
    doc["leakage_symbolic"] = symbolic;

    if (opts.itemset_m == 0) {
      doc["itemset"] = {{"skipped", "disabled"}};
    } else if (!min_kind) {
      doc["itemset"] = {{"skipped", "item-set bound assumes r=min"}};
    } else {
      const idldp::PrivacyModel small = ReduceModel(model, opts.itemset_m);
      json runs = json::array();
      for (std::size_t ell = 1; ell <= opts.max_ell; ++ell) {
        const idldp::ItemsetAudit audit = idldp::audit_itemset(
            prof, small, ell, model.min_budget(), opts.tol, opts.enumeration_cap);
        passed = passed && audit.passed();
        runs.push_back({{"ell", ell},
                        {"universe", small.universe_size()},
                        {"budget_bound", ReportJson(audit.budget_bound)},
                        {"mixture_bound", ReportJson(audit.mixture_bound)},
                        {"passed", audit.passed()}});
      }
      doc["itemset"] = runs;
    }
    doc["all_passed"] = passed;
    *json_out = CopyString(doc.dump(2));
    if (all_passed != nullptr) *all_passed = passed ? 1 : 0;
  });
}

idldp_status idldp_dataset_generate(idldp_generator kind, size_t n, size_t m, double alpha,
                                    uint64_t seed, idldp_dataset** out) {
  return Guard([&] {
    Require(out != nullptr, "null argument");
    switch (kind) {
      case IDLDP_POWERLAW:
        *out = new idldp_dataset{idldp::gen_powerlaw(n, m, alpha, seed)};
        return;
      case IDLDP_UNIFORM:
        *out = new idldp_dataset{idldp::gen_uniform(n, m, seed)};
        return;
    }
    throw std::invalid_argument("unknown generator");
  });
}

idldp_status idldp_dataset_create(size_t m, const uint32_t* items, const size_t* offsets,
                                  size_t n, idldp_dataset** out) {
  return Guard([&] {
    Require(offsets != nullptr && out != nullptr, "null argument");
    Require(items != nullptr || offsets[n] == 0, "null items");
    std::vector<idldp::ItemSet> records;
    records.reserve(n);
    for (std::size_t u = 0; u < n; ++u) {
      Require(offsets[u] <= offsets[u + 1], "offsets must be non-decreasing");
      records.emplace_back(items + offsets[u], items + offsets[u + 1]);
    }
    *out = new idldp_dataset{idldp::Dataset(m, std::move(records))};
  });
}

idldp_status idldp_dataset_load(const char* path, idldp_format format, idldp_dataset** out,
                                char** warnings) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    Require(format == IDLDP_SPACE_SEP_IDS || format == IDLDP_CSV_USER_ITEM, "unknown format");
    idldp::LoadResult result = idldp::load_transactions(
        path, format == IDLDP_SPACE_SEP_IDS ? idldp::TransactionFormat::kSpaceSepIds
                                            : idldp::TransactionFormat::kCsvUserItem);
    if (warnings != nullptr) {
      const json w = {{"duplicates_dropped", result.duplicates_dropped},
                      {"blank_lines", result.blank_lines},
                      {"warnings", result.warnings}};
      *warnings = CopyString(w.dump());
    }
    *out = new idldp_dataset{std::move(result.dataset)};
  });
}

idldp_status idldp_dataset_save(const idldp_dataset* dataset, const char* path) {
  return Guard([&] {
    Require(dataset != nullptr && path != nullptr, "null argument");
    idldp::save_transactions(dataset->data, path);
  });
}

void idldp_dataset_free(idldp_dataset* dataset) { delete dataset; }

size_t idldp_dataset_num_records(const idldp_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->data.num_records();
}

size_t idldp_dataset_universe_size(const idldp_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->data.universe_size();
}

idldp_status idldp_dataset_true_counts(const idldp_dataset* dataset, uint64_t* counts,
                                       size_t len) {
  return Guard([&] {
    Require(dataset != nullptr && counts != nullptr, "null argument");
    Require(len == dataset->data.universe_size(), "counts buffer must hold one entry per item");
    const std::vector<std::uint64_t> c = idldp::true_counts(dataset->data);
    std::copy(c.begin(), c.end(), counts);
  });
}

idldp_status idldp_dataset_summary(const idldp_dataset* dataset, char** json_out) {
  return Guard([&] {
    Require(dataset != nullptr && json_out != nullptr, "null argument");
    const idldp::DatasetSummary s = idldp::summarize(dataset->data);
    const json doc = {{"n", s.n},
                      {"m", s.m},
                      {"total_items", s.total_items},
                      {"mean_record_size", s.mean_record_size},
                      {"max_record_size", s.max_record_size},
                      {"distinct_items", s.distinct_items}};
    *json_out = CopyString(doc.dump());
  });
}

idldp_status idldp_simulate(const idldp_dataset* dataset, const char* config,
                            const idldp_profile* profile, char** csv) {
  return Guard([&] {
    Require(dataset != nullptr && config != nullptr && csv != nullptr, "null argument");
    idldp::SimulationConfig cfg = ParseSimulationConfig(config);
    if (profile != nullptr) cfg.profile = profile->doc;
    const idldp::SimulationResult result = idldp::run_simulation(dataset->data, cfg);
    *csv = CopyString(idldp::format_simulation_csv(result, cfg));
  });
}

}  // extern "C"
